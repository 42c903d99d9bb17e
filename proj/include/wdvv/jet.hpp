#ifndef WDVV_JET_HPP
#define WDVV_JET_HPP

// Truncated multivariate Taylor expansions ("jets").
//
// A Jet<Scalar> of order k in n variables stores the Taylor coefficients of a
// function around some base point for every exponent multi-index of total
// degree <= k. Ring operations and elementary functions act on the stored
// coefficients and silently drop everything above degree k, which is exact
// for all coefficients that are kept.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "wdvv/errors.hpp"

namespace wdvv {

using Complex = std::complex<double>;
using MultiIndex = std::vector<int>;

/// Enumeration of the multi-indices of total degree <= order in graded
/// lexicographic order, with precomputed product and derivative tables.
/// Layouts are interned: one shared instance per (num_vars, order).
class JetLayout {
 public:
  struct ProductTerm {
    int lhs;
    int rhs;
    int out;
  };

  static std::shared_ptr<const JetLayout> get(int num_vars, int order);

  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }

  const MultiIndex& multi_index(int k) const { return indices_[k]; }
  int degree(int k) const { return degrees_[k]; }

  /// Position of a multi-index, or -1 when its degree exceeds the order.
  int position(std::span<const int> multi_index) const;

  /// All (lhs, rhs, out) with index(lhs) + index(rhs) = index(out).
  const std::vector<ProductTerm>& products() const { return products_; }

  /// For coefficient k and variable v: position of k - e_v, or -1.
  int lowered(int k, int var) const { return lowered_[k * num_vars_ + var]; }

  JetLayout(int num_vars, int order);

 private:
  int encode(std::span<const int> multi_index) const;

  int num_vars_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::vector<int> lookup_;
  std::vector<ProductTerm> products_;
  std::vector<int> lowered_;
};

namespace detail {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Scalar>
bool on_negative_real_axis(const Scalar& z) {
  if constexpr (is_complex<Scalar>::value) {
    return z.real() <= 0.0 && std::abs(z.imag()) <= 1e-14 * std::abs(z.real());
  } else {
    return z <= Scalar(0);
  }
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

template <typename Scalar>
class Jet {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Jet(int num_vars, int order)
      : layout_(JetLayout::get(num_vars, order)),
        coeffs_(Coefficients::Zero(layout_->size())) {}

  explicit Jet(std::shared_ptr<const JetLayout> layout)
      : layout_(std::move(layout)), coeffs_(Coefficients::Zero(layout_->size())) {}

  static Jet constant(const Scalar& value, int num_vars, int order) {
    Jet j(num_vars, order);
    j.coeffs_[0] = value;
    return j;
  }

  /// The coordinate function u^index expanded at base_value.
  static Jet variable(int index, const Scalar& base_value, int num_vars, int order) {
    if (index < 0 || index >= num_vars) {
      throw DimensionError("jet variable index " + std::to_string(index) +
                           " out of range for " + std::to_string(num_vars) + " variables");
    }
    Jet j(num_vars, order);
    j.coeffs_[0] = base_value;
    if (order >= 1) j.coeffs_[1 + index] = Scalar(1);
    return j;
  }

  int num_vars() const { return layout_->num_vars(); }
  int order() const { return layout_->order(); }
  const JetLayout& layout() const { return *layout_; }
  const std::shared_ptr<const JetLayout>& layout_ptr() const { return layout_; }

  Scalar value() const { return coeffs_[0]; }
  const Coefficients& coefficients() const { return coeffs_; }
  Coefficients& coefficients() { return coeffs_; }

  /// Taylor coefficient of the given multi-index (zero above the order).
  Scalar coeff(std::span<const int> multi_index) const {
    check_length(multi_index);
    const int k = layout_->position(multi_index);
    return k < 0 ? Scalar(0) : coeffs_[k];
  }
  Scalar coeff(std::initializer_list<int> multi_index) const {
    return coeff(std::span<const int>(multi_index.begin(), multi_index.size()));
  }

  /// True partial derivative: coefficient times the product of factorials.
  Scalar partial(std::span<const int> multi_index) const {
    check_length(multi_index);
    int total = 0;
    double scale = 1.0;
    for (int e : multi_index) {
      if (e < 0) throw DimensionError("negative exponent in multi-index");
      total += e;
      scale *= detail::factorial(e);
    }
    if (total > order()) {
      throw DimensionError("partial of degree " + std::to_string(total) +
                           " requested from a jet of order " + std::to_string(order()));
    }
    return coeffs_[layout_->position(multi_index)] * scale;
  }
  Scalar partial(std::initializer_list<int> multi_index) const {
    return partial(std::span<const int>(multi_index.begin(), multi_index.size()));
  }

  /// d/du^var as a jet of order - 1.
  Jet derivative(int var) const {
    if (var < 0 || var >= num_vars()) throw DimensionError("derivative variable out of range");
    if (order() == 0) throw DimensionError("cannot differentiate an order-0 jet");
    Jet d(num_vars(), order() - 1);
    for (int k = 0; k < d.layout_->size(); ++k) {
      MultiIndex mi = d.layout_->multi_index(k);
      mi[var] += 1;
      d.coeffs_[k] = coeffs_[layout_->position(mi)] * Scalar(mi[var]);
    }
    return d;
  }

  Jet truncated(int new_order) const {
    if (new_order > order()) throw DimensionError("cannot raise jet order by truncation");
    Jet t(num_vars(), new_order);
    t.coeffs_ = coeffs_.head(t.layout_->size());
    return t;
  }

  /// The jet minus its constant term.
  Jet nilpotent_part() const {
    Jet h = *this;
    h.coeffs_[0] = Scalar(0);
    return h;
  }

  Jet operator-() const {
    Jet r = *this;
    r.coeffs_ = -r.coeffs_;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    check_shape(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_shape(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    check_shape(o);
    Coefficients out = Coefficients::Zero(coeffs_.size());
    for (const auto& t : layout_->products()) out[t.out] += coeffs_[t.lhs] * o.coeffs_[t.rhs];
    coeffs_ = std::move(out);
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    check_shape(o);
    return *this *= reciprocal(o);
  }

  Jet& operator+=(const Scalar& s) {
    coeffs_[0] += s;
    return *this;
  }
  Jet& operator-=(const Scalar& s) {
    coeffs_[0] -= s;
    return *this;
  }
  Jet& operator*=(const Scalar& s) {
    coeffs_ *= s;
    return *this;
  }
  Jet& operator/=(const Scalar& s) {
    if (s == Scalar(0)) throw DomainError("jet division by zero scalar");
    coeffs_ /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator+(Jet a, const Scalar& s) { return a += s; }
  friend Jet operator+(const Scalar& s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, const Scalar& s) { return a -= s; }
  friend Jet operator-(const Scalar& s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, const Scalar& s) { return a *= s; }
  friend Jet operator*(const Scalar& s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const Scalar& s) { return a /= s; }
  friend Jet operator/(const Scalar& s, const Jet& a) { return reciprocal(a) *= s; }

  /// Evaluates sum_k series[k] * h^k with h the nilpotent part (Horner form).
  /// series[k] is the k-th univariate Taylor coefficient of the outer function.
  Jet compose(std::span<const Scalar> series) const {
    const Jet h = nilpotent_part();
    const int top = std::min<int>(order(), static_cast<int>(series.size()) - 1);
    Jet result = constant(series[top], num_vars(), order());
    for (int k = top - 1; k >= 0; --k) {
      result *= h;
      result += series[k];
    }
    return result;
  }

  friend Jet reciprocal(const Jet& a) {
    const Scalar a0 = a.value();
    if (a0 == Scalar(0)) throw DomainError("jet division by a jet with zero constant term");
    std::vector<Scalar> series(a.order() + 1);
    Scalar p = Scalar(1) / a0;
    for (int k = 0; k <= a.order(); ++k) {
      series[k] = p;
      p *= -Scalar(1) / a0;
    }
    return a.compose(series);
  }

 private:
  void check_shape(const Jet& o) const {
    if (layout_ != o.layout_) {
      throw DimensionError("jet shape mismatch: (" + std::to_string(num_vars()) + " vars, order " +
                           std::to_string(order()) + ") vs (" + std::to_string(o.num_vars()) +
                           " vars, order " + std::to_string(o.order()) + ")");
    }
  }
  void check_length(std::span<const int> multi_index) const {
    if (static_cast<int>(multi_index.size()) != num_vars()) {
      throw DimensionError("multi-index length does not match the number of jet variables");
    }
  }

  std::shared_ptr<const JetLayout> layout_;
  Coefficients coeffs_;
};

using ComplexJet = Jet<Complex>;

template <typename Scalar>
Jet<Scalar> jet_variable(int index, const Scalar& base_value, int num_vars, int order) {
  return Jet<Scalar>::variable(index, base_value, num_vars, order);
}

/// extract_partial: the partial derivative named by multi_index.
template <typename Scalar>
Scalar extract_partial(const Jet<Scalar>& a, std::span<const int> multi_index) {
  return a.partial(multi_index);
}

template <typename Scalar>
Jet<Scalar> exp(const Jet<Scalar>& a) {
  std::vector<Scalar> series(a.order() + 1);
  const Scalar e = std::exp(a.value());
  for (int k = 0; k <= a.order(); ++k) series[k] = e / detail::factorial(k);
  return a.compose(series);
}

/// Principal logarithm; rejects constant terms on the cut (-inf, 0].
template <typename Scalar>
Jet<Scalar> log(const Jet<Scalar>& a) {
  const Scalar a0 = a.value();
  if (a0 == Scalar(0) || detail::on_negative_real_axis(a0)) {
    throw DomainError("log: constant term lies on the branch cut");
  }
  std::vector<Scalar> series(a.order() + 1);
  series[0] = std::log(a0);
  Scalar p = Scalar(1);
  for (int k = 1; k <= a.order(); ++k) {
    p /= a0;
    series[k] = ((k % 2) ? Scalar(1) : Scalar(-1)) * p / Scalar(k);
  }
  return a.compose(series);
}

/// (a0 + h)^p as the binomial series; non-integer p uses the principal branch.
template <typename Scalar>
Jet<Scalar> pow(const Jet<Scalar>& a, const Scalar& exponent) {
  const Scalar a0 = a.value();
  if (a0 == Scalar(0)) throw DomainError("pow: constant term is a branch point");
  std::vector<Scalar> series(a.order() + 1);
  series[0] = std::pow(a0, exponent);
  Scalar binom = Scalar(1);
  for (int k = 1; k <= a.order(); ++k) {
    binom *= (exponent - Scalar(k - 1)) / Scalar(k);
    series[k] = series[0] * binom / std::pow(a0, Scalar(k));
  }
  return a.compose(series);
}

template <typename Scalar>
Jet<Scalar> sqrt(const Jet<Scalar>& a) {
  if (a.value() == Scalar(0) || detail::on_negative_real_axis(a.value())) {
    throw DomainError("sqrt: constant term lies on the branch cut");
  }
  return pow(a, Scalar(0.5));
}

/// a^{-m} for a positive integer m.
template <typename Scalar>
Jet<Scalar> neg_power(const Jet<Scalar>& a, int m) {
  if (m <= 0) throw DimensionError("neg_power expects a positive integer");
  Jet<Scalar> r = reciprocal(a);
  Jet<Scalar> out = r;
  for (int i = 1; i < m; ++i) out *= r;
  return out;
}

template <typename Scalar>
Jet<Scalar> atan(const Jet<Scalar>& a) {
  const Scalar a0 = a.value();
  // atan'(x) = 1 / (1 + x^2); expand 1 / (A + B t + t^2) around t = 0.
  const Scalar A = Scalar(1) + a0 * a0;
  if (A == Scalar(0)) throw DomainError("atan: constant term is a branch point (+-i)");
  const Scalar B = Scalar(2) * a0;
  const int order = a.order();
  std::vector<Scalar> d(order + 1, Scalar(0));
  d[0] = Scalar(1) / A;
  for (int m = 1; m <= order; ++m) {
    Scalar acc = B * d[m - 1];
    if (m >= 2) acc += d[m - 2];
    d[m] = -acc / A;
  }
  std::vector<Scalar> series(order + 1);
  series[0] = std::atan(a0);
  for (int k = 1; k <= order; ++k) series[k] = d[k - 1] / Scalar(k);
  return a.compose(series);
}

template <typename Scalar>
Jet<Scalar> sin(const Jet<Scalar>& a) {
  const Scalar s = std::sin(a.value());
  const Scalar c = std::cos(a.value());
  const std::array<Scalar, 4> cycle{s, c, -s, -c};
  std::vector<Scalar> series(a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) series[k] = cycle[k % 4] / detail::factorial(k);
  return a.compose(series);
}

template <typename Scalar>
Jet<Scalar> cos(const Jet<Scalar>& a) {
  const Scalar s = std::sin(a.value());
  const Scalar c = std::cos(a.value());
  const std::array<Scalar, 4> cycle{c, -s, -c, s};
  std::vector<Scalar> series(a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) series[k] = cycle[k % 4] / detail::factorial(k);
  return a.compose(series);
}

/// Variables u^0..u^{n-1} expanded at base, as one vector of jets.
template <typename Scalar, typename Derived>
std::vector<Jet<Scalar>> jet_variables(const Eigen::MatrixBase<Derived>& base, int order) {
  const int n = static_cast<int>(base.size());
  std::vector<Jet<Scalar>> vars;
  vars.reserve(n);
  for (int i = 0; i < n; ++i) vars.push_back(Jet<Scalar>::variable(i, Scalar(base[i]), n, order));
  return vars;
}

}  // namespace wdvv

#endif  // WDVV_JET_HPP
