#ifndef WDVV_FROBENIUS_HPP
#define WDVV_FROBENIUS_HPP

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wdvv/jet.hpp"

namespace wdvv {

/// Constant (possibly indefinite) metric eta_{ab} together with its inverse.
class ConstantMetric {
 public:
  explicit ConstantMetric(Eigen::MatrixXd eta);
  static ConstantMetric identity(int dim);

  int dim() const { return static_cast<int>(eta_.rows()); }
  const Eigen::MatrixXd& eta() const { return eta_; }
  const Eigen::MatrixXd& eta_inv() const { return eta_inv_; }

 private:
  Eigen::MatrixXd eta_;
  Eigen::MatrixXd eta_inv_;
};

/// Fully symmetric rank-3 tensor c_{abc} at a point. The constructor
/// symmetrizes its input over all six index permutations.
class CorrelatorTensor {
 public:
  CorrelatorTensor(Eigen::VectorXd point, std::vector<Complex> entries);

  template <typename F>
  static CorrelatorTensor from_function(const Eigen::VectorXd& point, F&& f) {
    const int n = static_cast<int>(point.size());
    std::vector<Complex> e(static_cast<std::size_t>(n) * n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) e[(a * n + b) * n + c] = Complex(f(a, b, c));
    return CorrelatorTensor(point, std::move(e));
  }

  int dim() const { return dim_; }
  const Eigen::VectorXd& point() const { return point_; }
  Complex operator()(int a, int b, int c) const { return entries_[(a * dim_ + b) * dim_ + c]; }
  const std::vector<Complex>& entries() const { return entries_; }

  /// c_{ab.} as a vector over the last index.
  Eigen::VectorXcd slice(int a, int b) const;

  double max_imag() const;
  double max_abs_difference(const CorrelatorTensor& other) const;

 private:
  int dim_;
  Eigen::VectorXd point_;
  std::vector<Complex> entries_;
};

using JetFunction = std::function<ComplexJet(std::span<const ComplexJet>)>;

/// A prepotential F given as a function on jets, so any derivative order is
/// available at any point of its domain.
class PrepotentialField {
 public:
  PrepotentialField(int dim, JetFunction function);

  int dim() const { return dim_; }

  /// Jet of F at `point`; domain faults are rethrown naming the point.
  ComplexJet evaluate(const Eigen::VectorXd& point, int order) const;
  ComplexJet operator()(std::span<const ComplexJet> vars) const { return function_(vars); }

 private:
  int dim_;
  JetFunction function_;
};

struct QuasihomogeneityData {
  Eigen::VectorXd exponents;
  double d_F = 0.0;
  bool allows_quadratic_remainder = false;
};

/// Structure constants c^g_{ab}, stored as one multiplication matrix per
/// generator: multiplication(a)(g, b) = c^g_{ab}, i.e. e_a . v = L_a v.
class StructureConstants {
 public:
  explicit StructureConstants(std::vector<Eigen::MatrixXcd> multiplication);

  int dim() const { return static_cast<int>(mult_.size()); }
  Complex operator()(int gamma, int alpha, int beta) const { return mult_[alpha](gamma, beta); }
  const Eigen::MatrixXcd& multiplication(int alpha) const { return mult_[alpha]; }

  /// Product of two elements given in the basis e_a.
  Eigen::VectorXcd product(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const;

 private:
  std::vector<Eigen::MatrixXcd> mult_;
};

CorrelatorTensor third_derivative_tensor(const PrepotentialField& F, const Eigen::VectorXd& point);

StructureConstants structure_constants(const CorrelatorTensor& c, const ConstantMetric& g);

/// c_{abd} = eta_{dg} c^g_{ab}; inverse of structure_constants.
CorrelatorTensor lower_index(const StructureConstants& s, const ConstantMetric& g,
                             const Eigen::VectorXd& point);

/// max |c_{abl} eta^{lm} c_{gdm} - c_{gbl} eta^{lm} c_{adm}| over all indices.
double associativity_residual(const CorrelatorTensor& c, const ConstantMetric& g);

using CorrelatorSource = std::function<CorrelatorTensor(const Eigen::VectorXd&)>;

/// max |c(lambda x) - c(x) / lambda|.
double correlator_scaling_check(const CorrelatorSource& source, const Eigen::VectorXd& point,
                                double lambda);

struct EulerReport {
  double third_order = 0.0;  ///< max |third partials of E F - d_F F|
  double all_orders = 0.0;   ///< max over partials of order 0..3
  Complex value = 0.0;       ///< (E F - d_F F) at the point itself
};

EulerReport euler_report(const PrepotentialField& F, const QuasihomogeneityData& q,
                         const Eigen::VectorXd& point);

/// Residual of E F = d_F F (+ quadratic polynomial when allowed).
double euler_check(const PrepotentialField& F, const QuasihomogeneityData& q,
                   const Eigen::VectorXd& point);

std::string format_point(const Eigen::VectorXd& point);

}  // namespace wdvv

#endif  // WDVV_FROBENIUS_HPP
