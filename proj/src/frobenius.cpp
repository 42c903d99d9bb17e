#include "wdvv/frobenius.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace wdvv {

ConstantMetric::ConstantMetric(Eigen::MatrixXd eta) : eta_(std::move(eta)) {
  if (eta_.rows() != eta_.cols() || eta_.rows() == 0) {
    throw DimensionError("metric must be a non-empty square matrix");
  }
  if ((eta_ - eta_.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, eta_.cwiseAbs().maxCoeff())) {
    throw PreconditionError("metric is not symmetric");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(eta_);
  if (!lu.isInvertible()) throw PreconditionError("metric is degenerate");
  eta_inv_ = lu.inverse();
}

ConstantMetric ConstantMetric::identity(int dim) {
  return ConstantMetric(Eigen::MatrixXd::Identity(dim, dim));
}

CorrelatorTensor::CorrelatorTensor(Eigen::VectorXd point, std::vector<Complex> entries)
    : dim_(static_cast<int>(point.size())), point_(std::move(point)) {
  const int n = dim_;
  if (static_cast<int>(entries.size()) != n * n * n) {
    throw DimensionError("correlator tensor needs dim^3 entries");
  }
  entries_.resize(entries.size());
  auto at = [&](int a, int b, int c) { return entries[(a * n + b) * n + c]; };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        std::array<int, 3> s{a, b, c};
        std::sort(s.begin(), s.end());
        const auto [p, q, r] = s;
        const Complex sum = at(p, q, r) + at(p, r, q) + at(q, p, r) + at(q, r, p) + at(r, p, q) + at(r, q, p);
        entries_[(a * n + b) * n + c] = sum / 6.0;
      }
    }
  }
}

Eigen::VectorXcd CorrelatorTensor::slice(int a, int b) const {
  Eigen::VectorXcd v(dim_);
  for (int c = 0; c < dim_; ++c) v[c] = (*this)(a, b, c);
  return v;
}

double CorrelatorTensor::max_imag() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.imag()));
  return m;
}

double CorrelatorTensor::max_abs_difference(const CorrelatorTensor& other) const {
  if (other.dim_ != dim_) throw DimensionError("correlator dimension mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < entries_.size(); ++k) m = std::max(m, std::abs(entries_[k] - other.entries_[k]));
  return m;
}

PrepotentialField::PrepotentialField(int dim, JetFunction function)
    : dim_(dim), function_(std::move(function)) {
  if (dim <= 0) throw DimensionError("prepotential dimension must be positive");
}

ComplexJet PrepotentialField::evaluate(const Eigen::VectorXd& point, int order) const {
  if (point.size() != dim_) throw DimensionError("prepotential evaluated at a point of the wrong dimension");
  const auto vars = jet_variables<Complex>(point, order);
  try {
    return function_(vars);
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " at " + format_point(point));
  }
}

StructureConstants::StructureConstants(std::vector<Eigen::MatrixXcd> multiplication)
    : mult_(std::move(multiplication)) {}

Eigen::VectorXcd StructureConstants::product(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim());
  for (int alpha = 0; alpha < dim(); ++alpha) out += a[alpha] * (mult_[alpha] * b);
  return out;
}

CorrelatorTensor third_derivative_tensor(const PrepotentialField& F, const Eigen::VectorXd& point) {
  const int n = F.dim();
  const ComplexJet jet = F.evaluate(point, 3);
  MultiIndex mi(n);
  return CorrelatorTensor::from_function(point, [&](int a, int b, int c) {
    std::fill(mi.begin(), mi.end(), 0);
    ++mi[a];
    ++mi[b];
    ++mi[c];
    return jet.partial(mi);
  });
}

StructureConstants structure_constants(const CorrelatorTensor& c, const ConstantMetric& g) {
  const int n = c.dim();
  if (g.dim() != n) throw DimensionError("structure_constants: metric and tensor dimensions differ");
  const Eigen::MatrixXcd eta_inv = g.eta_inv().cast<Complex>();
  std::vector<Eigen::MatrixXcd> mult(n, Eigen::MatrixXcd(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mult[a].col(b) = eta_inv * c.slice(a, b);
  return StructureConstants(std::move(mult));
}

CorrelatorTensor lower_index(const StructureConstants& s, const ConstantMetric& g, const Eigen::VectorXd& point) {
  const int n = s.dim();
  if (g.dim() != n) throw DimensionError("lower_index: metric and tensor dimensions differ");
  const Eigen::MatrixXcd eta = g.eta().cast<Complex>();
  return CorrelatorTensor::from_function(point, [&](int a, int b, int d) {
    return (eta.row(d) * s.multiplication(a).col(b))(0, 0);
  });
}

double associativity_residual(const CorrelatorTensor& c, const ConstantMetric& g) {
  const int n = c.dim();
  if (g.dim() != n) throw DimensionError("associativity_residual: metric and tensor dimensions differ");
  const Eigen::MatrixXcd eta_inv = g.eta_inv().cast<Complex>();
  // pair(a, b, g, d) = c_{ab.} eta^{-1} c_{gd.}
  std::vector<Eigen::VectorXcd> raised(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) raised[a * n + b] = eta_inv * c.slice(a, b);
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int gm = 0; gm < n; ++gm) {
        for (int d = 0; d < n; ++d) {
          const Complex lhs = c.slice(a, b).cwiseProduct(raised[gm * n + d]).sum();
          const Complex rhs = c.slice(gm, b).cwiseProduct(raised[a * n + d]).sum();
          worst = std::max(worst, std::abs(lhs - rhs));
        }
      }
    }
  }
  return worst;
}

double correlator_scaling_check(const CorrelatorSource& source, const Eigen::VectorXd& point, double lambda) {
  if (!(lambda > 0.0)) throw PreconditionError("scaling factor must be positive");
  const CorrelatorTensor base = source(point);
  const CorrelatorTensor scaled = source(lambda * point);
  double worst = 0.0;
  for (std::size_t k = 0; k < base.entries().size(); ++k) {
    worst = std::max(worst, std::abs(scaled.entries()[k] - base.entries()[k] / lambda));
  }
  return worst;
}

EulerReport euler_report(const PrepotentialField& F, const QuasihomogeneityData& q, const Eigen::VectorXd& point) {
  const int n = F.dim();
  if (q.exponents.size() != n) throw DimensionError("euler_check: exponent count differs from dimension");
  const ComplexJet f4 = F.evaluate(point, 4);
  ComplexJet residual = f4.truncated(3) * Complex(-q.d_F);
  for (int a = 0; a < n; ++a) {
    const ComplexJet t = ComplexJet::variable(a, point[a], n, 3);
    residual += Complex(q.exponents[a]) * t * f4.derivative(a);
  }
  EulerReport report;
  report.value = residual.value();
  const auto& layout = residual.layout();
  for (int k = 0; k < layout.size(); ++k) {
    const double m = std::abs(residual.partial(layout.multi_index(k)));
    report.all_orders = std::max(report.all_orders, m);
    if (layout.degree(k) == 3) report.third_order = std::max(report.third_order, m);
  }
  return report;
}

double euler_check(const PrepotentialField& F, const QuasihomogeneityData& q, const Eigen::VectorXd& point) {
  const EulerReport r = euler_report(F, q, point);
  return q.allows_quadratic_remainder ? r.third_order : r.all_orders;
}

std::string format_point(const Eigen::VectorXd& point) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < point.size(); ++i) os << (i ? ", " : "") << point[i];
  os << ")";
  return os.str();
}

}  // namespace wdvv
