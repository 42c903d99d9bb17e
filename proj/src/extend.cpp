#include "wdvv/extend.hpp"

#include <cmath>
#include <sstream>

namespace wdvv {

ExtensionResult extend_prepotential(const PrepotentialField& F, const ConstantMetric& g,
                                    const std::optional<QuasihomogeneityData>& q) {
  const int n = F.dim();
  if (g.dim() != n) throw DimensionError("extend_prepotential: metric and prepotential dimensions differ");

  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(n + 2, n + 2);
  eta(0, n + 1) = eta(n + 1, 0) = 1.0;
  eta.block(1, 1, n, n) = g.eta();

  std::optional<QuasihomogeneityData> exponents;
  std::optional<double> pair_sum;
  if (q) {
    if (q->exponents.size() != n) throw DimensionError("extend_prepotential: exponent count differs from dimension");
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (g.eta()(a, b) == 0.0) continue;
        const double s = q->exponents[a] + q->exponents[b];
        if (!pair_sum) {
          pair_sum = s;
        } else if (std::abs(s - *pair_sum) > 1e-12 * std::max(1.0, std::abs(*pair_sum))) {
          std::ostringstream os;
          os << "extend_prepotential: d_" << a + 1 << " + d_" << b + 1 << " = " << s << " differs from c = " << *pair_sum;
          throw PreconditionError(os.str());
        }
      }
    }
    QuasihomogeneityData ext;
    ext.exponents.resize(n + 2);
    ext.exponents[0] = q->d_F - *pair_sum;
    ext.exponents.segment(1, n) = q->exponents;
    ext.exponents[n + 1] = 2.0 * *pair_sum - q->d_F;
    ext.d_F = q->d_F;
    ext.allows_quadratic_remainder = q->allows_quadratic_remainder;
    exponents = ext;
  }

  const Eigen::MatrixXd base = g.eta();
  PrepotentialField tilde(n + 2, [F, base, n](std::span<const ComplexJet> t) {
    const auto middle = t.subspan(1, n);
    ComplexJet quad = t[0] * t[0] * t[n + 1];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (base(a, b) != 0.0) quad += Complex(base(a, b)) * middle[a] * middle[b] * t[0];
    return quad * 0.5 + F(middle);
  });
  return {std::move(tilde), ConstantMetric(eta), exponents, pair_sum};
}

ExtensionReport verify_extension(const ExtensionResult& ext, const Eigen::VectorXd& point) {
  const int N = ext.F_tilde.dim();
  const int n = N - 2;
  const CorrelatorTensor c = third_derivative_tensor(ext.F_tilde, point);
  const StructureConstants s = structure_constants(c, ext.eta_tilde);

  ExtensionReport report;
  report.associativity = associativity_residual(c, ext.eta_tilde);
  report.unity = (s.multiplication(0) - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
  report.nilpotent_square = s.multiplication(N - 1).col(N - 1).cwiseAbs().maxCoeff();
  report.nilpotent_norm = s.multiplication(N - 1).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd& eta = ext.eta_tilde.eta();
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      report.metric_coefficient = std::max(report.metric_coefficient, std::abs(s(N - 1, a, b) - eta(a, b)));
  return report;
}

}  // namespace wdvv
