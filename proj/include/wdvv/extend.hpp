#ifndef WDVV_EXTEND_HPP
#define WDVV_EXTEND_HPP

// Extension of an n-dimensional solution (F, eta) to n + 2 dimensions:
//
//   F~(t^0, t, t^{n+1}) = (eta_ab t^a t^b t^0 + (t^0)^2 t^{n+1}) / 2 + F(t),
//
// with eta~ = [[0, 0, 1], [0, eta, 0], [1, 0, 0]]. e_0 is the unity and
// e_{n+1} squares to zero.

#include <Eigen/Dense>

#include <optional>

#include "wdvv/frobenius.hpp"

namespace wdvv {

struct ExtensionResult {
  PrepotentialField F_tilde;
  ConstantMetric eta_tilde;
  /// d_0 = d_F - c, the base exponents, d_{n+1} = 2c - d_F.
  std::optional<QuasihomogeneityData> exponents;
  /// The common value c of d_a + d_b over eta_ab != 0.
  std::optional<double> pair_sum;
};

ExtensionResult extend_prepotential(const PrepotentialField& F, const ConstantMetric& g,
                                    const std::optional<QuasihomogeneityData>& q = std::nullopt);

struct ExtensionReport {
  double associativity = 0.0;     ///< associativity residual of F~ under eta~
  double unity = 0.0;             ///< max_k |e_0 e_k - e_k|
  double nilpotent_square = 0.0;  ///< |e_{n+1}^2|
  double nilpotent_norm = 0.0;    ///< |e_{n+1}| as an operator, nonzero
  double metric_coefficient = 0.0;  ///< max |coefficient of e_{n+1} in e_a e_b - eta_ab|
};

/// Diagnostics at a point (t^0, t^1..t^n, t^{n+1}).
ExtensionReport verify_extension(const ExtensionResult& ext, const Eigen::VectorXd& point);

}  // namespace wdvv

#endif  // WDVV_EXTEND_HPP
