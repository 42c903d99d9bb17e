#ifndef WDVV_MODELS_HPP
#define WDVV_MODELS_HPP

// Closed forms for the two-sphere curves: two rational components glued at a
// pair of sigma-symmetric nodes.
//
// example1: nodes +-a with equal coordinates, P_i = infinity on component i,
//   Q_i = 0, D = {c} and R = {r} on component 2 (r, beta fixed by a and c).
// example2: nodes a ~ b, -a ~ -b; P_1 = infinity and P_2 = 0 on component 1
//   with exponent 2 u^1 z + u^2 / (2 z), Q_1 = infinity and Q_2 = 0 on
//   component 2, D = {c} on component 2, R = {r} on component 1.

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wdvv/differentials.hpp"
#include "wdvv/egoroff.hpp"
#include "wdvv/frobenius.hpp"
#include "wdvv/spectral.hpp"

namespace wdvv {

/// Sign in front of sqrt((a^2 - c^2) x1^2 + c^2 x2^2) in F_{a,c}. The printed
/// correlators use `positive`; the Baker-Akhiezer construction lands on
/// `negative`.
enum class RootSign { positive, negative };

inline constexpr RootSign kSpectralRootSign = RootSign::negative;

struct Example1Coefficients {
  Complex f0, g0, g1;
};

class Example1Model {
 public:
  static Example1Model make(Complex a, Complex c);

  Complex a() const { return a_; }
  Complex c() const { return c_; }
  Complex r() const { return params_.r; }
  Complex beta() const { return params_.beta; }
  const EuclideanParameters& euclidean() const { return params_; }

  SpectralData spectral_data() const;
  /// Omega_1 = beta / (z (z^2 - a^2)) dz, Omega_2 = (z^2 - c^2) / (z (z^2 - a^2) (z^2 - r^2)) dz.
  std::vector<RationalDifferential> printed_differentials() const;

  /// The closed-form coefficients of psi_1 = e^{u^1 z} f0 and
  /// psi_2 = e^{u^2 z} (g0 + g1 / (z - c)).
  Example1Coefficients printed_ba_coefficients(const Eigen::VectorXd& u) const;
  /// x^1 = psi_1(0), x^2 = psi_2(0) from the closed-form coefficients.
  Eigen::VectorXcd flat_coords(const Eigen::VectorXd& u) const;

  PrepotentialField prepotential(RootSign sign) const;
  static QuasihomogeneityData quasihomogeneity();

 private:
  Complex a_{1.0}, c_{1.0};
  EuclideanParameters params_;
};

/// Simplified x^1, x^2 at a = 1, c = 2 / sqrt(7).
Eigen::VectorXd example1_flat_coords(const Eigen::VectorXd& u);

/// The four printed correlators at a = 1, c = 2 / sqrt(7), expanded to the
/// full tensor; `sign` multiplies the (3 x1^2 + 4 x2^2)^{3/2} terms.
CorrelatorTensor example1_printed_correlators(const Eigen::VectorXd& x, RootSign sign = RootSign::positive);

/// F_{a,c} on jets; logarithms of arguments with negative real part are
/// taken of the negated argument.
ComplexJet example1_prepotential(std::span<const ComplexJet> x, Complex a, Complex c, RootSign sign);

class Example2Model {
 public:
  explicit Example2Model(double q = 0.0) : q_(q) {}

  double q() const { return q_; }
  static constexpr Complex b() { return {0.0, 1.0}; }
  static constexpr Complex c() { return {-1.0, 0.0}; }
  static constexpr Complex a() { return {0.0, 0.5}; }
  static constexpr Complex r() { return {0.5, 0.0}; }

  static SpectralData spectral_data();
  /// Omega_1 = z / ((z^2 - a^2)(z^2 - r^2)) dz, Omega_2 = (z^2 - c^2) / (z (z^2 - b^2)) dz.
  static std::vector<RationalDifferential> printed_differentials();

  /// x^1 = e^{-u1-u2} (cos(u1-u2) + sin(u1-u2)), x^2 with the sign of sin flipped.
  static Eigen::VectorXd flat_coords(const Eigen::VectorXd& u);
  static std::vector<ComplexJet> flat_coord_jets(const Eigen::VectorXd& u, int order);

  PrepotentialField prepotential() const;
  static QuasihomogeneityData quasihomogeneity();

 private:
  double q_;
};

/// F_q = q R atan(x1 / x2) - R log(R) / 8 with R = x1^2 + x2^2.
ComplexJet example2_prepotential(std::span<const ComplexJet> x, double q);

/// Printed correlators of F_0.
CorrelatorTensor example2_printed_correlators(const Eigen::VectorXd& x);

/// (H_1^2, H_2^2) = 4 e^{-2(u1+u2)} (1, 1).
Eigen::VectorXd example2_metric(const Eigen::VectorXd& u);

/// A named model with everything the verification suites need. Curve-file
/// models have no closed forms, so those members are optional.
struct ModelInstance {
  std::string name;
  std::map<std::string, double> parameters;
  FlatModel flat;
  ConstantMetric eta;
  /// The prepotential selected by the parameters.
  std::optional<PrepotentialField> prepotential;
  /// The member of the family that the spectral construction reproduces.
  std::optional<PrepotentialField> spectral_prepotential;
  std::optional<QuasihomogeneityData> quasihomogeneity;
  /// Printed flat coordinates x(u).
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> printed_x;
  /// Printed correlators on the branch of `prepotential`.
  CorrelatorSource printed_correlators;
  /// Rate k in x(u + mu 1) = e^{-k mu} x(u).
  std::optional<double> translation_rate;
};

std::vector<std::string> model_names();

/// Builds a model by name; unknown names and parameters are PreconditionErrors.
ModelInstance make_model(const std::string& name, const std::map<std::string, double>& parameters = {});

/// A model given only by spectral data; eta must come out real.
ModelInstance model_from_curve(const std::string& name, SpectralData data);

}  // namespace wdvv

#endif  // WDVV_MODELS_HPP
