#ifndef WDVV_SPECTRAL_HPP
#define WDVV_SPECTRAL_HPP

// Reducible rational spectral curves and their Baker-Akhiezer functions.
//
// Every component is a copy of CP^1 with global coordinate z. On component j
// the Baker-Akhiezer function is sought in the form
//
//   psi_j(z) = exp(Phi_j(z, u)) * (f_j0 + sum_k f_jk / (z - gamma_jk)),
//
// where Phi_j collects the essential singularities placed on that component
// and gamma_jk are its pole-divisor points. Normalization at the points R and
// gluing at the nodes give a square linear system for the f_jk whose entries
// are jets in u.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "wdvv/jet.hpp"
#include "wdvv/jet_solve.hpp"

namespace wdvv {

/// A point of CP^1: a finite coordinate or infinity.
struct ProjectivePoint {
  Complex z{0.0, 0.0};
  bool infinite = false;

  static ProjectivePoint at(Complex z) { return {z, false}; }
  static ProjectivePoint infinity() { return {Complex(0.0, 0.0), true}; }

  bool is_zero() const { return !infinite && z == Complex(0.0, 0.0); }
  /// Fixed by z -> -z.
  bool is_sigma_fixed() const { return infinite || is_zero(); }
  ProjectivePoint sigma() const { return infinite ? *this : at(-z); }
  bool coincides(const ProjectivePoint& o, double tol = 1e-12) const {
    if (infinite || o.infinite) return infinite == o.infinite;
    return std::abs(z - o.z) <= tol * std::max(1.0, std::abs(z));
  }
  std::string to_string() const;
};

/// The term coefficient * u^{u_index} * z^{power} of the exponent Phi on its
/// component. power = +1 puts the essential singularity P at infinity with
/// local parameter k = coefficient * z; power = -1 puts it at 0 with
/// k = coefficient / z.
struct EssentialTerm {
  int power = 1;
  int u_index = 0;
  Complex coefficient{1.0, 0.0};

  ProjectivePoint location() const {
    return power > 0 ? ProjectivePoint::infinity() : ProjectivePoint::at(0.0);
  }
};

struct MarkedQ {
  ProjectivePoint point;
  int flat_index = 0;
};

struct CurveComponent {
  std::vector<Complex> pole_divisor;    // D points on this component
  std::vector<EssentialTerm> essential;  // P points on this component
  std::vector<MarkedQ> marked_q;
  std::vector<Complex> normalization;   // R points on this component
};

/// Node gluing coord_a on component_a to coord_b on component_b.
struct IntersectionPoint {
  int component_a = 0;
  Complex coord_a;
  int component_b = 1;
  Complex coord_b;
};

struct SpectralData {
  std::vector<CurveComponent> components;
  std::vector<IntersectionPoint> intersections;
  bool involution = true;  // sigma(z) = -z on every component
  bool reality = false;    // squared marked coordinates are real

  int num_components() const { return static_cast<int>(components.size()); }
  /// Number of flat coordinates (= number of Q points).
  int n() const;
  /// Number of normalization points.
  int l() const;
  int arithmetic_genus() const;
  int pole_divisor_degree() const;
};

struct ValidationReport {
  bool passed = true;
  int arithmetic_genus = 0;
  int pole_divisor_degree = 0;
  int expected_degree = 0;
  std::vector<std::string> violations;
};

ValidationReport validate(const SpectralData& data);

/// Theorem-1 configuration: component i carries P_i = infinity with
/// k_i = z, Q_i = 0; nodes have equal coordinates; one normalization point.
bool is_translation_covariant_mode(const SpectralData& data, std::string* reason = nullptr);

struct BakerAkhiezerSystem {
  JetMatrix<Complex> matrix;
  std::vector<ComplexJet> rhs;
  /// offsets[j] = position of f_j0 among the unknowns.
  std::vector<int> offsets;
};

BakerAkhiezerSystem assemble_system(const SpectralData& data, const Eigen::VectorXd& u, int order);

struct BakerAkhiezerEvaluation {
  Eigen::VectorXd u;
  int order = 1;
  std::vector<std::vector<ComplexJet>> coefficients;  // per component: f_j0, f_j1, ...
  std::vector<ComplexJet> x;                          // flat coordinates x^j = psi(Q_j)
  std::vector<ComplexJet> h;                          // h_i at P_i
  double condition_number = 0.0;
};

/// Constant-term condition numbers above this are reported as singular.
inline constexpr double kSingularConditionNumber = 1e12;

BakerAkhiezerEvaluation solve_ba(const SpectralData& data, const Eigen::VectorXd& u, int order = 1);

/// psi on `component` at `point` (the essential factor included), as a jet in u.
ComplexJet evaluate_psi(const SpectralData& data, const BakerAkhiezerEvaluation& ba, int component,
                        const ProjectivePoint& point);

/// max_j |x^j(u + mu 1) - exp(-r mu) x^j(u)|; Theorem-1 mode only.
double translation_covariance_check(const SpectralData& data, const Eigen::VectorXd& u, double mu);

}  // namespace wdvv

#endif  // WDVV_SPECTRAL_HPP
