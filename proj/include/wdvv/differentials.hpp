#ifndef WDVV_DIFFERENTIALS_HPP
#define WDVV_DIFFERENTIALS_HPP

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

#include "wdvv/spectral.hpp"

namespace wdvv {

/// scale * prod (z - zero) / prod (z - pole) dz on one component. Only finite
/// zeros and poles are listed; the order at infinity follows from the degree.
struct RationalDifferential {
  int component_id = 0;
  std::vector<std::pair<Complex, int>> zeros;
  std::vector<std::pair<Complex, int>> poles;
  Complex scale{1.0, 0.0};

  /// The coefficient w(z) in Omega = w(z) dz.
  Complex density(Complex z) const;
  /// Finite zero count minus finite pole count (with multiplicity).
  int finite_degree() const;
  /// Order of vanishing of Omega at infinity (negative for a pole).
  int order_at_infinity() const { return -finite_degree() - 2; }
};

/// Residue at a simple finite pole, in closed form.
Complex residue(const RationalDifferential& d, Complex at);
/// Residue at a point of CP^1 (zero at infinity unless infinity is a simple pole).
Complex residue(const RationalDifferential& d, const ProjectivePoint& at);

/// |sum of all residues| including infinity; zero by the residue theorem.
double global_residue_sum(const RationalDifferential& d);

/// max over nodes of |res Omega_a + res Omega_b|.
double regularity_check(const SpectralData& data, std::span<const RationalDifferential> diffs);

struct EuclideanParameters {
  Complex r;
  Complex beta;             ///< c^2 / r^2 from the Euclidean condition
  Complex beta_regularity;  ///< (c^2 - a^2) / (a^2 - r^2) from node regularity
};

/// Normalization point r and ratio beta for the two-sphere curve with nodes
/// at +-a and pole c, chosen so that the metric from residues is Euclidean.
EuclideanParameters euclidean_parameters(Complex a, Complex c);

/// eps^2 at the essential singularity P: twice the leading coefficient of
/// Omega in lambda = k^{-2}.
Complex epsilon_squared(const RationalDifferential& d, const EssentialTerm& P, bool involution);

struct MetricFromResidues {
  Eigen::MatrixXcd eta;
  Eigen::VectorXcd epsilon_sq;  ///< indexed by u-index
  Complex normalization{1.0, 0.0};
};

/// eta_{kl} = delta_{k, sigma(l)} res_{Q_k} Omega and eps_i^2, after scaling
/// Omega by `normalization`. In Euclidean mode the scale makes eta = identity
/// and unequal diagonal residues are an error.
MetricFromResidues metric_from_residues(const SpectralData& data, std::span<const RationalDifferential> diffs,
                                        bool euclidean = true);

/// Differentials with (Omega)_0 = D + sigma D + P and (Omega)_inf = R + sigma R + Q
/// plus simple poles at the nodes; relative component scales fixed by
/// cancelling residues across nodes (component 0 has scale 1).
std::vector<RationalDifferential> construct_differentials(const SpectralData& data);

}  // namespace wdvv

#endif  // WDVV_DIFFERENTIALS_HPP
