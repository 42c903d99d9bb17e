#ifndef WDVV_EGOROFF_HPP
#define WDVV_EGOROFF_HPP

// Egoroff metrics sum_i H_i^2 (du^i)^2 built from Baker-Akhiezer data, their
// rotation coefficients, and the correlators
//
//   c_{abg} = sum_i H_i^2 (du^i/dx^a) (du^i/dx^b) (du^i/dx^g).

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "wdvv/differentials.hpp"
#include "wdvv/frobenius.hpp"
#include "wdvv/spectral.hpp"

namespace wdvv {

/// Spectral data together with its differentials and the metric they induce.
struct FlatModel {
  SpectralData data;
  std::vector<RationalDifferential> differentials;
  MetricFromResidues metric;

  /// Validates the data, constructs the differentials and the metric.
  static FlatModel build(SpectralData data, bool euclidean = true);
};

struct EgoroffEvaluation {
  Eigen::VectorXd u;
  Eigen::VectorXcd x;
  Eigen::VectorXcd h;
  Eigen::VectorXcd H;
  Eigen::MatrixXcd jacobian;      ///< (k, i) = dx^k / du^i
  Eigen::MatrixXcd jacobian_inv;  ///< (i, k) = du^i / dx^k
  std::vector<ComplexJet> H_jets;
};

/// H_i = eps_i h_i as jets, with eps_i the principal square root of eps_i^2.
std::vector<ComplexJet> lame_coefficients(const FlatModel& model, const BakerAkhiezerEvaluation& ba);

EgoroffEvaluation evaluate(const FlatModel& model, const Eigen::VectorXd& u);

/// beta_ij = d_i H_j / H_i from first-order jets; the diagonal is zero.
Eigen::MatrixXcd rotation_coefficients(std::span<const ComplexJet> H);
Eigen::MatrixXcd rotation_coefficients(const FlatModel& model, const Eigen::VectorXd& u);

/// max_{i != j} |beta_ij - beta_ji|.
double symmetry_residual(const Eigen::MatrixXcd& beta);
double symmetry_residual(const FlatModel& model, const Eigen::VectorXd& u);

struct NewtonOptions {
  int max_iterations = 50;
  double residual_tolerance = 1e-12;
  double step_tolerance = 1e-8;
};

/// Real u with x(u) = x_target by damped Newton iteration.
Eigen::VectorXd invert_coordinates(const FlatModel& model, const Eigen::VectorXd& x_target,
                                   const Eigen::VectorXd& u_guess, const NewtonOptions& options = {});

/// Correlator tensor at the point Re x(u).
CorrelatorTensor correlators_from_metric(const FlatModel& model, const Eigen::VectorXd& u);
CorrelatorTensor correlators_from_metric(const EgoroffEvaluation& e);

struct FlatnessReport {
  double off_diagonal = 0.0;       ///< max_{i != j} |G_ij|
  double diagonal_relative = 0.0;  ///< max_i |G_ii - eps_i^2 h_i^2| / |eps_i^2 h_i^2|
};

/// G_ij = sum_{kl} eta_kl d_i x^k d_j x^l compared with eps_i^2 h_i^2 delta_ij.
FlatnessReport flatness_residual(const FlatModel& model, const Eigen::VectorXd& u);

}  // namespace wdvv

#endif  // WDVV_EGOROFF_HPP
