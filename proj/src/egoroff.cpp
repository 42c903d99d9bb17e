#include "wdvv/egoroff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace wdvv {

namespace {

Eigen::MatrixXcd jacobian_of(std::span<const ComplexJet> x) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXcd J(n, n);
  std::vector<int> mi(n, 0);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      mi[i] = 1;
      J(k, i) = x[k].partial(mi);
      mi[i] = 0;
    }
  }
  return J;
}

Eigen::MatrixXcd checked_inverse(const Eigen::MatrixXcd& J, const Eigen::VectorXd& u) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
  const auto& sv = svd.singularValues();
  if (!(sv[sv.size() - 1] > sv[0] / kSingularConditionNumber)) {
    throw SingularSystemError("Jacobian dx/du is singular at u = " + format_point(u));
  }
  return J.inverse();
}

}  // namespace

FlatModel FlatModel::build(SpectralData data, bool euclidean) {
  const ValidationReport report = validate(data);
  if (!report.passed) {
    std::string msg = "invalid spectral data:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw PreconditionError(msg);
  }
  FlatModel model;
  model.differentials = construct_differentials(data);
  model.metric = metric_from_residues(data, model.differentials, euclidean);
  model.data = std::move(data);
  return model;
}

std::vector<ComplexJet> lame_coefficients(const FlatModel& model, const BakerAkhiezerEvaluation& ba) {
  std::vector<ComplexJet> H;
  for (std::size_t i = 0; i < ba.h.size(); ++i) H.push_back(ba.h[i] * std::sqrt(model.metric.epsilon_sq[i]));
  return H;
}

EgoroffEvaluation evaluate(const FlatModel& model, const Eigen::VectorXd& u) {
  const BakerAkhiezerEvaluation ba = solve_ba(model.data, u, 1);
  const int n = model.data.n();
  EgoroffEvaluation e;
  e.u = u;
  e.x.resize(n);
  e.h.resize(n);
  e.H.resize(n);
  e.H_jets = lame_coefficients(model, ba);
  for (int i = 0; i < n; ++i) {
    e.x[i] = ba.x[i].value();
    e.h[i] = ba.h[i].value();
    e.H[i] = e.H_jets[i].value();
  }
  e.jacobian = jacobian_of(ba.x);
  e.jacobian_inv = checked_inverse(e.jacobian, u);
  return e;
}

Eigen::MatrixXcd rotation_coefficients(std::span<const ComplexJet> H) {
  const int n = static_cast<int>(H.size());
  Eigen::MatrixXcd beta = Eigen::MatrixXcd::Zero(n, n);
  std::vector<int> mi(n, 0);
  for (int i = 0; i < n; ++i) {
    if (std::abs(H[i].value()) == 0.0) throw DomainError("Lame coefficient H_" + std::to_string(i + 1) + " vanishes");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      mi[i] = 1;
      beta(i, j) = H[j].partial(mi) / H[i].value();
      mi[i] = 0;
    }
  }
  return beta;
}

Eigen::MatrixXcd rotation_coefficients(const FlatModel& model, const Eigen::VectorXd& u) {
  const BakerAkhiezerEvaluation ba = solve_ba(model.data, u, 1);
  return rotation_coefficients(lame_coefficients(model, ba));
}

double symmetry_residual(const Eigen::MatrixXcd& beta) {
  return (beta - beta.transpose()).cwiseAbs().maxCoeff();
}

double symmetry_residual(const FlatModel& model, const Eigen::VectorXd& u) {
  return symmetry_residual(rotation_coefficients(model, u));
}

Eigen::VectorXd invert_coordinates(const FlatModel& model, const Eigen::VectorXd& x_target,
                                   const Eigen::VectorXd& u_guess, const NewtonOptions& options) {
  const int n = model.data.n();
  if (x_target.size() != n || u_guess.size() != n) throw DimensionError("invert_coordinates: wrong dimension");
  const Eigen::VectorXcd target = x_target.cast<Complex>();
  const double tol = options.residual_tolerance * std::max(1.0, x_target.cwiseAbs().maxCoeff());

  Eigen::VectorXd u = u_guess;
  EgoroffEvaluation e = evaluate(model, u);
  double residual = (e.x - target).cwiseAbs().maxCoeff();
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::VectorXd step = -(e.jacobian_inv * (e.x - target)).real();
    double lambda = 1.0;
    EgoroffEvaluation trial;
    double trial_residual = 0.0;
    for (;;) {
      const Eigen::VectorXd candidate = u + lambda * step;
      bool ok = true;
      try {
        trial = evaluate(model, candidate);
        trial_residual = (trial.x - target).cwiseAbs().maxCoeff();
      } catch (const SingularSystemError&) {
        ok = false;
      }
      if (ok && (trial_residual <= residual || trial_residual <= tol)) break;
      lambda *= 0.5;
      if (lambda < 1e-10) {
        if (!ok) throw ConvergenceError("Newton inversion hit a singular point near u = " + format_point(u));
        break;
      }
    }
    const double step_size = lambda * step.cwiseAbs().maxCoeff();
    u += lambda * step;
    e = std::move(trial);
    residual = trial_residual;
    if (residual <= tol && step_size <= options.step_tolerance * std::max(1.0, u.cwiseAbs().maxCoeff())) return u;
  }
  std::ostringstream os;
  os.precision(3);
  os << "Newton inversion did not converge to x = " << format_point(x_target) << " within "
     << options.max_iterations << " iterations (residual " << residual << ")";
  throw ConvergenceError(os.str());
}

CorrelatorTensor correlators_from_metric(const EgoroffEvaluation& e) {
  const int n = static_cast<int>(e.u.size());
  const Eigen::MatrixXcd& U = e.jacobian_inv;
  Eigen::VectorXcd H2 = e.H.array().square();
  return CorrelatorTensor::from_function(e.x.real(), [&](int a, int b, int g) {
    Complex s = 0.0;
    for (int i = 0; i < n; ++i) s += H2[i] * U(i, a) * U(i, b) * U(i, g);
    return s;
  });
}

CorrelatorTensor correlators_from_metric(const FlatModel& model, const Eigen::VectorXd& u) {
  return correlators_from_metric(evaluate(model, u));
}

FlatnessReport flatness_residual(const FlatModel& model, const Eigen::VectorXd& u) {
  const BakerAkhiezerEvaluation ba = solve_ba(model.data, u, 1);
  const Eigen::MatrixXcd J = jacobian_of(ba.x);
  const Eigen::MatrixXcd G = J.transpose() * model.metric.eta * J;
  FlatnessReport report;
  for (int i = 0; i < G.rows(); ++i) {
    for (int j = 0; j < G.cols(); ++j) {
      if (i != j) {
        report.off_diagonal = std::max(report.off_diagonal, std::abs(G(i, j)));
      } else {
        const Complex h = ba.h[i].value();
        const Complex expected = model.metric.epsilon_sq[i] * h * h;
        report.diagonal_relative = std::max(report.diagonal_relative, std::abs(G(i, i) - expected) / std::abs(expected));
      }
    }
  }
  return report;
}

}  // namespace wdvv
