#include "wdvv/differentials.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace wdvv {

namespace {

bool near(Complex a, Complex b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

void add_point(std::vector<std::pair<Complex, int>>& list, Complex z) {
  for (auto& [p, m] : list) {
    if (near(p, z)) {
      ++m;
      return;
    }
  }
  list.emplace_back(z, 1);
}

}  // namespace

Complex RationalDifferential::density(Complex z) const {
  Complex v = scale;
  for (const auto& [zero, m] : zeros) v *= std::pow(z - zero, m);
  for (const auto& [pole, m] : poles) v /= std::pow(z - pole, m);
  return v;
}

int RationalDifferential::finite_degree() const {
  int deg = 0;
  for (const auto& [z, m] : zeros) deg += m;
  for (const auto& [z, m] : poles) deg -= m;
  return deg;
}

Complex residue(const RationalDifferential& d, Complex at) {
  int hit = -1;
  for (int k = 0; k < static_cast<int>(d.poles.size()); ++k) {
    if (near(d.poles[k].first, at)) hit = k;
  }
  if (hit < 0) throw DomainError("residue requested at a point that is not a pole");
  if (d.poles[hit].second != 1) throw DomainError("residue requested at a pole of order > 1");
  const Complex p = d.poles[hit].first;
  Complex v = d.scale;
  for (const auto& [zero, m] : d.zeros) v *= std::pow(p - zero, m);
  for (int k = 0; k < static_cast<int>(d.poles.size()); ++k) {
    if (k != hit) v /= std::pow(p - d.poles[k].first, d.poles[k].second);
  }
  return v;
}

Complex residue(const RationalDifferential& d, const ProjectivePoint& at) {
  if (!at.infinite) return residue(d, at.z);
  const int order = d.order_at_infinity();
  if (order >= 0) return 0.0;
  if (order < -1) throw DomainError("residue requested at a pole of order > 1 at infinity");
  // w(z) ~ scale / z, so Omega ~ -scale dw / w in w = 1/z.
  return -d.scale;
}

double global_residue_sum(const RationalDifferential& d) {
  Complex sum = residue(d, ProjectivePoint::infinity());
  for (const auto& [p, m] : d.poles) sum += residue(d, p);
  return std::abs(sum);
}

double regularity_check(const SpectralData& data, std::span<const RationalDifferential> diffs) {
  if (static_cast<int>(diffs.size()) != data.num_components()) {
    throw DimensionError("one differential per component is required");
  }
  for (const auto& d : diffs) {
    const auto& comp = data.components.at(d.component_id);
    for (const auto& [p, m] : d.poles) {
      bool allowed = false;
      auto check = [&](Complex z) { allowed = allowed || near(z, p) || near(-z, p); };
      for (const auto& node : data.intersections) {
        if (node.component_a == d.component_id) check(node.coord_a);
        if (node.component_b == d.component_id) check(node.coord_b);
      }
      for (const auto& q : comp.marked_q)
        if (!q.point.infinite) check(q.point.z);
      for (const Complex& r : comp.normalization) check(r);
      if (!allowed) throw PreconditionError("differential on component " + std::to_string(d.component_id + 1) + " has an unexpected pole");
    }
  }
  double worst = 0.0;
  for (const auto& node : data.intersections) {
    const Complex sum = residue(diffs[node.component_a], node.coord_a) + residue(diffs[node.component_b], node.coord_b);
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

EuclideanParameters euclidean_parameters(Complex a, Complex c) {
  if (c == Complex(0.0)) throw DomainError("euclidean_parameters: c must be nonzero");
  const Complex denom = 2.0 - a * a / (c * c);
  if (std::abs(denom) <= 1e-14) throw DomainError("euclidean_parameters: a^2 = 2 c^2 has no normalization point");
  EuclideanParameters p;
  p.r = a / std::sqrt(denom);
  p.beta = c * c / (p.r * p.r);
  const Complex gap = a * a - p.r * p.r;
  // At a = c the normalization point lands on the node and the regularity
  // expression degenerates to 0/0; its limit equals beta.
  p.beta_regularity = std::abs(gap) <= 1e-14 * std::max(1.0, std::norm(a)) ? p.beta : (c * c - a * a) / gap;
  if (std::abs(p.beta - p.beta_regularity) > 1e-12 * std::max(1.0, std::abs(p.beta))) {
    throw Error("euclidean_parameters: regularity and Euclidean conditions disagree");
  }
  return p;
}

Complex epsilon_squared(const RationalDifferential& d, const EssentialTerm& P, bool involution) {
  if (!involution) throw PreconditionError("epsilon_squared needs the involution z -> -z");
  const Complex k2 = P.coefficient * P.coefficient;
  if (P.power > 0) {
    if (d.order_at_infinity() != 1) throw DomainError("differential does not have a simple zero at P = infinity");
    // t = 1/(k z): Omega = -scale k^2 t dt (1 + O(t^2)) = (-scale k^2 / 2) d(t^2).
    return -d.scale * k2;
  }
  int hit = -1;
  for (int k = 0; k < static_cast<int>(d.zeros.size()); ++k)
    if (std::abs(d.zeros[k].first) <= 1e-14) hit = k;
  if (hit < 0 || d.zeros[hit].second != 1) throw DomainError("differential does not have a simple zero at P = 0");
  // t = z / k: Omega = w'(0) k^2 t dt (1 + O(t^2)).
  Complex slope = d.scale;
  for (int k = 0; k < static_cast<int>(d.zeros.size()); ++k)
    if (k != hit) slope *= std::pow(-d.zeros[k].first, d.zeros[k].second);
  for (const auto& [p, m] : d.poles) slope /= std::pow(-p, m);
  return slope * k2;
}

MetricFromResidues metric_from_residues(const SpectralData& data, std::span<const RationalDifferential> diffs,
                                        bool euclidean) {
  const int n = data.n();
  if (static_cast<int>(diffs.size()) != data.num_components()) {
    throw DimensionError("one differential per component is required");
  }
  struct QRef {
    int component;
    ProjectivePoint point;
  };
  std::vector<QRef> qs(n);
  for (int c = 0; c < data.num_components(); ++c)
    for (const auto& q : data.components[c].marked_q) qs.at(q.flat_index) = {c, q.point};

  MetricFromResidues out;
  out.eta = Eigen::MatrixXcd::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    int sigma_l = -1;
    for (int k = 0; k < n; ++k) {
      if (qs[k].component == qs[l].component && qs[k].point.coincides(qs[l].point.sigma())) sigma_l = k;
    }
    if (sigma_l < 0) throw PreconditionError("Q set is not invariant under the involution");
    out.eta(sigma_l, l) = residue(diffs[qs[sigma_l].component], qs[sigma_l].point);
  }

  out.epsilon_sq = Eigen::VectorXcd::Zero(n);
  for (int c = 0; c < data.num_components(); ++c)
    for (const auto& t : data.components[c].essential) out.epsilon_sq[t.u_index] = epsilon_squared(diffs[c], t, data.involution);

  if (euclidean) {
    const Complex ref = out.eta(0, 0);
    const double scale = std::max(1e-300, std::abs(ref));
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const Complex expected = k == l ? ref : Complex(0.0);
        if (std::abs(out.eta(k, l) - expected) > 1e-10 * scale) {
          throw PreconditionError("Euclidean normalization impossible: residues at Q differ (eta(" + std::to_string(k) +
                                  "," + std::to_string(l) + ") vs eta(0,0))");
        }
      }
    }
    if (ref == Complex(0.0)) throw PreconditionError("Euclidean normalization impossible: zero residue at Q");
    out.normalization = 1.0 / ref;
    out.eta = Eigen::MatrixXcd::Identity(n, n);
    out.epsilon_sq *= out.normalization;
  }
  return out;
}

std::vector<RationalDifferential> construct_differentials(const SpectralData& data) {
  const int s = data.num_components();
  std::vector<RationalDifferential> diffs(s);
  for (int c = 0; c < s; ++c) {
    const auto& comp = data.components[c];
    auto& d = diffs[c];
    d.component_id = c;
    for (const Complex& g : comp.pole_divisor) {
      add_point(d.zeros, g);
      add_point(d.zeros, -g);
    }
    int expected_at_infinity = 0;
    for (const auto& t : comp.essential) {
      if (t.power > 0) {
        expected_at_infinity = 1;
      } else {
        add_point(d.zeros, 0.0);
      }
    }
    for (const auto& node : data.intersections) {
      if (node.component_a == c) add_point(d.poles, node.coord_a);
      if (node.component_b == c) add_point(d.poles, node.coord_b);
    }
    for (const auto& q : comp.marked_q) {
      if (q.point.infinite) {
        expected_at_infinity = -1;
      } else {
        add_point(d.poles, q.point.z);
      }
    }
    for (const Complex& r : comp.normalization) {
      add_point(d.poles, r);
      add_point(d.poles, -r);
    }
    if (d.order_at_infinity() != expected_at_infinity) {
      throw PreconditionError("component " + std::to_string(c + 1) + ": divisor of Omega has order " +
                              std::to_string(d.order_at_infinity()) + " at infinity, the marked data require " +
                              std::to_string(expected_at_infinity));
    }
  }

  // Propagate scales across nodes so that residues cancel.
  std::vector<bool> fixed(s, false);
  fixed[0] = true;
  std::queue<int> todo;
  todo.push(0);
  while (!todo.empty()) {
    const int c = todo.front();
    todo.pop();
    for (const auto& node : data.intersections) {
      int other = -1;
      Complex here, there;
      if (node.component_a == c) {
        other = node.component_b;
        here = node.coord_a;
        there = node.coord_b;
      } else if (node.component_b == c) {
        other = node.component_a;
        here = node.coord_b;
        there = node.coord_a;
      }
      if (other < 0 || fixed[other]) continue;
      diffs[other].scale = 1.0;
      const Complex unit = residue(diffs[other], there);
      if (unit == Complex(0.0)) throw PreconditionError("node residue vanishes; scales cannot be matched");
      diffs[other].scale = -residue(diffs[c], here) / unit;
      fixed[other] = true;
      todo.push(other);
    }
  }
  return diffs;
}

}  // namespace wdvv
