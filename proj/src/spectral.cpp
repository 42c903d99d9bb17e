#include "wdvv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace wdvv {

namespace {

std::string fmt(Complex z) {
  std::ostringstream os;
  os.precision(12);
  if (z.imag() == 0.0) {
    os << z.real();
  } else {
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  }
  return os.str();
}

bool is_real_square(Complex z) { return std::abs((z * z).imag()) <= 1e-12 * std::max(1.0, std::norm(z)); }

// Exponent Phi_j(point) as a jet in u. Terms that vanish at the point are
// skipped; a term that blows up there is a domain error.
ComplexJet exponent_at(const CurveComponent& comp, const std::vector<ComplexJet>& u, const ProjectivePoint& p) {
  ComplexJet phi(u.front().layout_ptr());
  for (const auto& term : comp.essential) {
    if (p.infinite) {
      if (term.power > 0) throw DomainError("psi evaluated at an essential singularity (infinity)");
      continue;
    }
    if (p.is_zero()) {
      if (term.power < 0) throw DomainError("psi evaluated at an essential singularity (0)");
      continue;
    }
    const Complex zp = term.power > 0 ? p.z : Complex(1.0) / p.z;
    phi += (term.coefficient * zp) * u[term.u_index];
  }
  return phi;
}

// Row of basis values (1, 1/(z - gamma_1), ...) at a point of a component.
std::vector<Complex> basis_at(const CurveComponent& comp, const ProjectivePoint& p) {
  std::vector<Complex> row{Complex(1.0)};
  for (const Complex& gamma : comp.pole_divisor) {
    if (p.infinite) {
      row.push_back(0.0);
      continue;
    }
    if (std::abs(p.z - gamma) <= 1e-14 * std::max(1.0, std::abs(gamma))) {
      throw DomainError("pole collision: pole-divisor point " + fmt(gamma) + " coincides with an evaluation point");
    }
    row.push_back(Complex(1.0) / (p.z - gamma));
  }
  return row;
}

std::vector<ComplexJet> u_jets(const Eigen::VectorXd& u, int order) { return jet_variables<Complex>(u, order); }

int find_q(const SpectralData& data, int flat_index, int* component) {
  for (int c = 0; c < data.num_components(); ++c) {
    const auto& qs = data.components[c].marked_q;
    for (int k = 0; k < static_cast<int>(qs.size()); ++k) {
      if (qs[k].flat_index == flat_index) {
        *component = c;
        return k;
      }
    }
  }
  return -1;
}

int find_p(const SpectralData& data, int u_index, int* component) {
  for (int c = 0; c < data.num_components(); ++c) {
    const auto& ps = data.components[c].essential;
    for (int k = 0; k < static_cast<int>(ps.size()); ++k) {
      if (ps[k].u_index == u_index) {
        *component = c;
        return k;
      }
    }
  }
  return -1;
}

}  // namespace

std::string ProjectivePoint::to_string() const { return infinite ? std::string("inf") : fmt(z); }

int SpectralData::n() const {
  int count = 0;
  for (const auto& c : components) count += static_cast<int>(c.marked_q.size());
  return count;
}

int SpectralData::l() const {
  int count = 0;
  for (const auto& c : components) count += static_cast<int>(c.normalization.size());
  return count;
}

int SpectralData::arithmetic_genus() const {
  return static_cast<int>(intersections.size()) - num_components() + 1;
}

int SpectralData::pole_divisor_degree() const {
  int count = 0;
  for (const auto& c : components) count += static_cast<int>(c.pole_divisor.size());
  return count;
}

ValidationReport validate(const SpectralData& data) {
  ValidationReport report;
  auto fail = [&](std::string msg) {
    report.passed = false;
    report.violations.push_back(std::move(msg));
  };
  const int s = data.num_components();
  if (s == 0) {
    fail("curve has no components");
    return report;
  }

  // Connectivity and node references.
  std::vector<int> parent(s);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  bool nodes_ok = true;
  for (const auto& node : data.intersections) {
    if (node.component_a < 0 || node.component_a >= s || node.component_b < 0 || node.component_b >= s ||
        node.component_a == node.component_b) {
      fail("intersection refers to an invalid component pair");
      nodes_ok = false;
      continue;
    }
    parent[root(node.component_a)] = root(node.component_b);
  }
  if (nodes_ok) {
    for (int c = 1; c < s; ++c) {
      if (root(c) != root(0)) {
        fail("curve is not connected");
        break;
      }
    }
  }

  report.arithmetic_genus = data.arithmetic_genus();
  report.pole_divisor_degree = data.pole_divisor_degree();
  report.expected_degree = report.arithmetic_genus + data.l() - 1;
  if (report.pole_divisor_degree != report.expected_degree) {
    fail("degree mismatch: D has degree " + std::to_string(report.pole_divisor_degree) +
         ", expected g_a + l - 1 = " + std::to_string(report.expected_degree));
  }
  if (data.l() < 1) fail("no normalization point");

  // Essential singularities and flat-coordinate markers.
  const int n = data.n();
  std::vector<int> p_count(std::max(n, 1), 0);
  std::vector<int> q_count(std::max(n, 1), 0);
  int num_p = 0;
  for (int c = 0; c < s; ++c) {
    const auto& comp = data.components[c];
    int at_inf = 0;
    int at_zero = 0;
    for (const auto& t : comp.essential) {
      ++num_p;
      if (t.power != 1 && t.power != -1) fail("essential term on component " + std::to_string(c + 1) + " has power other than +-1");
      if (t.coefficient == Complex(0.0)) fail("essential term with zero coefficient");
      if (t.u_index < 0 || t.u_index >= n) {
        fail("essential term refers to u-index " + std::to_string(t.u_index) + " out of range");
      } else {
        ++p_count[t.u_index];
      }
      (t.power > 0 ? at_inf : at_zero) += 1;
    }
    if (at_inf > 1 || at_zero > 1) fail("two essential singularities at the same point of component " + std::to_string(c + 1));
    for (const auto& q : comp.marked_q) {
      if (q.flat_index < 0 || q.flat_index >= n) {
        fail("Q point with flat index " + std::to_string(q.flat_index) + " out of range");
      } else {
        ++q_count[q.flat_index];
      }
    }
    for (const Complex& r : comp.normalization) {
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) fail("normalization point must be finite");
    }
  }
  if (num_p != n) fail("number of P points (" + std::to_string(num_p) + ") differs from number of Q points (" + std::to_string(n) + ")");
  for (int i = 0; i < n; ++i) {
    if (p_count[i] != 1) fail("u-index " + std::to_string(i) + " must carry exactly one essential singularity");
    if (q_count[i] != 1) fail("flat index " + std::to_string(i) + " must be marked by exactly one Q point");
  }

  // Pairwise disjointness of marked points and nodes, per component.
  for (int c = 0; c < s; ++c) {
    const auto& comp = data.components[c];
    std::vector<std::pair<ProjectivePoint, std::string>> marked;
    for (const auto& t : comp.essential) marked.push_back({t.location(), "P"});
    for (const auto& q : comp.marked_q) marked.push_back({q.point, "Q"});
    for (const Complex& r : comp.normalization) marked.push_back({ProjectivePoint::at(r), "R"});
    for (const Complex& g : comp.pole_divisor) marked.push_back({ProjectivePoint::at(g), "D"});
    for (const auto& node : data.intersections) {
      if (node.component_a == c) marked.push_back({ProjectivePoint::at(node.coord_a), "node"});
      if (node.component_b == c) marked.push_back({ProjectivePoint::at(node.coord_b), "node"});
    }
    for (std::size_t i = 0; i < marked.size(); ++i) {
      for (std::size_t j = i + 1; j < marked.size(); ++j) {
        if (marked[i].first.coincides(marked[j].first)) {
          fail("points " + marked[i].second + " and " + marked[j].second + " coincide at " +
               marked[i].first.to_string() + " on component " + std::to_string(c + 1));
        }
      }
    }
  }

  if (data.involution) {
    // Condition 1: the fixed points 0 and infinity of every component are P or Q points.
    int fixed_q = 0;
    for (int c = 0; c < s; ++c) {
      const auto& comp = data.components[c];
      for (const auto& fixed : {ProjectivePoint::at(0.0), ProjectivePoint::infinity()}) {
        bool marked = false;
        for (const auto& t : comp.essential) marked = marked || t.location().coincides(fixed);
        for (const auto& q : comp.marked_q) {
          if (q.point.coincides(fixed)) {
            marked = true;
            ++fixed_q;
          }
        }
        if (!marked) {
          fail("condition 1: fixed point " + fixed.to_string() + " of component " + std::to_string(c + 1) +
               " is neither a P nor a Q point");
        }
      }
    }
    // 2m = 2s fixed points: the n P points and 2m - n of the Q points, m <= n.
    if (s > n || fixed_q != 2 * s - n) fail("condition 1: fixed points of sigma are not P plus 2m - n Q points");
    // Condition 2: Q is sigma-invariant.
    for (int c = 0; c < s; ++c) {
      const auto& qs = data.components[c].marked_q;
      for (const auto& q : qs) {
        const bool found = std::any_of(qs.begin(), qs.end(), [&](const MarkedQ& o) { return o.point.coincides(q.point.sigma()); });
        if (!found) fail("condition 2: Q point " + q.point.to_string() + " on component " + std::to_string(c + 1) + " has no sigma-image in Q");
      }
    }
    // The node set is sigma-invariant.
    for (const auto& node : data.intersections) {
      const bool found = std::any_of(data.intersections.begin(), data.intersections.end(), [&](const IntersectionPoint& o) {
        return o.component_a == node.component_a && o.component_b == node.component_b &&
               std::abs(o.coord_a + node.coord_a) <= 1e-12 * std::max(1.0, std::abs(node.coord_a)) &&
               std::abs(o.coord_b + node.coord_b) <= 1e-12 * std::max(1.0, std::abs(node.coord_b));
      });
      if (!found) fail("node " + fmt(node.coord_a) + " ~ " + fmt(node.coord_b) + " has no sigma-image");
    }
  }

  if (data.reality) {
    auto check = [&](Complex z, const std::string& what) {
      if (!is_real_square(z)) fail("reality: squared coordinate of " + what + " " + fmt(z) + " is not real");
    };
    for (const auto& comp : data.components) {
      for (const Complex& g : comp.pole_divisor) check(g, "D point");
      for (const Complex& r : comp.normalization) check(r, "R point");
      for (const auto& q : comp.marked_q)
        if (!q.point.infinite) check(q.point.z, "Q point");
      for (const auto& t : comp.essential) check(t.coefficient, "essential coefficient");
    }
    for (const auto& node : data.intersections) {
      check(node.coord_a, "node");
      check(node.coord_b, "node");
    }
  }
  return report;
}

bool is_translation_covariant_mode(const SpectralData& data, std::string* reason) {
  auto refuse = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  if (!data.involution) return refuse("no involution");
  if (data.l() != 1) return refuse("more than one normalization point");
  if (data.num_components() != data.n()) return refuse("number of components differs from n");
  for (int c = 0; c < data.num_components(); ++c) {
    const auto& comp = data.components[c];
    if (comp.essential.size() != 1) return refuse("component " + std::to_string(c + 1) + " must carry exactly one P point");
    const auto& t = comp.essential.front();
    if (t.power != 1 || t.coefficient != Complex(1.0) || t.u_index != c) {
      return refuse("component " + std::to_string(c + 1) + " must have P = infinity with exponent u^i z");
    }
    if (comp.marked_q.size() != 1 || !comp.marked_q.front().point.is_zero() || comp.marked_q.front().flat_index != c) {
      return refuse("component " + std::to_string(c + 1) + " must have Q = 0");
    }
  }
  for (const auto& node : data.intersections) {
    if (std::abs(node.coord_a - node.coord_b) > 1e-14 * std::max(1.0, std::abs(node.coord_a))) {
      return refuse("intersection coordinates differ on the two components");
    }
  }
  return true;
}

BakerAkhiezerSystem assemble_system(const SpectralData& data, const Eigen::VectorXd& u, int order) {
  if (u.size() != data.n()) throw DimensionError("u has " + std::to_string(u.size()) + " entries, curve needs " + std::to_string(data.n()));
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (!std::isfinite(u[i])) throw DomainError("u must be finite");

  const int s = data.num_components();
  std::vector<int> offsets(s);
  int unknowns = 0;
  for (int c = 0; c < s; ++c) {
    offsets[c] = unknowns;
    unknowns += 1 + static_cast<int>(data.components[c].pole_divisor.size());
  }
  const int rows = data.l() + static_cast<int>(data.intersections.size());
  if (rows != unknowns) {
    throw PreconditionError("Baker-Akhiezer system is not square: " + std::to_string(rows) + " conditions for " +
                            std::to_string(unknowns) + " unknowns");
  }

  const auto uj = u_jets(u, order);
  const int n = static_cast<int>(u.size());
  BakerAkhiezerSystem sys{JetMatrix<Complex>(rows, unknowns, n, order),
                          std::vector<ComplexJet>(rows, ComplexJet(n, order)), offsets};

  int row = 0;
  // psi_p(r) = 1, written as R_p(r) = exp(-Phi_p(r)).
  for (int c = 0; c < s; ++c) {
    const auto& comp = data.components[c];
    for (const Complex& r : comp.normalization) {
      const auto p = ProjectivePoint::at(r);
      const auto basis = basis_at(comp, p);
      for (std::size_t k = 0; k < basis.size(); ++k)
        sys.matrix(row, offsets[c] + static_cast<int>(k)) = ComplexJet::constant(basis[k], n, order);
      sys.rhs[row] = exp(-exponent_at(comp, uj, p));
      ++row;
    }
  }
  // psi_a(coord_a) = psi_b(coord_b), written as exp(Phi_a - Phi_b) R_a - R_b = 0.
  for (const auto& node : data.intersections) {
    const auto& ca = data.components[node.component_a];
    const auto& cb = data.components[node.component_b];
    const auto pa = ProjectivePoint::at(node.coord_a);
    const auto pb = ProjectivePoint::at(node.coord_b);
    const ComplexJet factor = exp(exponent_at(ca, uj, pa) - exponent_at(cb, uj, pb));
    const auto ba = basis_at(ca, pa);
    const auto bb = basis_at(cb, pb);
    for (std::size_t k = 0; k < ba.size(); ++k)
      sys.matrix(row, offsets[node.component_a] + static_cast<int>(k)) = factor * ba[k];
    for (std::size_t k = 0; k < bb.size(); ++k)
      sys.matrix(row, offsets[node.component_b] + static_cast<int>(k)) = ComplexJet::constant(-bb[k], n, order);
    ++row;
  }
  return sys;
}

ComplexJet evaluate_psi(const SpectralData& data, const BakerAkhiezerEvaluation& ba, int component,
                        const ProjectivePoint& point) {
  const auto& comp = data.components.at(component);
  const auto uj = u_jets(ba.u, ba.order);
  const auto basis = basis_at(comp, point);
  const auto& f = ba.coefficients.at(component);
  ComplexJet regular = f[0] * basis[0];
  for (std::size_t k = 1; k < basis.size(); ++k) regular += f[k] * basis[k];
  return exp(exponent_at(comp, uj, point)) * regular;
}

BakerAkhiezerEvaluation solve_ba(const SpectralData& data, const Eigen::VectorXd& u, int order) {
  BakerAkhiezerSystem sys = assemble_system(data, u, order);

  BakerAkhiezerEvaluation ba;
  ba.u = u;
  ba.order = order;
  const Eigen::MatrixXcd a0 = sys.matrix.constant_terms();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a0);
  const auto& sv = svd.singularValues();
  ba.condition_number = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
  if (!(ba.condition_number <= kSingularConditionNumber)) {
    std::ostringstream os;
    os.precision(17);
    os << "Baker-Akhiezer system is singular at u = (";
    for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u[i];
    os << "), condition number " << ba.condition_number;
    throw SingularSystemError(os.str());
  }

  const std::vector<ComplexJet> f = jet_linear_solve(std::move(sys.matrix), std::move(sys.rhs));
  for (int c = 0; c < data.num_components(); ++c) {
    const int count = 1 + static_cast<int>(data.components[c].pole_divisor.size());
    ba.coefficients.emplace_back(f.begin() + sys.offsets[c], f.begin() + sys.offsets[c] + count);
  }

  const int n = data.n();
  for (int j = 0; j < n; ++j) {
    int c = -1;
    const int k = find_q(data, j, &c);
    if (k < 0) throw PreconditionError("no Q point for flat index " + std::to_string(j));
    ba.x.push_back(evaluate_psi(data, ba, c, data.components[c].marked_q[k].point));
  }
  // h_i = lim psi exp(-u^i k_i) at P_i: the rational part at P_i (other
  // essential terms on the component vanish there).
  for (int i = 0; i < n; ++i) {
    int c = -1;
    const int k = find_p(data, i, &c);
    if (k < 0) throw PreconditionError("no P point for u-index " + std::to_string(i));
    const auto& comp = data.components[c];
    const auto basis = basis_at(comp, comp.essential[k].location());
    const auto& coeffs = ba.coefficients[c];
    ComplexJet h = coeffs[0] * basis[0];
    for (std::size_t m = 1; m < basis.size(); ++m) h += coeffs[m] * basis[m];
    ba.h.push_back(h);
  }
  return ba;
}

double translation_covariance_check(const SpectralData& data, const Eigen::VectorXd& u, double mu) {
  std::string why;
  if (!is_translation_covariant_mode(data, &why)) {
    throw PreconditionError("translation covariance needs the equal-coordinate configuration: " + why);
  }
  Complex r{};
  for (const auto& comp : data.components)
    if (!comp.normalization.empty()) r = comp.normalization.front();

  const auto base = solve_ba(data, u, 0);
  const auto shifted = solve_ba(data, (u.array() + mu).matrix(), 0);
  const Complex factor = std::exp(-r * mu);
  double worst = 0.0;
  for (std::size_t j = 0; j < base.x.size(); ++j)
    worst = std::max(worst, std::abs(shifted.x[j].value() - factor * base.x[j].value()));
  return worst;
}

}  // namespace wdvv
