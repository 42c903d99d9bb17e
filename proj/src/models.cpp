#include "wdvv/models.hpp"

#include <cmath>

namespace wdvv {

namespace {

const double kSqrt7 = std::sqrt(7.0);

ComplexJet log_away_from_cut(const ComplexJet& w) {
  return w.value().real() < 0.0 ? log(-w) : log(w);
}

double get(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& params, std::initializer_list<const char*> known,
                    const std::string& model) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw PreconditionError("model " + model + " has no parameter '" + key + "'");
  }
}

bool real_square(Complex z) { return std::abs((z * z).imag()) <= 1e-12 * std::max(1.0, std::norm(z)); }

}  // namespace

Example1Model Example1Model::make(Complex a, Complex c) {
  Example1Model m;
  m.a_ = a;
  m.c_ = c;
  m.params_ = euclidean_parameters(a, c);
  return m;
}

SpectralData Example1Model::spectral_data() const {
  SpectralData data;
  CurveComponent g1;
  g1.essential = {{1, 0, 1.0}};
  g1.marked_q = {{ProjectivePoint::at(0.0), 0}};
  CurveComponent g2;
  g2.pole_divisor = {c_};
  g2.essential = {{1, 1, 1.0}};
  g2.marked_q = {{ProjectivePoint::at(0.0), 1}};
  g2.normalization = {r()};
  data.components = {g1, g2};
  data.intersections = {{0, a_, 1, a_}, {0, -a_, 1, -a_}};
  data.reality = real_square(a_) && real_square(c_) && real_square(r());
  return data;
}

std::vector<RationalDifferential> Example1Model::printed_differentials() const {
  RationalDifferential w1{0, {}, {{0.0, 1}, {a_, 1}, {-a_, 1}}, beta()};
  RationalDifferential w2{1, {{c_, 1}, {-c_, 1}}, {{0.0, 1}, {a_, 1}, {-a_, 1}, {r(), 1}, {-r(), 1}}, 1.0};
  return {w1, w2};
}

Example1Coefficients Example1Model::printed_ba_coefficients(const Eigen::VectorXd& u) const {
  const Complex a = a_, c = c_, r = this->r();
  const Complex e1 = std::exp(2.0 * a * u[0]);
  const Complex e2 = std::exp(2.0 * a * u[1]);
  const Complex er = std::exp(-r * u[1]);
  const Complex den = (a + c) * (a - r) * e2 - (a + r) * (a - c) * e1;
  if (std::abs(den) == 0.0) throw SingularSystemError("Example 1 closed form is singular at u = " + format_point(u));
  Example1Coefficients k;
  k.f0 = 2.0 * a * (c - r) * std::exp(a * u[0] + (a - r) * u[1]) / den;
  k.g0 = er * ((a - c) * e1 + (a + c) * e2) * (c - r) / den;
  k.g1 = (a * a - c * c) * (r - c) * er * (e1 - e2) / ((a + c) * (r - a) * e2 + (a - c) * (a + r) * e1);
  return k;
}

Eigen::VectorXcd Example1Model::flat_coords(const Eigen::VectorXd& u) const {
  const Example1Coefficients k = printed_ba_coefficients(u);
  Eigen::VectorXcd x(2);
  x << k.f0, k.g0 - k.g1 / c_;
  return x;
}

PrepotentialField Example1Model::prepotential(RootSign sign) const {
  const Complex a = a_, c = c_;
  return PrepotentialField(2, [a, c, sign](std::span<const ComplexJet> x) { return example1_prepotential(x, a, c, sign); });
}

QuasihomogeneityData Example1Model::quasihomogeneity() { return {Eigen::Vector2d(1.0, 1.0), 2.0, true}; }

ComplexJet example1_prepotential(std::span<const ComplexJet> x, Complex a, Complex c, RootSign sign) {
  if (x.size() != 2) throw DimensionError("F_{a,c} takes two coordinates");
  const ComplexJet& x1 = x[0];
  const ComplexJet& x2 = x[1];
  const ComplexJet x1s = x1 * x1;
  const ComplexJet x2s = x2 * x2;
  ComplexJet root = sqrt((a * a - c * c) * x1s + (c * c) * x2s);
  if (sign == RootSign::negative) root = -root;
  const Complex q = std::sqrt(2.0 * c * c - a * a);
  const ComplexJet l1 = log_away_from_cut(-(c * x2 + root) / x1);
  const ComplexJet w2 = (c * c) * (x1s - 3.0 * x2s) + (a * a) * (x2s - x1s) - (2.0 * q) * x2 * root;
  const ComplexJet l2 = log_away_from_cut(w2);
  return (2.0 * x2 * root + (2.0 * c) * x1s * l1 - q * (x1s + x2s) * l2) / (4.0 * a * c);
}

Eigen::VectorXd example1_flat_coords(const Eigen::VectorXd& u) {
  const double e1 = std::exp(2.0 * u[0]);
  const double e2 = std::exp(2.0 * u[1]);
  Eigen::VectorXd x(2);
  x[0] = 4.0 * (7.0 - kSqrt7) * std::exp(u[0] - u[1]) / ((21.0 - 6.0 * kSqrt7) * e1 + (7.0 + 2.0 * kSqrt7) * e2);
  x[1] = std::exp(-2.0 * u[1]) * (3.0 * (kSqrt7 - 3.0) * e1 + (5.0 + kSqrt7) * e2) /
         (3.0 * (kSqrt7 - 2.0) * e1 + (2.0 + kSqrt7) * e2);
  return x;
}

CorrelatorTensor example1_printed_correlators(const Eigen::VectorXd& x, RootSign sign) {
  if (x.size() != 2) throw DimensionError("Example 1 correlators take two coordinates");
  const double x1 = x[0], x2 = x[1];
  if (x1 == 0.0) throw DomainError("Example 1 correlators are singular at x1 = 0");
  const double s = 3.0 * x1 * x1 + 4.0 * x2 * x2;
  const double s3 = (sign == RootSign::positive ? 1.0 : -1.0) * std::sqrt(s * s * s);
  const double q = 3.0 * std::pow(x1, 4) + 7.0 * x1 * x1 * x2 * x2 + 4.0 * std::pow(x2, 4);
  const double den = 2.0 * q * q;
  const double c111 = -(9.0 * std::pow(x1, 8) + 51.0 * std::pow(x1, 6) * x2 * x2 + 88.0 * std::pow(x1, 4) * std::pow(x2, 4) +
                        (2.0 * x1 * x1 * std::pow(x2, 3) + 4.0 * std::pow(x2, 5)) * s3 +
                        48.0 * x1 * x1 * std::pow(x2, 6)) /
                      (x1 * den);
  const double c112 = (9.0 * std::pow(x1, 6) * x2 + 15.0 * std::pow(x1, 4) * std::pow(x2, 3) -
                       8.0 * x1 * x1 * std::pow(x2, 5) + (2.0 * x1 * x1 * x2 * x2 + 4.0 * std::pow(x2, 4)) * s3 -
                       16.0 * std::pow(x2, 7)) /
                      den;
  const double c122 = -(9.0 * std::pow(x1, 7) + 15.0 * std::pow(x1, 5) * x2 * x2 - 8.0 * std::pow(x1, 3) * std::pow(x2, 4) +
                        (2.0 * std::pow(x1, 3) * x2 + 4.0 * x1 * std::pow(x2, 3)) * s3 - 16.0 * x1 * std::pow(x2, 6)) /
                      den;
  const double c222 = (-27.0 * std::pow(x1, 6) * x2 - 16.0 * std::pow(x2, 7) - 72.0 * x1 * x1 * std::pow(x2, 5) +
                       (4.0 * x1 * x1 * x2 * x2 + 2.0 * std::pow(x1, 4)) * s3 - 81.0 * std::pow(x1, 4) * std::pow(x2, 3)) /
                      den;
  const double table[4] = {c111, c112, c122, c222};
  return CorrelatorTensor::from_function(x, [&](int i, int j, int k) { return table[i + j + k]; });
}

SpectralData Example2Model::spectral_data() {
  SpectralData data;
  CurveComponent g1;
  g1.essential = {{1, 0, 2.0}, {-1, 1, 0.5}};
  g1.normalization = {r()};
  CurveComponent g2;
  g2.pole_divisor = {c()};
  g2.marked_q = {{ProjectivePoint::infinity(), 0}, {ProjectivePoint::at(0.0), 1}};
  data.components = {g1, g2};
  data.intersections = {{0, a(), 1, b()}, {0, -a(), 1, -b()}};
  data.reality = true;
  return data;
}

std::vector<RationalDifferential> Example2Model::printed_differentials() {
  RationalDifferential w1{0, {{0.0, 1}}, {{a(), 1}, {-a(), 1}, {r(), 1}, {-r(), 1}}, 1.0};
  RationalDifferential w2{1, {{c(), 1}, {-c(), 1}}, {{0.0, 1}, {b(), 1}, {-b(), 1}}, 1.0};
  return {w1, w2};
}

Eigen::VectorXd Example2Model::flat_coords(const Eigen::VectorXd& u) {
  const double e = std::exp(-u[0] - u[1]);
  const double t = u[0] - u[1];
  return Eigen::Vector2d(e * (std::cos(t) + std::sin(t)), e * (std::cos(t) - std::sin(t)));
}

std::vector<ComplexJet> Example2Model::flat_coord_jets(const Eigen::VectorXd& u, int order) {
  const auto v = jet_variables<Complex>(u, order);
  const ComplexJet e = exp(-v[0] - v[1]);
  const ComplexJet t = v[0] - v[1];
  const ComplexJet c = cos(t), s = sin(t);
  return {e * (c + s), e * (c - s)};
}

PrepotentialField Example2Model::prepotential() const {
  const double q = q_;
  return PrepotentialField(2, [q](std::span<const ComplexJet> x) { return example2_prepotential(x, q); });
}

QuasihomogeneityData Example2Model::quasihomogeneity() { return {Eigen::Vector2d(1.0, 1.0), 2.0, true}; }

ComplexJet example2_prepotential(std::span<const ComplexJet> x, double q) {
  if (x.size() != 2) throw DimensionError("F_q takes two coordinates");
  const ComplexJet R = x[0] * x[0] + x[1] * x[1];
  ComplexJet F = -(R * log(R)) / 8.0;
  if (q != 0.0) F += Complex(q) * R * atan(x[0] / x[1]);
  return F;
}

CorrelatorTensor example2_printed_correlators(const Eigen::VectorXd& x) {
  if (x.size() != 2) throw DimensionError("Example 2 correlators take two coordinates");
  const double R = x.squaredNorm();
  if (R == 0.0) throw DomainError("Example 2 correlators are singular at the origin");
  // c_{iii} and c_{iij}; the others follow by swapping the two indices.
  auto c_iii = [&](double xi) { return -1.5 * xi / R + xi * xi * xi / (R * R); };
  auto c_iij = [&](double xi, double xj) { return -0.5 * xj / R + xi * xi * xj / (R * R); };
  return CorrelatorTensor::from_function(x, [&](int i, int j, int k) {
    const int ones = (i == 1) + (j == 1) + (k == 1);
    switch (ones) {
      case 0: return c_iii(x[0]);
      case 1: return c_iij(x[0], x[1]);
      case 2: return c_iij(x[1], x[0]);
      default: return c_iii(x[1]);
    }
  });
}

Eigen::VectorXd example2_metric(const Eigen::VectorXd& u) {
  const double h2 = 4.0 * std::exp(-2.0 * (u[0] + u[1]));
  return Eigen::Vector2d(h2, h2);
}

std::vector<std::string> model_names() { return {"example1", "example2"}; }

ModelInstance make_model(const std::string& name, const std::map<std::string, double>& parameters) {
  if (name == "example1") {
    reject_unknown(parameters, {"a", "c", "root_sign"}, name);
    const double a = get(parameters, "a", 1.0);
    const double c = get(parameters, "c", 2.0 / kSqrt7);
    const double sign_value = get(parameters, "root_sign", -1.0);
    if (sign_value != 1.0 && sign_value != -1.0) throw PreconditionError("root_sign must be +1 or -1");
    const RootSign sign = sign_value > 0 ? RootSign::positive : RootSign::negative;
    const Example1Model m = Example1Model::make(a, c);
    if (std::abs(m.r().imag()) > 0.0) throw PreconditionError("example1: r is not real for these parameters, so x(u) is not real");
    const bool printed_point = std::abs(a - 1.0) <= 1e-15 && std::abs(c - 2.0 / kSqrt7) <= 1e-15;
    ModelInstance inst{name,
                       {{"a", a}, {"c", c}, {"root_sign", sign_value}},
                       FlatModel::build(m.spectral_data()),
                       ConstantMetric::identity(2),
                       m.prepotential(sign),
                       m.prepotential(kSpectralRootSign),
                       Example1Model::quasihomogeneity(),
                       [m](const Eigen::VectorXd& u) -> Eigen::VectorXd { return m.flat_coords(u).real(); },
                       {},
                       m.r().real()};
    if (printed_point) {
      inst.printed_x = example1_flat_coords;
      inst.printed_correlators = [sign](const Eigen::VectorXd& x) { return example1_printed_correlators(x, sign); };
    }
    return inst;
  }
  if (name == "example2") {
    reject_unknown(parameters, {"q"}, name);
    const double q = get(parameters, "q", 0.0);
    const Example2Model m(q);
    ModelInstance inst{name,
                       {{"q", q}},
                       FlatModel::build(Example2Model::spectral_data()),
                       ConstantMetric::identity(2),
                       m.prepotential(),
                       Example2Model(0.0).prepotential(),
                       Example2Model::quasihomogeneity(),
                       Example2Model::flat_coords,
                       {},
                       2.0};
    if (q == 0.0) inst.printed_correlators = example2_printed_correlators;
    return inst;
  }
  std::string known;
  for (const auto& n : model_names()) known += (known.empty() ? "" : ", ") + n;
  throw PreconditionError("unknown model '" + name + "' (known: " + known + ")");
}

ModelInstance model_from_curve(const std::string& name, SpectralData data) {
  std::optional<double> rate;
  if (is_translation_covariant_mode(data)) {
    for (const auto& comp : data.components)
      if (!comp.normalization.empty()) rate = comp.normalization.front().real();
  }
  FlatModel flat = FlatModel::build(std::move(data));
  if (flat.metric.eta.imag().cwiseAbs().maxCoeff() > 1e-12) throw PreconditionError("metric from residues is not real");
  ConstantMetric eta(flat.metric.eta.real());
  return ModelInstance{name, {}, std::move(flat), std::move(eta), std::nullopt, std::nullopt, std::nullopt, {}, {}, rate};
}

}  // namespace wdvv
