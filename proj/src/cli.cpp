#include "wdvv/cli.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "wdvv/egoroff.hpp"
#include "wdvv/extend.hpp"

namespace wdvv::cli {

namespace pt = boost::property_tree;
using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw ConfigError(what + ": '" + text + "' is not a number");
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(what + ": '" + text + "' is not an integer");
  return static_cast<int>(v);
}

Complex parse_complex(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '(') {
    std::istringstream is(t);
    Complex z;
    char rest = 0;
    if (!(is >> z) || (is >> rest)) throw ConfigError(what + ": '" + text + "' is not a complex number (re,im)");
    return z;
  }
  return parse_double(t, what);
}

ProjectivePoint parse_point(const std::string& text, const std::string& what) {
  if (trim(text) == "inf") return ProjectivePoint::infinity();
  return ProjectivePoint::at(parse_complex(text, what));
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(what + ": '" + text + "' is not a boolean");
}

pt::ptree read_ini_file(const std::string& path) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("cannot read '" + path + "': " + e.message());
  }
  return tree;
}

void set_value(RunConfig& c, const std::string& section, const std::string& key, const std::string& value) {
  const std::string what = section + "." + key;
  if (section == "model") {
    if (key == "name" || key == "curve") {
      c.model = trim(value);
    } else if (key == "exponents") {
      std::vector<double> d;
      for (const auto& t : tokens(value)) {
        for (const auto& part : split(t, ',')) d.push_back(parse_double(part, what));
      }
      c.exponents = d;
    } else if (key == "d_F") {
      c.d_F = parse_double(value, what);
    } else {
      throw ConfigError("unknown key " + what);
    }
  } else if (section == "parameters") {
    c.parameters[key] = parse_double(value, what);
  } else if (section == "sample") {
    if (key == "seed") {
      const std::string t = trim(value);
      if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) throw ConfigError(what + ": '" + value + "' is not a seed");
      c.seed = std::stoull(t);
    } else if (key == "count") {
      c.samples = parse_int(value, what);
      if (c.samples < 0) throw ConfigError(what + " must be non-negative");
    } else if (key == "u_min") {
      c.u_min = parse_double(value, what);
    } else if (key == "u_max") {
      c.u_max = parse_double(value, what);
    } else if (key == "x_min") {
      c.x_min = parse_double(value, what);
    } else if (key == "x_max") {
      c.x_max = parse_double(value, what);
    } else if (key == "grid") {
      c.grid = parse_int(value, what);
      if (c.grid < 0) throw ConfigError(what + " must be non-negative");
    } else if (key == "source") {
      c.source = trim(value);
      if (c.source != "auto" && c.source != "prepotential" && c.source != "pipeline") {
        throw ConfigError(what + " must be auto, prepotential or pipeline");
      }
    } else {
      throw ConfigError("unknown key " + what);
    }
  } else if (section == "tolerances") {
    const auto defaults = default_tolerances();
    if (!defaults.count(key)) throw ConfigError("unknown tolerance '" + key + "'");
    const double v = parse_double(value, what);
    if (!(v > 0.0)) throw ConfigError("tolerance " + key + " must be positive");
    c.tolerances[key] = v;
  } else if (section == "outputs") {
    if (key == "report") {
      c.report_path = trim(value);
    } else if (key == "samples") {
      c.samples_path = trim(value);
    } else {
      throw ConfigError("unknown key " + what);
    }
  } else {
    throw ConfigError("unknown section '" + section + "'");
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Runs `body` once per sample, keeping the largest residual; library errors
// turn the check into a failure with the message as note.
class CheckRunner {
 public:
  explicit CheckRunner(std::vector<CheckRecord>& out) : out_(out) {}

  void run(const std::string& name, double tolerance, int samples, const std::function<double(int)>& body) {
    CheckRecord rec{name, 0.0, tolerance, false, samples, ""};
    try {
      for (int k = 0; k < samples; ++k) {
        const double r = body(k);
        if (!(r <= rec.residual)) rec.residual = std::isnan(r) ? r : std::max(rec.residual, r);
        if (std::isnan(rec.residual)) break;
      }
      rec.passed = rec.residual <= tolerance;
    } catch (const Error& e) {
      rec.residual = std::numeric_limits<double>::quiet_NaN();
      rec.note = e.what();
    }
    out_.push_back(std::move(rec));
  }

 private:
  std::vector<CheckRecord>& out_;
};

const std::vector<double> kScalings{0.5, 2.0, 3.0};

bool is_registry_name(const std::string& model) {
  const auto names = model_names();
  return std::find(names.begin(), names.end(), model) != names.end();
}

}  // namespace

std::map<std::string, double> default_tolerances() {
  return {{"residual", 1e-9},         {"reality", 1e-10},    {"oracle", 1e-8},  {"flatness_offdiag", 1e-10},
          {"flatness_diag", 1e-8},    {"translation", 1e-11}, {"residue", 1e-13}};
}

double RunConfig::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

RunConfig load_config(const std::string& path, RunConfig base) {
  const pt::ptree tree = read_ini_file(path);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside any section");
    for (const auto& [key, value] : body) set_value(base, section, key, value.data());
  }
  // Curve files named in a config are relative to the config file.
  if (!is_registry_name(base.model) && !base.model.empty()) {
    const std::filesystem::path p(base.model);
    if (p.is_relative()) base.model = (std::filesystem::path(path).parent_path() / p).string();
  }
  return base;
}

void apply_setting(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = assignment.substr(eq + 1);
  const auto dot = key.find('.');
  if (dot == std::string::npos) {
    set_value(config, "parameters", key, value);
  } else {
    set_value(config, key.substr(0, dot), key.substr(dot + 1), value);
  }
}

SpectralData load_curve(const std::string& path) {
  const pt::ptree tree = read_ini_file(path);
  SpectralData data;
  std::map<int, CurveComponent> comps;
  for (const auto& [section, body] : tree) {
    if (section == "curve") {
      for (const auto& [key, value] : body) {
        if (key == "involution") {
          data.involution = parse_bool(value.data(), "curve.involution");
        } else if (key == "reality") {
          data.reality = parse_bool(value.data(), "curve.reality");
        } else {
          throw ConfigError("unknown key curve." + key);
        }
      }
    } else if (section == "nodes") {
      for (const auto& [key, value] : body) {
        const auto t = tokens(value.data());
        if (t.size() != 4) throw ConfigError("nodes." + key + " must read: component coord component coord");
        data.intersections.push_back({parse_int(t[0], "nodes." + key) - 1, parse_complex(t[1], "nodes." + key),
                                      parse_int(t[2], "nodes." + key) - 1, parse_complex(t[3], "nodes." + key)});
      }
    } else if (section.rfind("component", 0) == 0) {
      const int id = parse_int(section.substr(9), "section " + section);
      if (id < 1) throw ConfigError("component sections are numbered from 1");
      CurveComponent& comp = comps[id];
      for (const auto& [key, value] : body) {
        const std::string what = section + "." + key;
        if (key == "pole_divisor") {
          for (const auto& t : tokens(value.data())) comp.pole_divisor.push_back(parse_complex(t, what));
        } else if (key == "normalization") {
          for (const auto& t : tokens(value.data())) comp.normalization.push_back(parse_complex(t, what));
        } else if (key == "essential") {
          for (const auto& entry : split(value.data(), ';')) {
            const auto t = tokens(entry);
            if (t.size() != 3) throw ConfigError(what + " entries must read: power u_index coefficient");
            comp.essential.push_back({parse_int(t[0], what), parse_int(t[1], what) - 1, parse_complex(t[2], what)});
          }
        } else if (key == "q") {
          for (const auto& entry : split(value.data(), ';')) {
            const auto t = tokens(entry);
            if (t.size() != 2) throw ConfigError(what + " entries must read: point flat_index");
            comp.marked_q.push_back({parse_point(t[0], what), parse_int(t[1], what) - 1});
          }
        } else {
          throw ConfigError("unknown key " + what);
        }
      }
    } else {
      throw ConfigError("unknown section '" + section + "' in curve file");
    }
  }
  int expected = 1;
  for (auto& [id, comp] : comps) {
    if (id != expected++) throw ConfigError("component sections must be numbered 1, 2, ... without gaps");
    data.components.push_back(std::move(comp));
  }
  return data;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

json Report::to_json() const {
  json j;
  j["tool"] = "wdvv";
  j["version"] = kVersion;
  j["command"] = command;
  j["model"] = model;
  json params = json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  j["seed"] = seed;
  j["samples"] = sample_points.size();
  json points = json::array();
  for (const auto& p : sample_points) points.push_back(vector_json(p));
  j["sample_points"] = points;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  std::vector<CheckRecord> sorted = checks;
  std::stable_sort(sorted.begin(), sorted.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  json arr = json::array();
  for (const auto& c : sorted) {
    json r;
    r["name"] = c.name;
    r["residual"] = number_or_null(c.residual);
    r["tolerance"] = c.tolerance;
    r["passed"] = c.passed;
    r["samples"] = c.samples;
    if (!c.note.empty()) r["note"] = c.note;
    arr.push_back(r);
  }
  j["checks"] = arr;
  j["verdict"] = passed() ? "pass" : "fail";
  return j;
}

ModelInstance load_model(const RunConfig& config) {
  if (is_registry_name(config.model)) return make_model(config.model, config.parameters);
  if (!std::filesystem::exists(config.model)) {
    std::string known;
    for (const auto& n : model_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown model '" + config.model + "': not a registry name (" + known + ") or a curve file");
  }
  if (!config.parameters.empty()) throw ConfigError("curve-file models take no parameters");
  return model_from_curve(config.model, load_curve(config.model));
}

std::vector<Eigen::VectorXd> sample_u(const RunConfig& config, int dim) {
  if (!(config.u_min <= config.u_max)) throw ConfigError("sample.u_min exceeds sample.u_max");
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(config.u_min, config.u_max);
  std::vector<Eigen::VectorXd> out;
  for (int k = 0; k < config.samples; ++k) {
    Eigen::VectorXd u(dim);
    for (int i = 0; i < dim; ++i) u[i] = dist(rng);
    out.push_back(u);
  }
  return out;
}

Report cmd_verify(const RunConfig& config) {
  const ModelInstance m = load_model(config);
  const int n = m.flat.data.n();
  Report report;
  report.command = "verify";
  report.model = m.name;
  report.parameters = m.parameters;
  report.seed = config.seed;
  report.sample_points = sample_u(config, n);
  const auto& us = report.sample_points;
  const int N = static_cast<int>(us.size());

  CheckRunner checks(report.checks);
  const ValidationReport validation = validate(m.flat.data);
  report.checks.push_back({"curve.validation", static_cast<double>(validation.violations.size()), 0.0, validation.passed, 1, ""});

  // Pipeline evaluations shared by most checks; a failure here fails them all.
  std::vector<EgoroffEvaluation> evals(N);
  std::string eval_error;
  for (int k = 0; k < N && eval_error.empty(); ++k) {
    try {
      evals[k] = evaluate(m.flat, us[k]);
    } catch (const Error& e) {
      eval_error = e.what();
    }
  }
  auto eval = [&](int k) -> const EgoroffEvaluation& {
    if (!eval_error.empty()) throw SingularSystemError(eval_error);
    return evals[k];
  };
  auto xpoint = [&](int k) -> Eigen::VectorXd { return eval(k).x.real(); };

  const double tol_res = config.tolerance("residual");
  checks.run("associativity.pipeline", tol_res, N,
             [&](int k) { return associativity_residual(correlators_from_metric(eval(k)), m.eta); });
  checks.run("egoroff.symmetry", tol_res, N, [&](int k) { return symmetry_residual(rotation_coefficients(eval(k).H_jets)); });
  checks.run("flatness.diagonal", config.tolerance("flatness_diag"), N,
             [&](int k) { return flatness_residual(m.flat, us[k]).diagonal_relative; });
  checks.run("flatness.off_diagonal", config.tolerance("flatness_offdiag"), N,
             [&](int k) { return flatness_residual(m.flat, us[k]).off_diagonal; });
  checks.run("inversion.round_trip", tol_res, N, [&](int k) {
    const Eigen::VectorXd guess = us[k].array() + 0.05;
    const auto ba = solve_ba(m.flat.data, invert_coordinates(m.flat, xpoint(k), guess), 0);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(ba.x[i].value() - eval(k).x[i]));
    return worst;
  });
  checks.run("residues.global_sum", config.tolerance("residue"), 1, [&](int) {
    double worst = 0.0;
    for (const auto& d : m.flat.differentials) worst = std::max(worst, global_residue_sum(d));
    return worst;
  });
  checks.run("residues.regularity", config.tolerance("residue"), 1,
             [&](int) { return regularity_check(m.flat.data, m.flat.differentials); });
  if (m.flat.data.reality) {
    checks.run("reality", config.tolerance("reality"), N, [&](int k) {
      const auto& e = eval(k);
      double worst = std::max({e.x.imag().cwiseAbs().maxCoeff(), e.h.imag().cwiseAbs().maxCoeff(),
                               e.H.imag().cwiseAbs().maxCoeff()});
      return std::max(worst, correlators_from_metric(e).max_imag());
    });
  }
  if (m.translation_rate) {
    const double rate = *m.translation_rate;
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    std::vector<double> mus(N);
    for (auto& mu : mus) mu = dist(rng);
    checks.run("translation", config.tolerance("translation"), N, [&](int k) {
      const auto base = solve_ba(m.flat.data, us[k], 0);
      const auto moved = solve_ba(m.flat.data, (us[k].array() + mus[k]).matrix(), 0);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(moved.x[i].value() - std::exp(-rate * mus[k]) * base.x[i].value()));
      return worst;
    });
    checks.run("homogeneity.pipeline", tol_res, N, [&](int k) {
      const CorrelatorTensor c = correlators_from_metric(eval(k));
      double worst = 0.0;
      for (double lambda : kScalings) {
        const Eigen::VectorXd moved = us[k].array() - std::log(lambda) / rate;
        const CorrelatorTensor cl = correlators_from_metric(m.flat, moved);
        for (std::size_t e = 0; e < c.entries().size(); ++e)
          worst = std::max(worst, std::abs(cl.entries()[e] - c.entries()[e] / lambda));
      }
      return worst;
    });
  }
  if (m.prepotential) {
    const PrepotentialField& F = *m.prepotential;
    checks.run("associativity.prepotential", tol_res, N,
               [&](int k) { return associativity_residual(third_derivative_tensor(F, xpoint(k)), m.eta); });
    checks.run("homogeneity.prepotential", tol_res, N, [&](int k) {
      const CorrelatorSource source = [&](const Eigen::VectorXd& x) { return third_derivative_tensor(F, x); };
      double worst = 0.0;
      for (double lambda : kScalings) worst = std::max(worst, correlator_scaling_check(source, xpoint(k), lambda));
      return worst;
    });
    if (m.quasihomogeneity) {
      checks.run("euler.prepotential", tol_res, N, [&](int k) { return euler_check(F, *m.quasihomogeneity, xpoint(k)); });
    }
  }
  if (m.spectral_prepotential) {
    checks.run("oracle.equivalence", config.tolerance("oracle"), N, [&](int k) {
      return correlators_from_metric(eval(k)).max_abs_difference(third_derivative_tensor(*m.spectral_prepotential, xpoint(k)));
    });
  }
  if (m.printed_x) {
    checks.run("oracle.printed_coordinates", config.tolerance("oracle"), N, [&](int k) {
      const Eigen::VectorXd printed = m.printed_x(us[k]);
      return (eval(k).x - printed.cast<Complex>()).cwiseAbs().maxCoeff() / std::max(1.0, printed.cwiseAbs().maxCoeff());
    });
  }
  if (m.printed_correlators && m.prepotential) {
    checks.run("oracle.printed_correlators", config.tolerance("oracle"), N, [&](int k) {
      return m.printed_correlators(xpoint(k)).max_abs_difference(third_derivative_tensor(*m.prepotential, xpoint(k)));
    });
  }
  return report;
}

Report cmd_extend(const RunConfig& config) {
  const ModelInstance m = load_model(config);
  if (!m.prepotential) throw PreconditionError("model '" + m.name + "' has no prepotential to extend");
  std::optional<QuasihomogeneityData> q = m.quasihomogeneity;
  if (config.exponents) {
    QuasihomogeneityData manual;
    manual.exponents = Eigen::Map<const Eigen::VectorXd>(config.exponents->data(), static_cast<Eigen::Index>(config.exponents->size()));
    manual.d_F = config.d_F ? *config.d_F : (q ? q->d_F : 0.0);
    manual.allows_quadratic_remainder = q ? q->allows_quadratic_remainder : false;
    q = manual;
  }
  const ExtensionResult ext = extend_prepotential(*m.prepotential, m.eta, q);
  const int n = m.flat.data.n();

  Report report;
  report.command = "extend";
  report.model = m.name;
  report.parameters = m.parameters;
  report.seed = config.seed;
  const auto us = sample_u(config, n + 2);
  // Middle coordinates are flat coordinates of the base model.
  for (const auto& s : us) {
    Eigen::VectorXd p = s;
    p.segment(1, n) = evaluate(m.flat, s.segment(1, n)).x.real();
    report.sample_points.push_back(p);
  }
  if (ext.exponents) report.extra["exponents"] = vector_json(ext.exponents->exponents);
  if (ext.pair_sum) report.extra["pair_sum"] = *ext.pair_sum;

  const auto& pts = report.sample_points;
  const int N = static_cast<int>(pts.size());
  std::vector<ExtensionReport> diag(N);
  for (int k = 0; k < N; ++k) diag[k] = verify_extension(ext, pts[k]);
  CheckRunner checks(report.checks);
  const double tol = config.tolerance("residual");
  checks.run("extension.associativity", tol, N, [&](int k) { return diag[k].associativity; });
  checks.run("extension.unity", tol, N, [&](int k) { return diag[k].unity; });
  checks.run("extension.nilpotent_square", tol, N, [&](int k) { return diag[k].nilpotent_square; });
  checks.run("extension.metric_coefficient", tol, N, [&](int k) { return diag[k].metric_coefficient; });
  if (ext.exponents) {
    checks.run("extension.euler", tol, N, [&](int k) { return euler_check(ext.F_tilde, *ext.exponents, pts[k]); });
  }
  return report;
}

std::string CorrelatorTable::to_csv() const {
  std::ostringstream os;
  for (int i = 0; i < dim; ++i) os << "x" << i + 1 << ",";
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b)
      for (int c = b; c < dim; ++c) os << "c" << a + 1 << b + 1 << c + 1 << ",";
  os << "status\n";
  for (const auto& row : rows) {
    for (Eigen::Index i = 0; i < row.x.size(); ++i) os << format_number(row.x[i]) << ",";
    for (double e : row.entries) os << format_number(e) << ",";
    std::string status = row.status;
    std::replace(status.begin(), status.end(), '"', '\'');
    os << '"' << status << "\"\n";
  }
  return os.str();
}

CorrelatorTable cmd_correlators(const RunConfig& config) {
  const ModelInstance m = load_model(config);
  const int n = m.flat.data.n();
  std::string source = config.source;
  if (source == "auto") source = m.prepotential ? "prepotential" : "pipeline";
  if (source == "prepotential" && !m.prepotential) throw PreconditionError("model '" + m.name + "' has no prepotential");

  CorrelatorTable table;
  table.dim = n;
  if (config.grid == 0) return table;
  std::vector<double> axis(config.grid);
  for (int k = 0; k < config.grid; ++k)
    axis[k] = config.grid == 1 ? config.x_min : config.x_min + (config.x_max - config.x_min) * k / (config.grid - 1);

  Eigen::VectorXd guess = Eigen::VectorXd::Zero(n);
  std::vector<int> idx(n, 0);
  const auto total = static_cast<long>(std::pow(config.grid, n));
  for (long r = 0; r < total; ++r) {
    long rem = r;
    CorrelatorRow row;
    row.x.resize(n);
    for (int i = n - 1; i >= 0; --i) {
      row.x[i] = axis[rem % config.grid];
      rem /= config.grid;
    }
    try {
      CorrelatorTensor c = [&] {
        if (source == "prepotential") return third_derivative_tensor(*m.prepotential, row.x);
        const Eigen::VectorXd u = invert_coordinates(m.flat, row.x, guess);
        guess = u;
        return correlators_from_metric(m.flat, u);
      }();
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
          for (int d = b; d < n; ++d) row.entries.push_back(c(a, b, d).real());
      row.status = "ok";
    } catch (const Error& e) {
      row.entries.assign(static_cast<std::size_t>(n * (n + 1) * (n + 2) / 6), std::numeric_limits<double>::quiet_NaN());
      row.status = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

json validation_json(const ValidationReport& report) {
  json j;
  j["passed"] = report.passed;
  j["arithmetic_genus"] = report.arithmetic_genus;
  j["pole_divisor_degree"] = report.pole_divisor_degree;
  j["expected_degree"] = report.expected_degree;
  j["violations"] = report.violations;
  return j;
}

namespace {

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frobenius structures from reducible rational spectral curves"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Options {
    std::string config_path;
    std::string model;
    std::vector<std::string> settings;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
  } opt;
  std::string curve_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "configuration file");
    sub->add_option("--model", opt.model, "model name or curve file");
    sub->add_option("--set", opt.settings, "override: section.key=value, or key=value for a model parameter");
    sub->add_option("--out", opt.out, "output path (default: stdout)");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--samples", opt.samples, "number of random samples");
  };
  CLI::App* verify = app.add_subcommand("verify", "run the residual suite for a model");
  CLI::App* correlators = app.add_subcommand("correlators", "tabulate correlators on a grid as CSV");
  CLI::App* extend = app.add_subcommand("extend", "verify the (n+2)-dimensional extension");
  CLI::App* curve = app.add_subcommand("curve-validate", "check the marked data of a curve file");
  for (CLI::App* sub : {verify, correlators, extend}) add_common(sub);
  curve->add_option("curve", curve_path, "curve file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (curve->parsed()) {
      const ValidationReport report = validate(load_curve(curve_path));
      out << validation_json(report).dump(2) << "\n";
      return report.passed ? 0 : 1;
    }

    RunConfig config;
    if (!opt.config_path.empty()) config = load_config(opt.config_path, config);
    if (!opt.model.empty()) config.model = opt.model;
    for (const auto& s : opt.settings) apply_setting(config, s);
    if (opt.seed) config.seed = *opt.seed;
    if (opt.samples) {
      if (*opt.samples < 0) throw ConfigError("--samples must be non-negative");
      config.samples = *opt.samples;
    }

    if (correlators->parsed()) {
      const CorrelatorTable table = cmd_correlators(config);
      write_output(opt.out.empty() ? config.samples_path : opt.out, table.to_csv(), out);
      return 0;
    }
    const Report report = verify->parsed() ? cmd_verify(config) : cmd_extend(config);
    write_output(opt.out.empty() ? config.report_path : opt.out, report.to_json().dump(2) + "\n", out);
    if (!report.passed()) {
      for (const auto& c : report.checks)
        if (!c.passed) err << "check failed: " << c.name << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace wdvv::cli
