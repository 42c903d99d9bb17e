#ifndef WDVV_CLI_HPP
#define WDVV_CLI_HPP

// Command-line layer: run configuration, curve files, verification suites
// and their JSON/CSV output.

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wdvv/errors.hpp"
#include "wdvv/models.hpp"
#include "wdvv/spectral.hpp"

namespace wdvv::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Bad configuration: unreadable file, unknown key, malformed value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string model = "example2";  ///< registry name or path to a curve file
  std::map<std::string, double> parameters;
  std::optional<std::vector<double>> exponents;  ///< manual exponents for `extend`
  std::optional<double> d_F;
  std::uint64_t seed = 42;
  int samples = 20;
  double u_min = -1.0, u_max = 1.0;
  double x_min = 1.0, x_max = 2.0;
  int grid = 3;
  std::string source = "auto";  ///< correlator source: auto, prepotential, pipeline
  std::map<std::string, double> tolerances;
  std::string report_path;
  std::string samples_path;

  double tolerance(const std::string& name) const;
};

std::map<std::string, double> default_tolerances();

/// Reads a sectioned key-value file (sections model, parameters, sample,
/// tolerances, outputs) on top of `base`.
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Applies "section.key=value", or "key=value" for a model parameter.
void apply_setting(RunConfig& config, const std::string& assignment);

/// Curve file: [curve] flags, [nodes] node<k> = comp coord comp coord and one
/// [component<k>] section per component.
SpectralData load_curve(const std::string& path);

struct CheckRecord {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  int samples = 0;
  std::string note;
};

struct Report {
  std::string command;
  std::string model;
  std::map<std::string, double> parameters;
  std::uint64_t seed = 0;
  std::vector<Eigen::VectorXd> sample_points;
  std::vector<CheckRecord> checks;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  bool passed() const;
  nlohmann::ordered_json to_json() const;
};

ModelInstance load_model(const RunConfig& config);

/// Deterministic u samples in the configured box.
std::vector<Eigen::VectorXd> sample_u(const RunConfig& config, int dim);

Report cmd_verify(const RunConfig& config);
Report cmd_extend(const RunConfig& config);

struct CorrelatorRow {
  Eigen::VectorXd x;
  std::vector<double> entries;  ///< c_{ijk}, i <= j <= k, lexicographic
  std::string status;           ///< "ok" or the error message
};

struct CorrelatorTable {
  int dim = 0;
  std::vector<CorrelatorRow> rows;

  std::string to_csv() const;
};

CorrelatorTable cmd_correlators(const RunConfig& config);

nlohmann::ordered_json validation_json(const ValidationReport& report);

/// Entry point shared by the executable and the tests. Exit codes: 0 pass,
/// 1 check failure, 2 configuration or precondition error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wdvv::cli

#endif  // WDVV_CLI_HPP
