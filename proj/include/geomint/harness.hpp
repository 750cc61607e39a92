#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "geomint/composition.hpp"
#include "geomint/manifolds.hpp"

namespace geomint::harness {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalFailure = 3 };

struct ConfigError : RejectedInput {
  using RejectedInput::RejectedInput;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string system = "harmonic";
  std::string map = "midpoint";
  double theta = 0.5;
  double gamma = 0.5;
  double beta = 0.25;
  std::string scheme = "hamiltonian";
  std::string base = "stormer-verlet";  // inner method of composition schemes
  std::vector<double> gammas;           // substep weights for scheme = composition
  std::vector<double> h_list;
  double t_final = 1.0;
  std::vector<double> initial;  // empty: system default
  bool random_initial = false;
  std::uint64_t seed = 0;
  std::vector<double> inertia = {1.0, 2.0, 3.0};
  double order_floor = 1e-12;  // rows below this error are left out of the slope fit
  std::string output;
  NewtonConfig newton;
  bool timing = false;
};

// Grammar: one `key = value` per line, `#` starts a comment, lists are
// separated by commas or blanks. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::string& name = "experiment");
ExperimentConfig load_config(const std::filesystem::path& path);
void check_config(const ExperimentConfig& cfg);

struct ReportRow {
  double h = 0.0;
  double global_error = 0.0;
  double energy_drift_max = 0.0;
  double symplectic_defect = 0.0;
  double newton_iters_mean = 0.0;
  double wall_time = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  std::string reference;  // how the ground truth was obtained
  int exit_code = kOk;
  std::string message;  // failure description, empty on success
};

extern const char* const kCsvHeader;

ExperimentReport run_experiment(const ExperimentConfig& cfg);
void write_csv(std::ostream& os, const ExperimentReport& report);

// Runs and writes cfg.output when set; returns the exit code.
int run_and_write(const ExperimentConfig& cfg, ExperimentReport* out = nullptr);

// Least-squares slope of log(error) against log(h) over rows above the floor.
double observed_order(const std::vector<ReportRow>& rows, double floor = 1e-12);

struct SuiteEntry {
  std::string name;
  int exit_code = kOk;
  std::string message;
  double order = 0.0;  // NaN when fewer than two usable rows
  ExperimentReport report;
};

struct SuiteResult {
  std::vector<SuiteEntry> entries;
  int exit_code = kOk;
};

// Every *.cfg in dir (sorted by name), run concurrently. Overrides from the
// command line are applied through the callback before each run.
SuiteResult run_suite(const std::filesystem::path& dir,
                      const std::function<void(ExperimentConfig&)>& override = {});
void write_suite_csv(std::ostream& os, const SuiteResult& suite);
void write_order_table(std::ostream& os, const SuiteResult& suite);

struct NamedItem {
  std::string name;
  std::string description;
};

std::vector<NamedItem> map_names();
std::vector<NamedItem> system_names();
std::vector<NamedItem> scheme_names();

// Built-in maps by name; "tangent-lift:", "cotangent-lift:" and "adjoint:"
// prefixes wrap another name.
DiscretizationMap make_map(const std::string& name, int n, const ExperimentConfig& cfg = {}, double h = 0.1);

// Validity checks at `count` random points; sphere maps use the constrained
// variant and the Cayley chart samples |a| <= 0.5.
ValidityReport validate_named_map(const std::string& name, int n, int count = 100, std::uint64_t seed = 1,
                                  const ExperimentConfig& cfg = {});

}  // namespace geomint::harness
