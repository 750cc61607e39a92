#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "geomint/harness.hpp"

using namespace geomint;
using namespace geomint::harness;

namespace {

struct Overrides {
  std::vector<double> h;
  double t_final = 0.0;
  double tol = 0.0;
  bool timing = false;

  void apply(ExperimentConfig& cfg) const {
    if (!h.empty()) cfg.h_list = h;
    if (t_final > 0) cfg.t_final = t_final;
    if (tol > 0) cfg.newton.tol = tol;
    if (timing) cfg.timing = true;
  }
};

void print_items(const std::vector<NamedItem>& items) {
  for (const auto& it : items) std::printf("%-22s %s\n", it.name.c_str(), it.description.c_str());
}

int cmd_run(const std::string& path, const std::string& out, const Overrides& ov) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  ov.apply(cfg);
  if (!out.empty()) cfg.output = out;
  ExperimentReport rep;
  int code = run_and_write(cfg, &rep);
  if (code == kConfigError) {
    std::cerr << "error: " << rep.message << "\n";
    return code;
  }
  if (cfg.output.empty()) write_csv(std::cout, rep);
  std::cerr << cfg.name << ": reference " << rep.reference << "\n";
  if (code != kOk) std::cerr << "error: " << rep.message << "\n";
  return code;
}

int cmd_suite(const std::string& dir, const std::string& out, const Overrides& ov) {
  SuiteResult suite;
  try {
    suite = run_suite(dir, [&](ExperimentConfig& c) { ov.apply(c); });
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  std::string csv = out.empty() ? "suite.csv" : out;
  std::string orders = csv.substr(0, csv.rfind('.') == std::string::npos ? csv.size() : csv.rfind('.')) + ".orders.csv";
  std::ofstream f(csv), g(orders);
  if (!f || !g) {
    std::cerr << "error: cannot write " << csv << "\n";
    return kConfigError;
  }
  write_suite_csv(f, suite);
  write_order_table(g, suite);
  std::printf("%-28s %10s  %s\n", "config", "order", "status");
  for (const auto& e : suite.entries)
    std::printf("%-28s %10.4f  %s\n", e.name.c_str(), e.order,
                e.exit_code == kOk ? "ok" : ("exit " + std::to_string(e.exit_code) + ": " + e.message).c_str());
  std::printf("wrote %s and %s\n", csv.c_str(), orders.c_str());
  return suite.exit_code;
}

int cmd_validate(const std::string& name, int dim, int count, std::uint64_t seed, const ExperimentConfig& params) {
  ValidityReport r;
  try {
    r = validate_named_map(name, dim, count, seed, params);
  } catch (const RejectedInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  std::printf("identity_residual   %.3e\n", r.identity_residual);
  std::printf("derivative_residual %.3e\n", r.derivative_residual);
  if (r.inverse_checked) std::printf("inverse_residual    %.3e\n", r.inverse_residual);
  if (r.jacobian_checked) std::printf("jacobian_residual   %.3e\n", r.jacobian_residual);
  std::printf("%s\n", r.passed ? "PASS" : "FAIL");
  return r.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discretization-map integrators: experiments and checks"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Overrides ov;
  std::string out;
  auto add_overrides = [&](CLI::App* c) {
    c->add_option("--h", ov.h, "step sizes, descending")->delimiter(',');
    c->add_option("--t-final", ov.t_final, "final time");
    c->add_option("--tol", ov.tol, "Newton tolerance");
    c->add_flag("--timing", ov.timing, "record wall_time");
    c->add_option("--out", out, "output CSV path");
  };

  std::string path;
  auto* run = app.add_subcommand("run", "run one config");
  run->add_option("config", path, "config file")->required();
  add_overrides(run);

  std::string dir;
  auto* suite = app.add_subcommand("suite", "run every *.cfg in a directory");
  suite->add_option("dir", dir, "config directory")->required();
  add_overrides(suite);

  app.add_subcommand("list-maps", "list built-in maps");
  app.add_subcommand("list-systems", "list systems and schemes");

  std::string map_name;
  int dim = 2, count = 100;
  std::uint64_t seed = 1;
  ExperimentConfig params;
  auto* val = app.add_subcommand("validate-map", "check the defining properties of a map");
  val->add_option("name", map_name, "map name")->required();
  val->add_option("--dim", dim, "dimension of Q (flat maps)");
  val->add_option("--samples", count, "number of random points");
  val->add_option("--seed", seed, "sample seed");
  val->add_option("--theta", params.theta, "theta parameter");
  val->add_option("--gamma", params.gamma, "Newmark gamma");
  val->add_option("--beta", params.beta, "Newmark beta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (run->parsed()) return cmd_run(path, out, ov);
  if (suite->parsed()) return cmd_suite(dir, out, ov);
  if (app.got_subcommand("list-maps")) {
    print_items(map_names());
    return 0;
  }
  if (app.got_subcommand("list-systems")) {
    std::printf("systems:\n");
    print_items(system_names());
    std::printf("\nschemes:\n");
    print_items(scheme_names());
    return 0;
  }
  return cmd_validate(map_name, dim, count, seed, params);
}
