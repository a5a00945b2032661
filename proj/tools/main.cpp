// symform: run, verify and sweep symmetry-constrained formation scenarios.
//
// Exit codes: 0 success, 2 config error, 3 numeric failure, 4 verification failure.

#include <cstdio>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symform/error.hpp"
#include "symform/runner.hpp"
#include "symform/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerify = 4;

struct Options {
  std::vector<std::string> scenarios;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  bool echo = false;
  int n_from = 3;
  int n_to = 12;
};

symform::Scenario load(const std::string& path, const Options& opt, bool many) {
  symform::Scenario s = symform::load_scenario(path);
  symform::ScenarioOverrides o;
  o.seed = opt.seed;
  o.dt = opt.dt;
  o.horizon = opt.horizon;
  // With several scenarios, --out is a parent directory.
  if (opt.out) o.output_dir = many ? std::filesystem::path(*opt.out) / s.name : std::filesystem::path(*opt.out);
  symform::apply_overrides(s, o);
  return s;
}

void print_checks(const std::string& title, const std::vector<symform::CheckResult>& checks) {
  std::cout << title << '\n';
  for (const auto& c : checks) {
    std::cout << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name << ": " << c.detail << '\n';
  }
}

int run_command(const Options& opt) {
  const bool many = opt.scenarios.size() > 1;
  std::vector<symform::Scenario> scenarios;
  for (const auto& path : opt.scenarios) scenarios.push_back(load(path, opt, many));
  if (opt.echo) {
    for (const auto& s : scenarios) std::cout << symform::to_json(s) << '\n';
  }
  // Scenarios are independent and write to separate directories.
  std::vector<std::future<symform::RunResult>> jobs;
  for (const auto& s : scenarios) {
    jobs.push_back(std::async(std::launch::async, [&s] { return symform::run(s); }));
  }
  for (auto& job : jobs) std::cout << symform::to_json(job.get().metrics) << '\n';
  return 0;
}

int verify_command(const Options& opt) {
  bool ok = true;
  for (const auto& path : opt.scenarios) {
    const auto s = load(path, opt, opt.scenarios.size() > 1);
    const auto checks = symform::verify(s);
    print_checks(s.name, checks);
    ok = ok && symform::all_passed(checks);
  }
  return ok ? 0 : kExitVerify;
}

int sweep_command(const Options& opt) {
  const auto checks = symform::sweep(opt.n_from, opt.n_to);
  print_checks("path trees of C_n, n = " + std::to_string(opt.n_from) + ".." + std::to_string(opt.n_to), checks);
  std::size_t passed = 0;
  for (const auto& c : checks) passed += c.passed ? 1 : 0;
  std::cout << passed << "/" << checks.size() << " rank checks passed\n";
  return symform::all_passed(checks) ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry-constrained formation control simulator"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--out", opt.out, "Output directory");
    cmd->add_option("--seed", opt.seed, "Seed for random initial configurations");
    cmd->add_option("--dt", opt.dt, "Fixed RK4 step");
    cmd->add_option("--horizon", opt.horizon, "Simulated time horizon");
  };

  auto* run = app.add_subcommand("run", "Simulate scenarios and write traces, plots and metrics");
  run->add_option("scenario", opt.scenarios, "Scenario JSON file(s)")->required()->check(CLI::ExistingFile);
  run->add_flag("--echo", opt.echo, "Print the resolved scenario before running");
  add_common(run);

  auto* verify = app.add_subcommand("verify", "Run the invariant checks for a scenario's Laplacian");
  verify->add_option("scenario", opt.scenarios, "Scenario JSON file(s)")->required()->check(CLI::ExistingFile);
  add_common(verify);

  auto* sweep = app.add_subcommand("sweep", "Check rank 2n-2 of path-tree Laplacians over a range of n");
  sweep->add_option("--n-from", opt.n_from, "First n")->check(CLI::Range(3, 1000));
  sweep->add_option("--n-to", opt.n_to, "Last n")->check(CLI::Range(3, 1000));
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_command(opt);
    if (*verify) return verify_command(opt);
    return sweep_command(opt);
  } catch (const symform::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const symform::InvalidArgument& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitConfig;
  } catch (const symform::NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
