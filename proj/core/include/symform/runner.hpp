#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symform/scenario.hpp"

namespace symform {

struct MetricsReport {
  std::string name;
  int rank = 0;
  int null_dimension = 0;
  double lambda_plus_min = 0.0;
  double lambda_max = 0.0;
  double dt = 0.0;
  double horizon = 0.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  bool maneuvering = false;
  std::vector<double> final_edge_errors;
  double max_final_edge_error = 0.0;
  /// ‖p(T) - (1/n)V₀V₀ᵀp(0)‖ for stationary runs; the same distance
  /// measured on ζ for maneuvering runs.
  double projection_residual = 0.0;
  /// Decay rate fitted on total error; planar maneuvers fit the ζ errors,
  /// spatial ones the shifted errors.
  std::optional<double> fitted_rate;
  /// Largest ‖ζ̇ + Qζ‖ seen during a maneuvering run.
  std::optional<double> max_reduction_residual;
  std::optional<double> final_scale;
  /// For cycle formations: whether the edge shifts produce a regular C_n pattern.
  std::optional<bool> cyclic_target;
  double runtime_seconds = 0.0;
  std::vector<std::string> files;
};

struct RunResult {
  MetricsReport metrics;
  SimulationTrace trace;
  std::optional<ManeuverTrace> maneuver;
};

/// Simulates the scenario (stationary, or maneuvering when a reference is
/// present) and, when `write_files` is set, writes trace.csv,
/// reference.csv, metrics.json, paths.svg and errors.svg under the output
/// directory.
RunResult run(const Scenario& s, bool write_files = true);

std::string to_json(const MetricsReport& m);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Test hook: lets callers tamper with Q before the checks run.
struct VerifyHooks {
  std::function<void(Eigen::MatrixXd&)> mutate_q;
};

/// Structural and numerical checks on the scenario's Laplacian: symmetry,
/// PSD, rank, factorization, null basis, gradient, solver agreement and
/// projection limit (plus composed-form agreement for the cube).
std::vector<CheckResult> verify(const Scenario& s, const VerifyHooks& hooks = {});

/// Rank/PSD/null-dimension checks for path trees of C_n, n in [from, to].
std::vector<CheckResult> sweep(int n_from, int n_to);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace symform
