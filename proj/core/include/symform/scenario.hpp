#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "symform/maneuver.hpp"
#include "symform/spatial3d.hpp"

namespace symform {

enum class FormationKind { kCycle, kCube };

struct InitialSpec {
  /// Explicit agent positions; when absent agents are drawn uniformly from
  /// [box_lo, box_hi)^d with the scenario seed.
  std::optional<std::vector<Eigen::VectorXd>> positions;
  double box_lo = -5.0;
  double box_hi = 5.0;
};

struct ReferenceSpec {
  ReferenceState initial;
  std::vector<InputSegment> segments;  // waypoints already expanded
  bool pad_to_horizon = true;
};

/// A fully resolved scenario: every default filled in, dt and horizon
/// derived from the Laplacian when the file leaves them out.
struct Scenario {
  std::string name = "scenario";
  FormationKind kind = FormationKind::kCycle;
  int dimension = 2;
  int n = 0;
  InteractionGraph graph;  // cycle formations
  CubeSpec cube = CubeSpec::standard();
  std::uint64_t seed = 1;
  InitialSpec initial;
  std::optional<ReferenceSpec> reference;
  double dt = 0.0;
  double horizon = 0.0;
  bool dt_defaulted = true;
  bool horizon_defaulted = true;
  std::filesystem::path output_dir;

  /// Rotation-weighted constraint graph for either formation kind.
  RotationGraph constraint_graph() const;
  SymmetryLaplacian laplacian() const;
  Eigen::VectorXd initial_configuration() const;
  /// Reference inputs covering [0, horizon] (padded with zero inputs when
  /// `pad_to_horizon` is set).
  std::optional<ReferenceInputs> reference_inputs() const;
};

/// Command-line overrides applied after loading.
struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::filesystem::path> output_dir;
};

/// Parses and validates scenario JSON. Syntax errors carry "line:col",
/// schema errors the offending field path. `default_name` is used when the
/// file has no "name".
Scenario parse_scenario(const std::string& text, const std::string& default_name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

void apply_overrides(Scenario& s, const ScenarioOverrides& o);

/// Resolved scenario as JSON text (defaults echoed).
std::string to_json(const Scenario& s);

}  // namespace symform
