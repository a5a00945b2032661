#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "symform/dynamics.hpp"

namespace symform {

/// Constant reference inputs on [t_start, t_end).
///   velocity: ṙ, length d
///   omega:    angular velocity; length 1 in the plane, a 3-vector in space
///   alpha:    logarithmic scale rate, ṡ = α·s
struct InputSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  Eigen::VectorXd velocity;
  Eigen::VectorXd omega;
  double alpha = 0.0;
};

/// Instantaneous (v, Ω, α) with Ω the skew-symmetric angular velocity matrix.
struct InputSample {
  Eigen::VectorXd velocity;
  Eigen::MatrixXd omega_matrix;
  double alpha = 0.0;
};

/// Piecewise-constant virtual trajectory inputs. Segments must be
/// contiguous and start at t = 0.
class ReferenceInputs {
 public:
  ReferenceInputs(int dimension, std::vector<InputSegment> segments);

  /// All-zero inputs on [0, t_end).
  static ReferenceInputs zero(int dimension, double t_end);

  int dimension() const noexcept { return dimension_; }
  const std::vector<InputSegment>& segments() const noexcept { return segments_; }
  double end_time() const noexcept { return segments_.back().t_end; }
  bool all_zero() const;

  /// Throws InvalidArgument when [0, horizon] is not covered.
  void require_coverage(double horizon) const;

  /// Index of the segment containing t; t past the end maps to the last one.
  std::size_t segment_index(double t) const;
  InputSample sample(double t) const;
  InputSample sample_segment(std::size_t index) const;

 private:
  int dimension_;
  std::vector<InputSegment> segments_;
};

/// Skew-symmetric Ω for a planar rate (1 entry) or spatial ω (3 entries).
Eigen::MatrixXd angular_velocity_matrix(const Eigen::VectorXd& omega);

struct Waypoint {
  Eigen::Vector2d position;
  double scale = 1.0;
};

/// Planar segments visiting `waypoints` at constant `speed`. On leg k the
/// reference turns from the previous leg heading (or `initial_heading`) to
/// the heading of leg k, and the scale moves geometrically between the
/// waypoint scales.
std::vector<InputSegment> segments_from_waypoints(std::span<const Waypoint> waypoints, double speed,
                                                  double t_start = 0.0, double initial_heading = 0.0);

/// Virtual state (r, R, s) at time t.
struct ReferenceState {
  Eigen::VectorXd r;
  Rotation rotation;
  double scale = 1.0;
  double t = 0.0;

  static ReferenceState identity(int dimension);
};

/// Closed-form evaluation of the reference for piecewise-constant inputs:
/// r is linear, R composes R(ω·τ)·R_k and s = s_k·e^{α·τ} inside segment k.
/// Rotations never leave SO(d) and the scale stays positive.
class ReferenceTrajectory {
 public:
  ReferenceTrajectory(ReferenceInputs inputs, ReferenceState initial);

  const ReferenceInputs& inputs() const noexcept { return inputs_; }
  ReferenceState at(double t) const;
  /// State at t extrapolated from segment `index`, used when an integration
  /// sub-step ends exactly on a segment boundary.
  ReferenceState at(double t, std::size_t index) const;

 private:
  ReferenceInputs inputs_;
  std::vector<ReferenceState> starts_;
};

/// Reference sampled on t_k = k·dt, k = 0..ceil(T/dt).
std::vector<ReferenceState> propagate_reference(const ReferenceInputs& inputs, const ReferenceState& initial,
                                                double dt, double horizon);

/// c = p - 1ₙ⊗r.
Eigen::VectorXd shifted(const Eigen::VectorXd& p, const ReferenceState& ref);

/// u = -Q·c + 1ₙ⊗v + (Iₙ⊗Ω)·c + α·c.
Eigen::VectorXd maneuver_control(const Eigen::VectorXd& p, const ReferenceState& ref, const InputSample& in,
                                 const SymmetryLaplacian& q);

/// ζ = (1/s)·(Iₙ⊗Rᵀ)·c.
Eigen::VectorXd moving_frame(const Eigen::VectorXd& p, const ReferenceState& ref);
/// p = 1ₙ⊗r + s·(Iₙ⊗R)·ζ.
Eigen::VectorXd from_moving_frame(const Eigen::VectorXd& zeta, const ReferenceState& ref);

/// ζ̇ under the maneuvering law, evaluated analytically.
Eigen::VectorXd moving_frame_rate(const Eigen::VectorXd& p, const ReferenceState& ref, const InputSample& in,
                                  const SymmetryLaplacian& q);

/// Per-edge ‖c_u - transferᵀ·c_v‖.
Eigen::VectorXd shifted_errors(const Eigen::VectorXd& p, const ReferenceState& ref, const RotationGraph& g);

struct ManeuverTrace {
  /// Agent states; errors and potential are measured on the shifted state c.
  SimulationTrace trace;
  std::vector<ReferenceState> reference;
  std::vector<Eigen::VectorXd> zeta;
  /// ‖ζ̇ + Qζ‖ per sample; zero in the plane, reported (not guaranteed) in space.
  std::vector<double> reduction_residual;
};

/// RK4 co-simulation of agents under the maneuvering law with the
/// reference evaluated at every sub-stage. Steps that straddle a segment
/// boundary are split there so each piece sees smooth inputs.
ManeuverTrace simulate_maneuver(const SymmetryLaplacian& q, const Eigen::VectorXd& p0,
                                const ReferenceInputs& inputs, const ReferenceState& ref0, double dt,
                                double horizon);

}  // namespace symform
