#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "symform/laplacian.hpp"

namespace symform {

/// Stacked agent positions; agent i (1-based) occupies entries
/// d(i-1) .. di-1 of `values`.
class Configuration {
 public:
  Configuration(int n, int dimension, Eigen::VectorXd values);

  static Configuration zeros(int n, int dimension);
  /// Uniform in [lo, hi)^d per agent, drawn from a mt19937_64 seeded with `seed`.
  static Configuration random_box(int n, int dimension, double lo, double hi, std::uint64_t seed);
  static Configuration from_positions(std::span<const Eigen::VectorXd> positions);

  int n() const noexcept { return n_; }
  int dimension() const noexcept { return dimension_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::VectorXd agent(int i) const;

 private:
  int n_;
  int dimension_;
  Eigen::VectorXd values_;
};

/// ½·Σ_edges ‖p_u - transferᵀ·p_v‖².
double potential(const Eigen::VectorXd& p, const RotationGraph& g);
/// ½·pᵀQp; equals `potential` for the Laplacian of the same graph.
double quadratic_potential(const Eigen::VectorXd& p, const SymmetryLaplacian& q);

/// -Q·p, the negative gradient of the potential.
Eigen::VectorXd control(const Eigen::VectorXd& p, const SymmetryLaplacian& q);
/// Same velocity assembled per agent from neighbour terms
/// Σ_j (τ(γ_ji)·p_j - p_i).
Eigen::VectorXd control_per_agent(const Eigen::VectorXd& p, const RotationGraph& g);

/// ‖p_u - transferᵀ·p_v‖ for every edge, in edge-list order.
Eigen::VectorXd edge_errors(const Eigen::VectorXd& p, const RotationGraph& g);

using VelocityField = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x)>;

/// One classical fourth-order Runge-Kutta step.
Eigen::VectorXd rk4_step(const VelocityField& f, double t, const Eigen::VectorXd& x, double dt);

struct SimulationTrace {
  int n = 0;
  int dimension = 2;
  std::vector<Edge> edges;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> edge_errors;
  std::vector<double> potential;
  std::vector<double> total_error;  // ‖Eᵀp‖
  std::optional<std::uint64_t> seed;

  std::size_t size() const noexcept { return times.size(); }
  const Eigen::VectorXd& final_state() const { return states.back(); }
};

enum class Integrator { kRungeKutta4 };

/// 0.5/λ_max, the default fixed step.
double default_time_step(const Spectrum& s);
/// 40/λ₊_min, long enough for e^{-λt} of the slowest mode to reach ~4e-18.
double default_horizon(const Spectrum& s);
/// Steps of size dt covering [0, horizon]: ceil(horizon/dt).
std::size_t step_count(double dt, double horizon);

/// Integrates ṗ = -Qp on the uniform grid t_k = k·dt up to the first grid
/// point at or beyond `horizon`. Rejects dt >= 2/λ_max (RK4 is unstable
/// there) with the suggested step in the message.
SimulationTrace integrate(const SymmetryLaplacian& q, const Eigen::VectorXd& p0, double dt,
                          double horizon, Integrator method = Integrator::kRungeKutta4);

/// Appends one sample (errors, potential) of `p` measured against `g`.
void record_sample(SimulationTrace& trace, double t, const Eigen::VectorXd& p, const RotationGraph& g);

inline constexpr double kErrorUnderflow = 1e-14;

/// Least-squares slope of log(total error) against t over the final third
/// of the trace, stopping before the error first drops under 1e-14.
/// Approximately -λ₊_min.
double fit_rate(const SimulationTrace& trace);
/// `floor` replaces the 1e-14 cutoff when roundoff sits higher, e.g. for
/// states far from the origin.
double fit_rate(std::span<const double> times, std::span<const double> errors,
                double floor = kErrorUnderflow);

}  // namespace symform
