#include "symform/maneuver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "symform/error.hpp"

namespace symform {

namespace {

constexpr double kBoundaryTol = 1e-12;

Eigen::Index omega_size(int dimension) { return dimension == 2 ? 1 : 3; }

Rotation rotation_for(const Eigen::VectorXd& omega, double tau, int dimension) {
  if (dimension == 2) return Rotation::planar(omega(0) * tau);
  const double rate = omega.norm();
  if (rate == 0.0 || tau == 0.0) return Rotation::identity(3);
  return Rotation::spatial(omega / rate, rate * tau);
}

void require_length(const Eigen::VectorXd& p, Eigen::Index expected) {
  if (p.size() != expected) {
    throw InvalidArgument("configuration has length " + std::to_string(p.size()) +
                          ", expected " + std::to_string(expected));
  }
}

void require_reference(const ReferenceState& ref, Eigen::Index len) {
  const auto d = ref.r.size();
  if (d != ref.rotation.dimension()) throw InvalidArgument("reference r and R differ in dimension");
  if (d == 0 || len % d != 0) throw InvalidArgument("configuration length does not match reference dimension");
  if (!(ref.scale > 0.0)) throw InvalidArgument("reference scale must be positive");
}

}  // namespace

ReferenceInputs::ReferenceInputs(int dimension, std::vector<InputSegment> segments)
    : dimension_(dimension), segments_(std::move(segments)) {
  if (dimension != 2 && dimension != 3) throw InvalidArgument("dimension must be 2 or 3");
  if (segments_.empty()) throw InvalidArgument("reference inputs need at least one segment");
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& s = segments_[k];
    const std::string where = "segment " + std::to_string(k) + ": ";
    if (!std::isfinite(s.t_start) || !std::isfinite(s.t_end) || !(s.t_end > s.t_start)) {
      throw InvalidArgument(where + "needs finite t_start < t_end");
    }
    if (s.velocity.size() != dimension) throw InvalidArgument(where + "velocity has wrong dimension");
    if (s.omega.size() != omega_size(dimension)) throw InvalidArgument(where + "omega has wrong dimension");
    if (!s.velocity.allFinite() || !s.omega.allFinite() || !std::isfinite(s.alpha)) {
      throw InvalidArgument(where + "inputs must be finite");
    }
  }
  if (std::abs(segments_.front().t_start) > kBoundaryTol) {
    throw InvalidArgument("gap in reference inputs: first segment starts at " +
                          std::to_string(segments_.front().t_start) + ", not 0");
  }
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    if (std::abs(segments_[k].t_start - segments_[k - 1].t_end) > kBoundaryTol) {
      throw InvalidArgument("gap or overlap in reference inputs between segments " + std::to_string(k - 1) +
                            " and " + std::to_string(k));
    }
  }
}

ReferenceInputs ReferenceInputs::zero(int dimension, double t_end) {
  return ReferenceInputs(dimension, {{0.0, t_end, Eigen::VectorXd::Zero(dimension),
                                      Eigen::VectorXd::Zero(omega_size(dimension)), 0.0}});
}

bool ReferenceInputs::all_zero() const {
  return std::all_of(segments_.begin(), segments_.end(), [](const InputSegment& s) {
    return s.velocity.isZero(0.0) && s.omega.isZero(0.0) && s.alpha == 0.0;
  });
}

void ReferenceInputs::require_coverage(double horizon) const {
  if (end_time() + kBoundaryTol < horizon) {
    throw InvalidArgument("gap in reference inputs: they end at " + std::to_string(end_time()) +
                          " but the horizon is " + std::to_string(horizon));
  }
}

std::size_t ReferenceInputs::segment_index(double t) const {
  const auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double value, const InputSegment& s) { return value < s.t_end; });
  if (it == segments_.end()) return segments_.size() - 1;
  return static_cast<std::size_t>(it - segments_.begin());
}

InputSample ReferenceInputs::sample_segment(std::size_t index) const {
  const auto& s = segments_.at(index);
  return {s.velocity, angular_velocity_matrix(s.omega), s.alpha};
}

InputSample ReferenceInputs::sample(double t) const { return sample_segment(segment_index(t)); }

Eigen::MatrixXd angular_velocity_matrix(const Eigen::VectorXd& omega) {
  if (omega.size() == 1) {
    Eigen::MatrixXd m(2, 2);
    m << 0.0, -omega(0), omega(0), 0.0;
    return m;
  }
  if (omega.size() == 3) {
    Eigen::MatrixXd m(3, 3);
    m << 0.0, -omega(2), omega(1), omega(2), 0.0, -omega(0), -omega(1), omega(0), 0.0;
    return m;
  }
  throw InvalidArgument("angular velocity must have 1 or 3 components");
}

std::vector<InputSegment> segments_from_waypoints(std::span<const Waypoint> waypoints, double speed,
                                                  double t_start, double initial_heading) {
  if (waypoints.size() < 2) throw InvalidArgument("need at least two waypoints");
  if (!(speed > 0.0)) throw InvalidArgument("waypoint speed must be positive");
  std::vector<InputSegment> out;
  double t = t_start;
  double heading = initial_heading;
  for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) {
    const auto& a = waypoints[k];
    const auto& b = waypoints[k + 1];
    if (!(a.scale > 0.0) || !(b.scale > 0.0)) throw InvalidArgument("waypoint scale must be positive");
    const Eigen::Vector2d leg = b.position - a.position;
    const double length = leg.norm();
    if (length < 1e-12) throw InvalidArgument("consecutive waypoints coincide");
    const double duration = length / speed;
    const double next_heading = std::atan2(leg.y(), leg.x());
    const double turn = std::remainder(next_heading - heading, 2.0 * std::numbers::pi);

    InputSegment seg;
    seg.t_start = t;
    seg.t_end = t + duration;
    seg.velocity = leg / duration;
    seg.omega = Eigen::VectorXd::Constant(1, turn / duration);
    seg.alpha = std::log(b.scale / a.scale) / duration;
    out.push_back(std::move(seg));

    t += duration;
    heading = next_heading;
  }
  return out;
}

ReferenceState ReferenceState::identity(int dimension) {
  return {Eigen::VectorXd::Zero(dimension), Rotation::identity(dimension), 1.0, 0.0};
}

ReferenceTrajectory::ReferenceTrajectory(ReferenceInputs inputs, ReferenceState initial)
    : inputs_(std::move(inputs)) {
  const int d = inputs_.dimension();
  if (initial.r.size() != d || initial.rotation.dimension() != d) {
    throw InvalidArgument("initial reference state has wrong dimension");
  }
  if (!(initial.scale > 0.0) || !std::isfinite(initial.scale)) {
    throw InvalidArgument("initial reference scale must be positive");
  }
  initial.t = 0.0;
  starts_.reserve(inputs_.segments().size());
  starts_.push_back(std::move(initial));
  for (std::size_t k = 0; k + 1 < inputs_.segments().size(); ++k) {
    starts_.push_back(at(inputs_.segments()[k].t_end, k));
  }
}

ReferenceState ReferenceTrajectory::at(double t) const { return at(t, inputs_.segment_index(t)); }

ReferenceState ReferenceTrajectory::at(double t, std::size_t index) const {
  const auto& seg = inputs_.segments().at(index);
  const auto& start = starts_.at(index);
  const double tau = t - seg.t_start;
  ReferenceState out{start.r + tau * seg.velocity,
                     rotation_for(seg.omega, tau, inputs_.dimension()) * start.rotation,
                     start.scale * std::exp(seg.alpha * tau), t};
  if (!(out.scale > 0.0) || !std::isfinite(out.scale)) {
    throw NumericFailure("reference scale left (0, inf) at t = " + std::to_string(t));
  }
  return out;
}

std::vector<ReferenceState> propagate_reference(const ReferenceInputs& inputs, const ReferenceState& initial,
                                                double dt, double horizon) {
  const std::size_t steps = step_count(dt, horizon);
  inputs.require_coverage(static_cast<double>(steps) * dt);
  const ReferenceTrajectory trajectory(inputs, initial);
  std::vector<ReferenceState> out;
  out.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) out.push_back(trajectory.at(static_cast<double>(k) * dt));
  return out;
}

Eigen::VectorXd shifted(const Eigen::VectorXd& p, const ReferenceState& ref) {
  require_reference(ref, p.size());
  const auto d = ref.r.size();
  Eigen::VectorXd c = p;
  for (Eigen::Index i = 0; i < p.size(); i += d) c.segment(i, d) -= ref.r;
  return c;
}

Eigen::VectorXd maneuver_control(const Eigen::VectorXd& p, const ReferenceState& ref, const InputSample& in,
                                 const SymmetryLaplacian& q) {
  require_length(p, q.size());
  const Eigen::VectorXd c = shifted(p, ref);
  const auto d = ref.r.size();
  if (in.velocity.size() != d || in.omega_matrix.rows() != d) {
    throw InvalidArgument("reference inputs have wrong dimension");
  }
  Eigen::VectorXd u = -(q.matrix * c);
  for (Eigen::Index i = 0; i < c.size(); i += d) {
    u.segment(i, d) += in.velocity + in.omega_matrix * c.segment(i, d) + in.alpha * c.segment(i, d);
  }
  return u;
}

Eigen::VectorXd moving_frame(const Eigen::VectorXd& p, const ReferenceState& ref) {
  Eigen::VectorXd c = shifted(p, ref);
  const auto d = ref.r.size();
  const Eigen::MatrixXd rt = ref.rotation.matrix().transpose() / ref.scale;
  for (Eigen::Index i = 0; i < c.size(); i += d) c.segment(i, d) = rt * c.segment(i, d);
  return c;
}

Eigen::VectorXd from_moving_frame(const Eigen::VectorXd& zeta, const ReferenceState& ref) {
  require_reference(ref, zeta.size());
  const auto d = ref.r.size();
  Eigen::VectorXd p(zeta.size());
  for (Eigen::Index i = 0; i < zeta.size(); i += d) {
    p.segment(i, d) = ref.r + ref.scale * (ref.rotation.matrix() * zeta.segment(i, d));
  }
  return p;
}

Eigen::VectorXd moving_frame_rate(const Eigen::VectorXd& p, const ReferenceState& ref, const InputSample& in,
                                  const SymmetryLaplacian& q) {
  const Eigen::VectorXd u = maneuver_control(p, ref, in, q);
  const Eigen::VectorXd c = shifted(p, ref);
  const auto d = ref.r.size();
  const Eigen::MatrixXd rt = ref.rotation.matrix().transpose();
  Eigen::VectorXd rate(p.size());
  // d/dt[(1/s)Rᵀc] = -α(1/s)Rᵀc + (1/s)Rᵀ(ċ - Ωc), with Ṙ = ΩR and ċ = u - v.
  for (Eigen::Index i = 0; i < p.size(); i += d) {
    const Eigen::VectorXd ci = c.segment(i, d);
    rate.segment(i, d) =
        (rt * (u.segment(i, d) - in.velocity - in.omega_matrix * ci - in.alpha * ci)) / ref.scale;
  }
  return rate;
}

Eigen::VectorXd shifted_errors(const Eigen::VectorXd& p, const ReferenceState& ref, const RotationGraph& g) {
  return edge_errors(shifted(p, ref), g);
}

ManeuverTrace simulate_maneuver(const SymmetryLaplacian& q, const Eigen::VectorXd& p0,
                                const ReferenceInputs& inputs, const ReferenceState& ref0, double dt,
                                double horizon) {
  require_length(p0, q.size());
  if (inputs.dimension() != q.dimension()) throw InvalidArgument("inputs and Laplacian differ in dimension");
  const std::size_t steps = step_count(dt, horizon);
  const double t_final = static_cast<double>(steps) * dt;
  inputs.require_coverage(t_final);
  const double lmax = spectrum(q).lambda_max();
  if (dt * lmax >= 2.0) {
    throw InvalidArgument("time step " + std::to_string(dt) + " is unstable for lambda_max " +
                          std::to_string(lmax) + "; use dt <= " + std::to_string(0.5 / lmax));
  }

  const ReferenceTrajectory trajectory(inputs, ref0);
  ManeuverTrace out;
  auto& trace = out.trace;
  trace.n = q.n();
  trace.dimension = q.dimension();
  for (const auto& e : q.graph.edges) trace.edges.push_back({e.u, e.v});
  trace.dt = dt;

  const auto record = [&](double t, const Eigen::VectorXd& p) {
    const std::size_t index = inputs.segment_index(t);
    ReferenceState ref = trajectory.at(t, index);
    record_sample(trace, t, p, q.graph);
    // record_sample measured p; the maneuvering errors live on c.
    const Eigen::VectorXd c = shifted(p, ref);
    Eigen::VectorXd errors = edge_errors(c, q.graph);
    trace.potential.back() = 0.5 * errors.squaredNorm();
    trace.total_error.back() = errors.norm();
    trace.edge_errors.back() = std::move(errors);
    const Eigen::VectorXd zeta = moving_frame(p, ref);
    const InputSample in = inputs.sample_segment(index);
    out.reduction_residual.push_back((moving_frame_rate(p, ref, in, q) + q.matrix * zeta).norm());
    out.zeta.push_back(zeta);
    out.reference.push_back(std::move(ref));
  };

  const auto piece = [&](std::size_t index, double t, const Eigen::VectorXd& p, double h) {
    const InputSample in = inputs.sample_segment(index);
    const VelocityField field = [&](double s, const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return maneuver_control(x, trajectory.at(s, index), in, q);
    };
    return rk4_step(field, t, p, h);
  };

  Eigen::VectorXd p = p0;
  record(0.0, p);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * dt;
    const double t1 = static_cast<double>(k + 1) * dt;
    double t = t0;
    std::size_t index = inputs.segment_index(t0);
    // Split at every segment boundary strictly inside (t0, t1).
    while (index + 1 < inputs.segments().size() && inputs.segments()[index].t_end < t1 - kBoundaryTol) {
      const double boundary = inputs.segments()[index].t_end;
      if (boundary > t + kBoundaryTol) {
        p = piece(index, t, p, boundary - t);
        t = boundary;
      }
      ++index;
    }
    p = t == t0 ? piece(index, t0, p, dt) : piece(index, t, p, t1 - t);
    if (!p.allFinite()) throw NumericFailure("maneuver integration diverged at step " + std::to_string(k + 1));
    record(t1, p);
  }
  return out;
}

}  // namespace symform
