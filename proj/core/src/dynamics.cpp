#include "symform/dynamics.hpp"

#include <cmath>
#include <string>

#include "symform/error.hpp"

namespace symform {

namespace {

void require_length(const Eigen::VectorXd& p, Eigen::Index expected) {
  if (p.size() != expected) {
    throw InvalidArgument("configuration has length " + std::to_string(p.size()) +
                          ", expected " + std::to_string(expected));
  }
}

Eigen::Index stacked(const RotationGraph& g) { return static_cast<Eigen::Index>(g.dimension) * g.n; }

std::vector<Edge> links_of(const RotationGraph& g) {
  std::vector<Edge> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges) out.push_back({e.u, e.v});
  return out;
}

}  // namespace

Configuration::Configuration(int n, int dimension, Eigen::VectorXd values)
    : n_(n), dimension_(dimension), values_(std::move(values)) {
  if (n < 1) throw InvalidArgument("configuration needs at least one agent");
  if (dimension != 2 && dimension != 3) throw InvalidArgument("dimension must be 2 or 3");
  require_length(values_, static_cast<Eigen::Index>(n) * dimension);
  if (!values_.allFinite()) throw InvalidArgument("configuration has non-finite entries");
}

Configuration Configuration::zeros(int n, int dimension) {
  return {n, dimension, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * dimension)};
}

Configuration Configuration::random_box(int n, int dimension, double lo, double hi, std::uint64_t seed) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("random box needs finite lo < hi");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n) * dimension);
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = dist(rng);
  return {n, dimension, std::move(v)};
}

Configuration Configuration::from_positions(std::span<const Eigen::VectorXd> positions) {
  if (positions.empty()) throw InvalidArgument("no positions given");
  const auto d = positions.front().size();
  Eigen::VectorXd v(static_cast<Eigen::Index>(positions.size()) * d);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i].size() != d) throw InvalidArgument("positions have mixed dimensions");
    v.segment(static_cast<Eigen::Index>(i) * d, d) = positions[i];
  }
  return {static_cast<int>(positions.size()), static_cast<int>(d), std::move(v)};
}

Eigen::VectorXd Configuration::agent(int i) const {
  if (i < 1 || i > n_) throw InvalidArgument("agent index out of range");
  return values_.segment(static_cast<Eigen::Index>(i - 1) * dimension_, dimension_);
}

double potential(const Eigen::VectorXd& p, const RotationGraph& g) {
  return 0.5 * edge_errors(p, g).squaredNorm();
}

double quadratic_potential(const Eigen::VectorXd& p, const SymmetryLaplacian& q) {
  require_length(p, q.size());
  return 0.5 * p.dot(q.matrix * p);
}

Eigen::VectorXd control(const Eigen::VectorXd& p, const SymmetryLaplacian& q) {
  require_length(p, q.size());
  return -(q.matrix * p);
}

Eigen::VectorXd control_per_agent(const Eigen::VectorXd& p, const RotationGraph& g) {
  require_length(p, stacked(g));
  const int d = g.dimension;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(p.size());
  for (const auto& e : g.edges) {
    const auto pu = p.segment(d * (e.u - 1), d);
    const auto pv = p.segment(d * (e.v - 1), d);
    const auto& w = e.transfer.matrix();
    u.segment(d * (e.u - 1), d) += w.transpose() * pv - pu;
    u.segment(d * (e.v - 1), d) += w * pu - pv;
  }
  return u;
}

Eigen::VectorXd edge_errors(const Eigen::VectorXd& p, const RotationGraph& g) {
  require_length(p, stacked(g));
  const int d = g.dimension;
  Eigen::VectorXd out(static_cast<Eigen::Index>(g.edges.size()));
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    out(static_cast<Eigen::Index>(k)) =
        (p.segment(d * (e.u - 1), d) - e.transfer.matrix().transpose() * p.segment(d * (e.v - 1), d)).norm();
  }
  return out;
}

Eigen::VectorXd rk4_step(const VelocityField& f, double t, const Eigen::VectorXd& x, double dt) {
  const Eigen::VectorXd k1 = f(t, x);
  const Eigen::VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double default_time_step(const Spectrum& s) { return 0.5 / std::max(s.lambda_max(), 1e-12); }

double default_horizon(const Spectrum& s) { return 40.0 / s.lambda_plus_min(); }

std::size_t step_count(double dt, double horizon) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw InvalidArgument("horizon must be >= time step");
  return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

void record_sample(SimulationTrace& trace, double t, const Eigen::VectorXd& p, const RotationGraph& g) {
  Eigen::VectorXd errors = edge_errors(p, g);
  const double sq = errors.squaredNorm();
  trace.times.push_back(t);
  trace.states.push_back(p);
  trace.potential.push_back(0.5 * sq);
  trace.total_error.push_back(std::sqrt(sq));
  trace.edge_errors.push_back(std::move(errors));
}

SimulationTrace integrate(const SymmetryLaplacian& q, const Eigen::VectorXd& p0, double dt,
                          double horizon, Integrator method) {
  require_length(p0, q.size());
  if (method != Integrator::kRungeKutta4) throw InvalidArgument("unsupported integrator");
  const std::size_t steps = step_count(dt, horizon);
  const double lmax = spectrum(q).lambda_max();
  if (dt * lmax >= 2.0) {
    throw InvalidArgument("time step " + std::to_string(dt) + " is unstable for lambda_max " +
                          std::to_string(lmax) + "; use dt <= " + std::to_string(0.5 / lmax));
  }

  SimulationTrace trace;
  trace.n = q.n();
  trace.dimension = q.dimension();
  trace.edges = links_of(q.graph);
  trace.dt = dt;
  trace.times.reserve(steps + 1);
  trace.states.reserve(steps + 1);

  const VelocityField field = [&q](double, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return -(q.matrix * x);
  };
  Eigen::VectorXd p = p0;
  record_sample(trace, 0.0, p, q.graph);
  for (std::size_t k = 0; k < steps; ++k) {
    p = rk4_step(field, static_cast<double>(k) * dt, p, dt);
    if (!p.allFinite()) throw NumericFailure("integration diverged at step " + std::to_string(k + 1));
    record_sample(trace, static_cast<double>(k + 1) * dt, p, q.graph);
  }
  return trace;
}

double fit_rate(std::span<const double> times, std::span<const double> errors, double floor) {
  if (times.size() != errors.size()) throw InvalidArgument("times and errors differ in length");
  std::size_t usable = 0;
  while (usable < errors.size() && errors[usable] >= floor) ++usable;
  if (usable < 3) {
    throw InvalidArgument("error is zero or underflows immediately; no decay rate to fit");
  }
  const std::size_t first = usable - std::max<std::size_t>(3, usable / 3);
  const auto m = static_cast<double>(usable - first);
  double t_mean = 0.0, y_mean = 0.0;
  for (std::size_t k = first; k < usable; ++k) {
    t_mean += times[k];
    y_mean += std::log(errors[k]);
  }
  t_mean /= m;
  y_mean /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = first; k < usable; ++k) {
    const double dt = times[k] - t_mean;
    sxx += dt * dt;
    sxy += dt * (std::log(errors[k]) - y_mean);
  }
  if (sxx <= 0.0) throw NumericFailure("degenerate time window for rate fit");
  return sxy / sxx;
}

double fit_rate(const SimulationTrace& trace) { return fit_rate(trace.times, trace.total_error); }

}  // namespace symform
