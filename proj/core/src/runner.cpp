#include "symform/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "symform/error.hpp"
#include "symform/trace_io.hpp"

namespace symform {

namespace {

using nlohmann::json;

NullBasis basis_for(const Scenario& s) {
  if (s.kind == FormationKind::kCube) return null_basis(s.constraint_graph());
  return null_basis(s.graph, assignment(s.n));
}

std::string sci(double v) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << v;
  return out.str();
}

CheckResult check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

RunResult run(const Scenario& s, bool write_files) {
  const auto started = std::chrono::steady_clock::now();
  const SymmetryLaplacian q = s.laplacian();
  const Spectrum spec = spectrum(q);
  const NullBasis basis = basis_for(s);
  const Eigen::VectorXd p0 = s.initial_configuration();

  RunResult result;
  auto& m = result.metrics;
  m.name = s.name;
  m.rank = spec.rank;
  m.null_dimension = spec.null_dimension();
  m.lambda_plus_min = spec.lambda_plus_min();
  m.lambda_max = spec.lambda_max();
  m.dt = s.dt;
  m.horizon = s.horizon;
  m.steps = step_count(s.dt, s.horizon);
  m.seed = s.seed;
  if (s.kind == FormationKind::kCycle) {
    m.cyclic_target = reproduces_cyclic_target(rotation_chain(s.graph, assignment(s.n)), s.n);
  }

  if (auto inputs = s.reference_inputs()) {
    m.maneuvering = true;
    ManeuverTrace mt = simulate_maneuver(q, p0, *inputs, s.reference->initial, s.dt, s.horizon);
    std::vector<double> zeta_error;
    zeta_error.reserve(mt.zeta.size());
    // ζ inherits roundoff of p - r, which grows with distance from the origin.
    double reach = 1.0, extent = 1.0;
    for (std::size_t k = 0; k < mt.zeta.size(); ++k) {
      zeta_error.push_back(edge_errors(mt.zeta[k], q.graph).norm());
      extent = std::max(extent, mt.trace.states[k].cwiseAbs().maxCoeff());
      reach = std::max(reach, mt.trace.states[k].cwiseAbs().maxCoeff() / mt.reference[k].scale);
    }
    try {
      // In space a rotated reference moves ζ off Null(Q), so fit on c there.
      m.fitted_rate = s.dimension == 2 ? fit_rate(mt.trace.times, zeta_error, kErrorUnderflow * reach)
                                       : fit_rate(mt.trace.times, mt.trace.total_error, kErrorUnderflow * extent);
    } catch (const InvalidArgument&) {
      m.fitted_rate.reset();
    }
    m.projection_residual = (mt.zeta.back() - steady_state(mt.zeta.front(), basis)).norm();
    m.max_reduction_residual = *std::max_element(mt.reduction_residual.begin(), mt.reduction_residual.end());
    m.final_scale = mt.reference.back().scale;
    result.trace = mt.trace;
    result.maneuver = std::move(mt);
  } else {
    result.trace = integrate(q, p0, s.dt, s.horizon);
    try {
      m.fitted_rate = fit_rate(result.trace);
    } catch (const InvalidArgument&) {
      m.fitted_rate.reset();
    }
    m.projection_residual = (result.trace.final_state() - steady_state(p0, basis)).norm();
  }

  const Eigen::VectorXd& last = result.trace.edge_errors.back();
  m.final_edge_errors.assign(last.data(), last.data() + last.size());
  m.max_final_edge_error = last.size() ? last.maxCoeff() : 0.0;

  if (write_files) {
    const auto& dir = s.output_dir;
    std::filesystem::create_directories(dir);
    write_trace_csv(dir / "trace.csv", result.trace);
    m.files.push_back((dir / "trace.csv").string());
    const std::vector<ReferenceState>* ref = nullptr;
    if (result.maneuver) {
      ref = &result.maneuver->reference;
      write_reference_csv(dir / "reference.csv", *ref);
      m.files.push_back((dir / "reference.csv").string());
    }
    write_paths_svg(dir / "paths.svg", result.trace, ref);
    write_errors_svg(dir / "errors.svg", result.trace);
    m.files.push_back((dir / "paths.svg").string());
    m.files.push_back((dir / "errors.svg").string());
    m.files.push_back((dir / "metrics.json").string());
  }
  m.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (write_files) {
    std::ofstream out(s.output_dir / "metrics.json");
    out << to_json(m) << '\n';
  }
  return result;
}

std::string to_json(const MetricsReport& m) {
  json j;
  j["name"] = m.name;
  j["rank"] = m.rank;
  j["null_dimension"] = m.null_dimension;
  j["lambda_plus_min"] = m.lambda_plus_min;
  j["lambda_max"] = m.lambda_max;
  j["dt"] = m.dt;
  j["horizon"] = m.horizon;
  j["steps"] = m.steps;
  j["seed"] = m.seed;
  j["maneuvering"] = m.maneuvering;
  j["final_edge_errors"] = m.final_edge_errors;
  j["max_final_edge_error"] = m.max_final_edge_error;
  j["projection_residual"] = m.projection_residual;
  j["fitted_rate"] = m.fitted_rate ? json(*m.fitted_rate) : json(nullptr);
  if (m.max_reduction_residual) j["max_reduction_residual"] = *m.max_reduction_residual;
  if (m.final_scale) j["final_scale"] = *m.final_scale;
  if (m.cyclic_target) j["cyclic_target"] = *m.cyclic_target;
  j["runtime_seconds"] = m.runtime_seconds;
  j["files"] = m.files;
  return j.dump(2);
}

std::vector<CheckResult> verify(const Scenario& s, const VerifyHooks& hooks) {
  std::vector<CheckResult> out;
  const RotationGraph g = s.constraint_graph();
  SymmetryLaplacian q = build_laplacian(g);
  if (hooks.mutate_q) hooks.mutate_q(q.matrix);
  const int d = s.dimension;
  const int n = s.n;

  const double asym = max_abs(q.matrix - q.matrix.transpose());
  out.push_back(check("symmetric", asym <= 1e-12, "max |Q - Qᵀ| = " + sci(asym)));

  // The raw eigenvalues are needed even when Q is broken.
  const Eigen::MatrixXd sym = 0.5 * (q.matrix + q.matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  const double tol = kDefaultRankTolerance * std::max(1.0, ev(ev.size() - 1));
  out.push_back(check("positive_semidefinite", ev(0) >= -1e-9, "min eigenvalue = " + sci(ev(0))));
  const int rank = static_cast<int>((ev.array() >= tol).count());
  const int null_dim = static_cast<int>(ev.size()) - static_cast<int>((ev.array().abs() >= tol).count());
  out.push_back(check("rank", rank == d * (n - 1),
                      "rank " + std::to_string(rank) + ", expected " + std::to_string(d * (n - 1))));
  out.push_back(check("null_dimension", null_dim == d,
                      "null dimension " + std::to_string(null_dim) + ", expected " + std::to_string(d)));

  const SymmetryIncidence e = build_incidence(g);
  const double factor = max_abs(q.matrix - e.matrix * e.matrix.transpose());
  out.push_back(check("incidence_factorization", factor <= 1e-12, "max |Q - EEᵀ| = " + sci(factor)));

  const NullBasis basis = basis_for(s);
  const double qv0 = max_abs(q.matrix * basis.v0);
  out.push_back(check("null_basis", qv0 <= 1e-10, "max |Q·V0| = " + sci(qv0)));
  const double gram = max_abs(basis.v0.transpose() * basis.v0 - n * Eigen::MatrixXd::Identity(d, d));
  out.push_back(check("null_basis_gram", gram <= 1e-10, "max |V0ᵀV0 - nI| = " + sci(gram)));

  // Central differences of the edge potential against Q·p.
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd p(q.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = unif(rng);
    const Eigen::VectorXd qp = q.matrix * p;
    const double h = 1e-5;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      Eigen::VectorXd a = p, b = p;
      a(k) += h;
      b(k) -= h;
      const double fd = (potential(a, g) - potential(b, g)) / (2 * h);
      worst = std::max(worst, std::abs(fd - qp(k)) / (1.0 + qp.cwiseAbs().maxCoeff()));
    }
  }
  out.push_back(check("gradient", worst <= 1e-6, "max relative FD mismatch = " + sci(worst)));

  if (ev(0) < -1e-9 || asym > 1e-10) {
    out.push_back(check("solver_agreement", false, "skipped: Q is not symmetric PSD"));
    out.push_back(check("projection_limit", false, "skipped: Q is not symmetric PSD"));
  } else {
    const Spectrum spec = spectrum(q);
    Eigen::VectorXd p0(q.size());
    for (Eigen::Index k = 0; k < p0.size(); ++k) p0(k) = unif(rng);
    const double dt = 0.01 / spec.lambda_max();
    const double t_end = 1.0;
    const SimulationTrace tr = integrate(q, p0, dt, t_end);
    double gap = 0.0;
    for (std::size_t k = 0; k < tr.size(); k += std::max<std::size_t>(1, tr.size() / 10)) {
      gap = std::max(gap, (tr.states[k] - closed_form_solution(spec, p0, tr.times[k])).norm());
    }
    gap = std::max(gap, (tr.final_state() - closed_form_solution(spec, p0, tr.times.back())).norm());
    out.push_back(check("solver_agreement", gap <= 1e-6, "max |RK4 - closed form| = " + sci(gap)));
    const double limit =
        (closed_form_solution(spec, p0, default_horizon(spec)) - steady_state(p0, basis)).norm();
    out.push_back(check("projection_limit", limit <= 1e-8, "|p(40/λ₊) - projection| = " + sci(limit)));
  }

  if (s.kind == FormationKind::kCube) {
    const CompositeLaplacian cube = build_cube(s.cube);
    try {
      const double diff = max_abs(cube.composed_form() - q.matrix);
      out.push_back(check("composed_form", diff <= 1e-12, "max |edge-sum - composed| = " + sci(diff)));
    } catch (const InvalidArgument& ex) {
      out.push_back(check("composed_form", true, std::string("not applicable: ") + ex.what()));
    }
  }
  return out;
}

std::vector<CheckResult> sweep(int n_from, int n_to) {
  if (n_from < 3 || n_to < n_from) throw InvalidArgument("sweep needs 3 <= n_from <= n_to");
  std::vector<CheckResult> out;
  for (int n = n_from; n <= n_to; ++n) {
    const SymmetryLaplacian q = build_laplacian(cycle_minus_edge(n, {n, 1}), assignment(n));
    const Spectrum spec = spectrum(q);
    const bool ok = spec.rank == 2 * n - 2 && spec.null_dimension() == 2 && spec.eigenvalues(0) >= -1e-9;
    out.push_back(check("n=" + std::to_string(n), ok,
                        "rank " + std::to_string(spec.rank) + " (expected " + std::to_string(2 * n - 2) +
                            "), null dim " + std::to_string(spec.null_dimension()) + ", lambda+min " +
                            sci(spec.lambda_plus_min())));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace symform
