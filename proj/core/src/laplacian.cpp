#include "symform/laplacian.hpp"

#include <cmath>
#include <string>

#include "symform/error.hpp"

namespace symform {

namespace {

void require_valid(const RotationGraph& g) {
  if (auto report = validate(g); !report) throw InvalidArgument(*report.violation);
}

void require_length(const Eigen::VectorXd& p, Eigen::Index expected) {
  if (p.size() != expected) {
    throw InvalidArgument("configuration has length " + std::to_string(p.size()) +
                          ", expected " + std::to_string(expected));
  }
}

}  // namespace

double Spectrum::lambda_plus_min() const {
  if (rank == 0) throw NumericFailure("Q has no positive eigenvalues");
  return eigenvalues(null_dimension());
}

SymmetryIncidence build_incidence(const RotationGraph& g) {
  require_valid(g);
  const int d = g.dimension;
  const auto m = static_cast<Eigen::Index>(g.edges.size());
  SymmetryIncidence e{Eigen::MatrixXd::Zero(d * g.n, d * m), g.n, d};
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& edge = g.edges[static_cast<std::size_t>(k)];
    e.matrix.block(d * (edge.u - 1), d * k, d, d).setIdentity();
    e.matrix.block(d * (edge.v - 1), d * k, d, d) = -edge.transfer.matrix();
  }
  return e;
}

SymmetryIncidence build_incidence(const InteractionGraph& g, const PointGroupAssignment& tau) {
  return build_incidence(with_rotations(g, tau));
}

SymmetryLaplacian build_laplacian(const RotationGraph& g) {
  require_valid(g);
  const int d = g.dimension;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d * g.n, d * g.n);
  for (const auto& edge : g.edges) {
    const Eigen::Index iu = d * (edge.u - 1);
    const Eigen::Index iv = d * (edge.v - 1);
    q.block(iu, iu, d, d).diagonal().array() += 1.0;
    q.block(iv, iv, d, d).diagonal().array() += 1.0;
    q.block(iu, iv, d, d) -= edge.transfer.matrix().transpose();
    q.block(iv, iu, d, d) -= edge.transfer.matrix();
  }
  return {std::move(q), g};
}

SymmetryLaplacian build_laplacian(const InteractionGraph& g, const PointGroupAssignment& tau) {
  return build_laplacian(with_rotations(g, tau));
}

namespace {

NullBasis stack_chain(RotationChain chain, int d) {
  const int n = chain.size();
  Eigen::MatrixXd v0(d * n, d);
  for (int i = 0; i < n; ++i) v0.block(d * i, 0, d, d) = chain.blocks[static_cast<std::size_t>(i)].matrix();
  Eigen::MatrixXd normalized = v0 / std::sqrt(static_cast<double>(n));
  return {std::move(v0), std::move(normalized), std::move(chain)};
}

}  // namespace

NullBasis null_basis(const RotationGraph& g) { return stack_chain(rotation_chain(g), g.dimension); }

NullBasis null_basis(const InteractionGraph& g, const PointGroupAssignment& tau) {
  return stack_chain(rotation_chain(g, tau), g.dimension);
}

Eigen::VectorXd steady_state(const Eigen::VectorXd& p0, const NullBasis& basis) {
  require_length(p0, basis.v0.rows());
  return basis.v0 * (basis.v0.transpose() * p0) / static_cast<double>(basis.n());
}

Eigen::VectorXd steady_state_per_agent(const Eigen::VectorXd& p0, const NullBasis& basis) {
  require_length(p0, basis.v0.rows());
  const int n = basis.n();
  const auto d = basis.v0.cols();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < n; ++k) {
    sum += basis.chain.blocks[static_cast<std::size_t>(k)].matrix().transpose() * p0.segment(d * k, d);
  }
  Eigen::VectorXd out(p0.size());
  for (int i = 0; i < n; ++i) {
    out.segment(d * i, d) = basis.chain.blocks[static_cast<std::size_t>(i)].matrix() * sum / static_cast<double>(n);
  }
  return out;
}

Spectrum spectrum(const Eigen::MatrixXd& q, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("rank tolerance must be positive");
  if (q.rows() != q.cols() || q.rows() == 0) throw InvalidArgument("Q must be square and nonempty");
  if (!q.allFinite()) throw NumericFailure("Q has non-finite entries");
  const double asymmetry = (q - q.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-10) {
    throw NumericFailure("Q is not symmetric (residual " + std::to_string(asymmetry) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q);
  if (solver.info() != Eigen::Success) throw NumericFailure("symmetric eigen-solver failed");

  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  s.tolerance = tol * std::max(1.0, s.eigenvalues(s.eigenvalues.size() - 1));
  s.rank = static_cast<int>((s.eigenvalues.array() >= s.tolerance).count());
  return s;
}

Spectrum spectrum(const SymmetryLaplacian& q, double tol) { return spectrum(q.matrix, tol); }

Eigen::VectorXd closed_form_solution(const Spectrum& s, const Eigen::VectorXd& p0, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and >= 0");
  require_length(p0, s.size());
  if (t == 0.0) return p0;
  Eigen::VectorXd decay(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    decay(k) = s.eigenvalues(k) < s.tolerance ? 1.0 : std::exp(-s.eigenvalues(k) * t);
  }
  return s.eigenvectors * (decay.asDiagonal() * (s.eigenvectors.transpose() * p0));
}

Eigen::VectorXd closed_form_solution(const SymmetryLaplacian& q, const Eigen::VectorXd& p0, double t) {
  return closed_form_solution(spectrum(q), p0, t);
}

}  // namespace symform
