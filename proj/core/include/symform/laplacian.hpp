#pragma once

#include <Eigen/Dense>

#include "symform/topology.hpp"

namespace symform {

/// Matrix-weighted incidence factor E (dn x d|E|). The block column of edge
/// (u, v) holds I_d at node u and -transfer at node v, so that
/// Eᵀp stacks the residuals p_u - transferᵀ·p_v.
struct SymmetryIncidence {
  Eigen::MatrixXd matrix;
  int n = 0;
  int dimension = 2;
};

/// Symmetry-constraining Laplacian Q = E·Eᵀ, assembled from its block
/// entries: d(u)·I on the diagonal, -transferᵀ at (u, v) and -transfer at
/// (v, u) for each edge (u, v).
struct SymmetryLaplacian {
  Eigen::MatrixXd matrix;
  RotationGraph graph;

  int n() const noexcept { return graph.n; }
  int dimension() const noexcept { return graph.dimension; }
  Eigen::Index size() const noexcept { return matrix.rows(); }
};

/// V₀ = [S_1; …; S_n] (dn x d) spanning Null(Q), and V̂₀ = V₀/√n.
struct NullBasis {
  Eigen::MatrixXd v0;
  Eigen::MatrixXd v0_normalized;
  RotationChain chain;

  int n() const noexcept { return chain.size(); }
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns matching eigenvalues
  double tolerance = 0.0;        // absolute threshold actually used
  int rank = 0;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
  int null_dimension() const noexcept { return static_cast<int>(eigenvalues.size()) - rank; }
  /// Smallest eigenvalue above the threshold: the slowest decay rate.
  double lambda_plus_min() const;
  double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

SymmetryIncidence build_incidence(const RotationGraph& g);
SymmetryIncidence build_incidence(const InteractionGraph& g, const PointGroupAssignment& tau);

SymmetryLaplacian build_laplacian(const RotationGraph& g);
SymmetryLaplacian build_laplacian(const InteractionGraph& g, const PointGroupAssignment& tau);

NullBasis null_basis(const RotationGraph& g);
NullBasis null_basis(const InteractionGraph& g, const PointGroupAssignment& tau);

/// Orthogonal projection (1/n)·V₀V₀ᵀ·p0 onto the symmetric subspace.
Eigen::VectorXd steady_state(const Eigen::VectorXd& p0, const NullBasis& basis);
/// The same limit assembled agent by agent: (1/n)·S_i·Σ_k S_kᵀ p_k(0).
Eigen::VectorXd steady_state_per_agent(const Eigen::VectorXd& p0, const NullBasis& basis);

inline constexpr double kDefaultRankTolerance = 1e-9;

/// Symmetric eigendecomposition of Q. Eigenvalues below
/// tol·max(1, λ_max) count as zero. Throws NumericFailure when Q is not
/// symmetric to 1e-10 or the solver does not converge.
Spectrum spectrum(const SymmetryLaplacian& q, double tol = kDefaultRankTolerance);
Spectrum spectrum(const Eigen::MatrixXd& q, double tol = kDefaultRankTolerance);

/// e^{-Qt}·p0 through the eigendecomposition; null modes are held fixed.
Eigen::VectorXd closed_form_solution(const Spectrum& s, const Eigen::VectorXd& p0, double t);
Eigen::VectorXd closed_form_solution(const SymmetryLaplacian& q, const Eigen::VectorXd& p0, double t);

}  // namespace symform
