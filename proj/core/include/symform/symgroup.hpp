#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace symform {

/// A proper rotation in R^2 or R^3 (an element of SO(d)), used as the
/// point-group image of a graph automorphism and as Laplacian edge weight.
///
/// Planar rotations keep their angle so that compositions stay exact in
/// angle arithmetic; spatial rotations keep axis and angle when they were
/// built from them.
class Rotation {
 public:
  /// Identity of the given dimension (2 or 3).
  static Rotation identity(int dimension);
  /// R(theta) = [[cos, -sin], [sin, cos]].
  static Rotation planar(double theta);
  /// Axis-angle rotation; `axis` is normalized, a zero axis is rejected.
  static Rotation spatial(const Eigen::Vector3d& axis, double theta);
  /// Wraps an arbitrary matrix after checking orthogonality and det = +1.
  static Rotation from_matrix(const Eigen::MatrixXd& m, double tol = 1e-9);

  int dimension() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  /// Rotation angle; always present for d = 2.
  std::optional<double> angle() const noexcept { return angle_; }
  /// Unit rotation axis; present for d = 3 rotations built from an axis.
  std::optional<Eigen::Vector3d> axis() const noexcept { return axis_; }

  Rotation transpose() const;
  Rotation inverse() const { return transpose(); }
  /// Matrix product `*this · rhs`.
  Rotation operator*(const Rotation& rhs) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  /// max(|RᵀR - I|, |det R - 1|), the distance from SO(d).
  double orthogonality_defect() const;

 private:
  explicit Rotation(Eigen::MatrixXd m) : matrix_(std::move(m)) {}

  Eigen::MatrixXd matrix_;
  std::optional<double> angle_;
  std::optional<Eigen::Vector3d> axis_;
};

Rotation rotation2(double theta);

/// Returns g·x; throws InvalidArgument on dimension mismatch.
Eigen::VectorXd apply(const Rotation& g, const Eigen::VectorXd& x);

/// Rotational automorphism of the cycle graph C_n: i -> ((i-1+shift) mod n)+1.
class CyclicAutomorphism {
 public:
  CyclicAutomorphism(int order, int shift);

  int order() const noexcept { return order_; }
  int shift() const noexcept { return shift_; }
  bool is_identity() const noexcept { return shift_ == 0; }

  /// Action on a 1-based vertex label.
  int operator()(int vertex) const;

  /// (this ∘ other)(i) = this(other(i)); shifts add mod n.
  CyclicAutomorphism compose(const CyclicAutomorphism& other) const;
  CyclicAutomorphism inverse() const;

  friend bool operator==(const CyclicAutomorphism&, const CyclicAutomorphism&) = default;

 private:
  int order_;
  int shift_;
};

/// Γ_r for C_n: the n shifts 0..n-1. Requires n >= 3.
std::vector<CyclicAutomorphism> rotational_automorphisms(int n);

/// The homomorphism τ from Γ_r to the planar point group C_n, mapping
/// shift k to the rotation by k·2π/n.
class PointGroupAssignment {
 public:
  explicit PointGroupAssignment(int order);

  int order() const noexcept { return order_; }
  double base_angle() const noexcept { return base_angle_; }

  /// τ(γ). The angle is formed from the reduced integer shift, so repeated
  /// composition never accumulates angular drift.
  Rotation operator()(const CyclicAutomorphism& g) const;
  Rotation of_shift(int shift) const;

 private:
  int order_;
  double base_angle_;
};

PointGroupAssignment assignment(int n);

}  // namespace symform
