#include "symform/symgroup.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "symform/error.hpp"

namespace symform {

namespace {

void require_order(int n) {
  if (n < 3) {
    throw InvalidArgument("cyclic symmetry requires n >= 3, got " + std::to_string(n));
  }
}

int reduce(int shift, int order) {
  const int r = shift % order;
  return r < 0 ? r + order : r;
}

}  // namespace

Rotation Rotation::identity(int dimension) {
  if (dimension != 2 && dimension != 3) {
    throw InvalidArgument("rotation dimension must be 2 or 3, got " + std::to_string(dimension));
  }
  Rotation r(Eigen::MatrixXd::Identity(dimension, dimension));
  r.angle_ = 0.0;
  if (dimension == 3) r.axis_ = Eigen::Vector3d::UnitZ();
  return r;
}

Rotation Rotation::planar(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("rotation angle must be finite");
  Eigen::MatrixXd m(2, 2);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  m << c, -s, s, c;
  Rotation r(std::move(m));
  r.angle_ = theta;
  return r;
}

Rotation Rotation::spatial(const Eigen::Vector3d& axis, double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("rotation angle must be finite");
  if (!axis.allFinite()) throw InvalidArgument("rotation axis must be finite");
  const double norm = axis.norm();
  if (norm < 1e-12) throw InvalidArgument("rotation axis must be nonzero");
  const Eigen::Vector3d unit = axis / norm;
  Rotation r(Eigen::MatrixXd(Eigen::AngleAxisd(theta, unit).toRotationMatrix()));
  r.angle_ = theta;
  r.axis_ = unit;
  return r;
}

Rotation Rotation::from_matrix(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 3)) {
    throw InvalidArgument("rotation matrix must be 2x2 or 3x3");
  }
  if (!m.allFinite()) throw InvalidArgument("rotation matrix has non-finite entries");
  Rotation r(m);
  if (r.orthogonality_defect() > tol) {
    throw InvalidArgument("matrix is not a proper rotation");
  }
  if (m.rows() == 2) r.angle_ = std::atan2(m(1, 0), m(0, 0));
  return r;
}

Rotation Rotation::transpose() const {
  Rotation r(matrix_.transpose());
  if (angle_) r.angle_ = -*angle_;
  r.axis_ = axis_;
  return r;
}

Rotation Rotation::operator*(const Rotation& rhs) const {
  if (dimension() != rhs.dimension()) {
    throw InvalidArgument("cannot compose rotations of different dimension");
  }
  if (dimension() == 2 && angle_ && rhs.angle_) return planar(*angle_ + *rhs.angle_);
  return Rotation(matrix_ * rhs.matrix_);
}

Eigen::VectorXd Rotation::apply(const Eigen::VectorXd& x) const {
  if (x.size() != dimension()) {
    throw InvalidArgument("vector of size " + std::to_string(x.size()) +
                          " does not match rotation dimension " + std::to_string(dimension()));
  }
  return matrix_ * x;
}

double Rotation::orthogonality_defect() const {
  const auto d = dimension();
  const double ortho =
      (matrix_.transpose() * matrix_ - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(matrix_.determinant() - 1.0));
}

Rotation rotation2(double theta) { return Rotation::planar(theta); }

Eigen::VectorXd apply(const Rotation& g, const Eigen::VectorXd& x) { return g.apply(x); }

CyclicAutomorphism::CyclicAutomorphism(int order, int shift) : order_(order), shift_(0) {
  require_order(order);
  shift_ = reduce(shift, order);
}

int CyclicAutomorphism::operator()(int vertex) const {
  if (vertex < 1 || vertex > order_) {
    throw InvalidArgument("vertex " + std::to_string(vertex) + " outside 1.." +
                          std::to_string(order_));
  }
  return (vertex - 1 + shift_) % order_ + 1;
}

CyclicAutomorphism CyclicAutomorphism::compose(const CyclicAutomorphism& other) const {
  if (order_ != other.order_) throw InvalidArgument("automorphisms of different cycle graphs");
  return {order_, shift_ + other.shift_};
}

CyclicAutomorphism CyclicAutomorphism::inverse() const { return {order_, -shift_}; }

std::vector<CyclicAutomorphism> rotational_automorphisms(int n) {
  require_order(n);
  std::vector<CyclicAutomorphism> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.emplace_back(n, k);
  return out;
}

PointGroupAssignment::PointGroupAssignment(int order)
    : order_(order), base_angle_(0.0) {
  require_order(order);
  base_angle_ = 2.0 * std::numbers::pi / order;
}

Rotation PointGroupAssignment::operator()(const CyclicAutomorphism& g) const {
  if (g.order() != order_) {
    throw InvalidArgument("automorphism of C_" + std::to_string(g.order()) +
                          " given to assignment of order " + std::to_string(order_));
  }
  return of_shift(g.shift());
}

Rotation PointGroupAssignment::of_shift(int shift) const {
  const int k = reduce(shift, order_);
  if (k == 0) return Rotation::identity(2);
  return Rotation::planar(2.0 * std::numbers::pi * k / order_);
}

PointGroupAssignment assignment(int n) { return PointGroupAssignment(n); }

}  // namespace symform
