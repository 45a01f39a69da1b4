#include "curv4/lambda2.hpp"

#include <cmath>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// (i, j) with i < j for each basis slot.
constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}};

}  // namespace

BasisSlot basis_slot(int i, int j) {
  for (int s = 0; s < 6; ++s) {
    if (kPairs[s][0] == i && kPairs[s][1] == j) return {s, +1};
    if (kPairs[s][0] == j && kPairs[s][1] == i) return {s, -1};
  }
  return {0, 0};
}

std::pair<int, int> basis_pair(int slot) { return {kPairs[slot][0], kPairs[slot][1]}; }

TwoFormPoint TwoFormPoint::from_matrix(const Mat4& a) {
  Vec6 c;
  for (int s = 0; s < 6; ++s) {
    const int i = kPairs[s][0], j = kPairs[s][1];
    c(s) = 0.5 * (a(i, j) - a(j, i));
  }
  return TwoFormPoint(c);
}

TwoFormPoint TwoFormPoint::basis(int i, int j) {
  const BasisSlot slot = basis_slot(i, j);
  Vec6 c = Vec6::Zero();
  c(slot.index) = slot.sign;
  return TwoFormPoint(c);
}

TwoFormPoint TwoFormPoint::wedge_of(const Vec4& u, const Vec4& v) {
  Vec6 c;
  for (int s = 0; s < 6; ++s) {
    const int i = kPairs[s][0], j = kPairs[s][1];
    c(s) = u(i) * v(j) - u(j) * v(i);
  }
  return TwoFormPoint(c);
}

TwoFormPoint TwoFormPoint::from_duality(const Vec3& plus, const Vec3& minus) {
  Vec6 c;
  c.head<3>() = kInvSqrt2 * (plus + minus);
  c.tail<3>() = kInvSqrt2 * (plus - minus);
  return TwoFormPoint(c);
}

double TwoFormPoint::operator()(int i, int j) const {
  if (i == j) return 0.0;
  const BasisSlot slot = basis_slot(i, j);
  return slot.sign * c_(slot.index);
}

Mat4 TwoFormPoint::matrix() const {
  Mat4 a = Mat4::Zero();
  for (int s = 0; s < 6; ++s) {
    const int i = kPairs[s][0], j = kPairs[s][1];
    a(i, j) = c_(s);
    a(j, i) = -c_(s);
  }
  return a;
}

Vec3 TwoFormPoint::self_dual_coordinates() const {
  return kInvSqrt2 * (c_.head<3>() + c_.tail<3>());
}

Vec3 TwoFormPoint::anti_self_dual_coordinates() const {
  return kInvSqrt2 * (c_.head<3>() - c_.tail<3>());
}

TwoFormPoint TwoFormPoint::transformed(const Mat4& q) const {
  return from_matrix(q.transpose() * matrix() * q);
}

double wedge(const TwoFormPoint& a, const TwoFormPoint& b) {
  const Vec6& x = a.coefficients();
  const Vec6& y = b.coefficients();
  return x(0) * y(3) + x(3) * y(0) + x(1) * y(4) + x(4) * y(1) + x(2) * y(5) + x(5) * y(2);
}

TwoFormPoint hodge_star(const TwoFormPoint& a) {
  const Vec6& x = a.coefficients();
  Vec6 y;
  y << x(3), x(4), x(5), x(0), x(1), x(2);
  return TwoFormPoint(y);
}

DualitySplit sd_asd_split(const TwoFormPoint& a) {
  const TwoFormPoint s = hodge_star(a);
  return {0.5 * (a + s), 0.5 * (a - s)};
}

std::pair<Vec4, Vec4> decompose_simple(const TwoFormPoint& a, double tolerance) {
  const double n2 = a.squared_norm();
  if (!(n2 > 0.0)) throw ZeroForm("cannot factor the zero 2-form");
  const double w = wedge(a, a);
  if (std::fabs(w) > tolerance * n2) {
    throw NotDecomposable("2-form is not decomposable (|a^a|/|a|^2 = " +
                          std::to_string(std::fabs(w) / n2) + ")");
  }
  const double c = std::sqrt(n2);
  const Mat4 A = a.matrix();
  // For A = c(f1 f2ᵀ − f2 f1ᵀ), AᵀA = c²(f1 f1ᵀ + f2 f2ᵀ): the plane is the
  // top-two eigenspace.
  Eigen::SelfAdjointEigenSolver<Mat4> es(A.transpose() * A);
  const Eigen::Matrix<double, 4, 2> basis = es.eigenvectors().rightCols<2>();
  const Mat4 proj = basis * basis.transpose();

  int axis = 0;
  double best = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double len = proj.col(k).norm();
    if (len > 1e-3) {
      axis = k;
      break;
    }
    if (len > best) {
      best = len;
      axis = k;
    }
  }
  Vec4 f1 = proj.col(axis);
  f1 /= f1.norm();
  if (f1(axis) < 0) f1 = -f1;
  Vec4 f2 = -A * f1 / c;
  f2 -= f1.dot(f2) * f1;
  f2 /= f2.norm();
  return {f1, f2};
}

Mat4 frame_from_eigenforms(const TwoFormPoint& plus, const TwoFormPoint& minus,
                           double tolerance) {
  if (std::fabs(plus.norm() - 1.0) > tolerance || std::fabs(minus.norm() - 1.0) > tolerance) {
    throw NotUnit("eigenforms must have unit length");
  }
  if ((hodge_star(plus) - plus).norm() > tolerance) {
    throw NotSelfDual("first eigenform is not self-dual");
  }
  if ((hodge_star(minus) + minus).norm() > tolerance) {
    throw NotAntiSelfDual("second eigenform is not anti-self-dual");
  }
  const auto [f1, f2] = decompose_simple(plus + minus);
  const auto [f3, f4] = decompose_simple(plus - minus);
  Mat4 f;
  f.col(0) = f1;
  f.col(1) = f2;
  f.col(2) = f3;
  f.col(3) = f4;
  return f;
}

Mat6 star_matrix() {
  Mat6 s = Mat6::Zero();
  for (int i = 0; i < 3; ++i) {
    s(i, i + 3) = 1.0;
    s(i + 3, i) = 1.0;
  }
  return s;
}

Mat6 duality_basis() {
  Mat6 t = Mat6::Zero();
  for (int i = 0; i < 3; ++i) {
    t(i, i) = kInvSqrt2;
    t(i, i + 3) = kInvSqrt2;
    t(i + 3, i) = kInvSqrt2;
    t(i + 3, i + 3) = -kInvSqrt2;
  }
  return t;
}

}  // namespace curv4
