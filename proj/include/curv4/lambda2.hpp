#pragma once

// Pointwise algebra of 2-forms in an oriented orthonormal frame.
//
// Basis of Λ² (0-based indices in code, 1-based in the names):
//   b = (e12, e13, e14, e34, e42, e23)
// so that *b_i = b_{i+3}: the self-dual basis is (b_i + b_{i+3})/√2 and the
// anti-self-dual basis is (b_i − b_{i+3})/√2, i = 0,1,2.
// Norm convention: |e^i∧e^j| = 1 for i < j, i.e. |α|² = ½ Σ α_ij².

#include <Eigen/Dense>
#include <utility>

#include "curv4/geometry.hpp"

namespace curv4 {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

class TwoFormPoint {
 public:
  TwoFormPoint() : c_(Vec6::Zero()) {}
  explicit TwoFormPoint(const Vec6& coefficients) : c_(coefficients) {}

  /// Antisymmetric part of a component matrix.
  static TwoFormPoint from_matrix(const Mat4& a);
  /// e^i ∧ e^j, 0-based.
  static TwoFormPoint basis(int i, int j);
  /// u ∧ v with components u_i v_j − u_j v_i.
  static TwoFormPoint wedge_of(const Vec4& u, const Vec4& v);
  /// From coordinates in the orthonormal self-dual / anti-self-dual bases.
  static TwoFormPoint from_duality(const Vec3& plus, const Vec3& minus);

  double operator()(int i, int j) const;
  Mat4 matrix() const;
  const Vec6& coefficients() const { return c_; }

  Vec3 self_dual_coordinates() const;
  Vec3 anti_self_dual_coordinates() const;

  double norm() const { return c_.norm(); }
  double squared_norm() const { return c_.squaredNorm(); }
  double dot(const TwoFormPoint& o) const { return c_.dot(o.c_); }

  /// Components in a new orthonormal frame whose vectors are the columns of
  /// `q` (expressed in the current frame): α'_ab = q_ia q_jb α_ij.
  TwoFormPoint transformed(const Mat4& q) const;

  TwoFormPoint& operator+=(const TwoFormPoint& o) { c_ += o.c_; return *this; }
  TwoFormPoint& operator-=(const TwoFormPoint& o) { c_ -= o.c_; return *this; }
  TwoFormPoint& operator*=(double s) { c_ *= s; return *this; }

 private:
  Vec6 c_;
};

inline TwoFormPoint operator+(TwoFormPoint a, const TwoFormPoint& b) { return a += b; }
inline TwoFormPoint operator-(TwoFormPoint a, const TwoFormPoint& b) { return a -= b; }
inline TwoFormPoint operator*(TwoFormPoint a, double s) { return a *= s; }
inline TwoFormPoint operator*(double s, TwoFormPoint a) { return a *= s; }

/// Slot of e^i∧e^j in the Λ² basis and the sign relating them.
struct BasisSlot {
  int index;
  int sign;
};
BasisSlot basis_slot(int i, int j);
/// (i, j) with b_slot = e^i ∧ e^j.
std::pair<int, int> basis_pair(int slot);

/// Coefficient of α∧β on the oriented volume form e1∧e2∧e3∧e4.
double wedge(const TwoFormPoint& a, const TwoFormPoint& b);

TwoFormPoint hodge_star(const TwoFormPoint& a);

struct DualitySplit {
  TwoFormPoint plus;
  TwoFormPoint minus;
};
DualitySplit sd_asd_split(const TwoFormPoint& a);

/// Relative tolerance of the decomposability test |α∧α| ≤ τ|α|².
inline constexpr double kDecomposableTolerance = 1e-8;

/// Orthonormal (f1, f2) with α = |α| f1∧f2. f1 is the normalized projection
/// onto the plane of the lowest-index coordinate axis with a non-negligible
/// projection; its component on that axis is positive.
/// Throws ZeroForm or NotDecomposable.
std::pair<Vec4, Vec4> decompose_simple(const TwoFormPoint& a,
                                       double tolerance = kDecomposableTolerance);

/// Positively oriented orthonormal frame (columns f1..f4) with
///   α⁺ = (f1∧f2 + f3∧f4)/√2,  α⁻ = (f1∧f2 − f3∧f4)/√2.
/// Throws NotUnit, NotSelfDual, NotAntiSelfDual or NotDecomposable.
Mat4 frame_from_eigenforms(const TwoFormPoint& plus, const TwoFormPoint& minus,
                           double tolerance = 1e-9);

/// The Hodge star as a 6×6 matrix on coefficients (swaps b_i and b_{i+3}).
Mat6 star_matrix();
/// Orthogonal change of basis: rows 0..2 map coefficients to self-dual
/// coordinates, rows 3..5 to anti-self-dual coordinates.
Mat6 duality_basis();

}  // namespace curv4
