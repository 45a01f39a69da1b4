#pragma once

// The curvature operator on Λ² and its self-dual / anti-self-dual spectra.
//
// Normalization: <ℛ(e^i∧e^j), e^k∧e^l> = R(e_i, e_j, e_l, e_k), so that
// K(P) = <ℛ(u∧v), u∧v> for an orthonormal pair and ℛ = Id on the unit sphere.
// In the duality basis
//     ℛ = [ A  B ]      A = s/12 + W⁺,  C = s/12 + W⁻,
//         [ Bᵀ C ]      B = traceless Ricci coupling,
// and tr ℛ = s/2.

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "curv4/geometry.hpp"
#include "curv4/lambda2.hpp"

namespace curv4 {

class CurvatureOperator {
 public:
  CurvatureOperator()
      : m_(Mat6::Zero()), a_(Mat3::Zero()), b_(Mat3::Zero()), c_(Mat3::Zero()) {}
  /// `m` in the Λ² coefficient basis of lambda2.
  explicit CurvatureOperator(const Mat6& m);
  /// Assembles ℛ from its duality blocks; the blocks are stored as given.
  static CurvatureOperator from_blocks(const Mat3& a, const Mat3& b, const Mat3& c);

  const Mat6& matrix() const { return m_; }
  const Mat3& a_block() const { return a_; }
  const Mat3& b_block() const { return b_; }
  const Mat3& c_block() const { return c_; }

  double scalar() const { return 2.0 * m_.trace(); }
  Mat3 weyl_plus() const;
  Mat3 weyl_minus() const;

  double apply(const TwoFormPoint& x, const TwoFormPoint& y) const {
    return x.coefficients().dot(m_ * y.coefficients());
  }

  CurvatureOperator scaled(double c) const { return CurvatureOperator(c * m_); }

 private:
  Mat6 m_;
  Mat3 a_, b_, c_;
};

CurvatureOperator curvature_operator(const CurvaturePoint& cp);

struct SymmetricEigen3 {
  Vec3 values;   // ascending
  Mat3 vectors;  // columns, orthonormal, largest-magnitude entry positive
};
SymmetricEigen3 symmetric_eigen3(const Mat3& m);

struct SpectralData {
  double s = 0.0;
  Vec3 lambda_plus = Vec3::Zero();   // ascending
  Vec3 lambda_minus = Vec3::Zero();  // ascending
  Vec3 r_plus = Vec3::Zero();        // s/3 − 2λ⁺, descending
  Vec3 r_minus = Vec3::Zero();
  Mat3 weyl_plus = Mat3::Zero();
  Mat3 weyl_minus = Mat3::Zero();
  std::array<TwoFormPoint, 3> forms_plus{};   // unit self-dual eigenforms
  std::array<TwoFormPoint, 3> forms_minus{};  // unit anti-self-dual eigenforms
};

SpectralData spectra(const CurvatureOperator& op);

/// Spectral data from eigenvalues alone (eigenforms left zero). Used by the
/// algebraic property suites.
SpectralData spectral_from_values(double s, const Vec3& lambda_plus, const Vec3& lambda_minus);

/// First violated SpectralData invariant, if any: trace-free spectra,
/// λ₁ ≤ 0 ≤ λ₃, and −½λ₁ ≤ λ₃ ≤ −2λ₁.
std::optional<std::string> spectral_invariant_violation(const SpectralData& sd, double tol);

struct PositivityVerdict {
  bool positive = false;
  double smallest = 0.0;  // smallest eigenvalue of (s/3)I − 2W
};
PositivityVerdict positivity_check(double s, const Mat3& weyl, double margin);

enum class CurvatureMode { general, einstein, selfdual_weyl_only };

/// Random algebraic curvature operator; bitwise reproducible from `seed`.
CurvatureOperator random_curvature(std::uint64_t seed, CurvatureMode mode);

}  // namespace curv4
