#include "curv4/curvspec.hpp"

#include <cmath>
#include <random>

namespace curv4 {

CurvatureOperator::CurvatureOperator(const Mat6& m) : m_(m) {
  const Mat6 t = duality_basis();
  const Mat6 blocks = t * m_ * t.transpose();
  a_ = blocks.topLeftCorner<3, 3>();
  b_ = blocks.topRightCorner<3, 3>();
  c_ = blocks.bottomRightCorner<3, 3>();
}

CurvatureOperator CurvatureOperator::from_blocks(const Mat3& a, const Mat3& b, const Mat3& c) {
  Mat6 blocks;
  blocks << a, b, b.transpose(), c;
  const Mat6 t = duality_basis();
  CurvatureOperator op;
  const Mat6 m = t.transpose() * blocks * t;
  op.m_ = 0.5 * (m + m.transpose());
  op.a_ = a;
  op.b_ = b;
  op.c_ = c;
  return op;
}

Mat3 CurvatureOperator::weyl_plus() const {
  return a_ - (scalar() / 12.0) * Mat3::Identity();
}

Mat3 CurvatureOperator::weyl_minus() const {
  return c_ - (scalar() / 12.0) * Mat3::Identity();
}

CurvatureOperator curvature_operator(const CurvaturePoint& cp) {
  Mat6 m;
  for (int a = 0; a < 6; ++a) {
    const auto [i, j] = basis_pair(a);
    for (int b = 0; b < 6; ++b) {
      const auto [k, l] = basis_pair(b);
      m(a, b) = cp.R(i, j, l, k);
    }
  }
  return CurvatureOperator(m);
}

SymmetricEigen3 symmetric_eigen3(const Mat3& m) {
  const Mat3 sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat3> es(sym);
  SymmetricEigen3 out;
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  // Re-orthonormalize in solver order, then fix signs.
  for (int i = 0; i < 3; ++i) {
    Vec3 v = out.vectors.col(i);
    for (int j = 0; j < i; ++j) v -= out.vectors.col(j).dot(v) * out.vectors.col(j);
    v.normalize();
    int big = 0;
    for (int k = 1; k < 3; ++k) {
      if (std::fabs(v(k)) > std::fabs(v(big))) big = k;
    }
    if (v(big) < 0) v = -v;
    out.vectors.col(i) = v;
  }
  return out;
}

SpectralData spectral_from_values(double s, const Vec3& lambda_plus, const Vec3& lambda_minus) {
  SpectralData sd;
  sd.s = s;
  sd.lambda_plus = lambda_plus;
  sd.lambda_minus = lambda_minus;
  for (int i = 0; i < 3; ++i) {
    sd.r_plus(i) = s / 3.0 - 2.0 * lambda_plus(i);
    sd.r_minus(i) = s / 3.0 - 2.0 * lambda_minus(i);
  }
  sd.weyl_plus = lambda_plus.asDiagonal();
  sd.weyl_minus = lambda_minus.asDiagonal();
  return sd;
}

SpectralData spectra(const CurvatureOperator& op) {
  const Mat3 wp = op.weyl_plus();
  const Mat3 wm = op.weyl_minus();
  const SymmetricEigen3 ep = symmetric_eigen3(wp);
  const SymmetricEigen3 em = symmetric_eigen3(wm);
  SpectralData sd = spectral_from_values(op.scalar(), ep.values, em.values);
  sd.weyl_plus = 0.5 * (wp + wp.transpose());
  sd.weyl_minus = 0.5 * (wm + wm.transpose());
  for (int i = 0; i < 3; ++i) {
    sd.forms_plus[i] = TwoFormPoint::from_duality(ep.vectors.col(i), Vec3::Zero());
    sd.forms_minus[i] = TwoFormPoint::from_duality(Vec3::Zero(), em.vectors.col(i));
  }
  return sd;
}

std::optional<std::string> spectral_invariant_violation(const SpectralData& sd, double tol) {
  const Vec3* sides[2] = {&sd.lambda_plus, &sd.lambda_minus};
  const char* names[2] = {"plus", "minus"};
  for (int k = 0; k < 2; ++k) {
    const Vec3& l = *sides[k];
    const std::string side = names[k];
    if (!(l(0) <= l(1) && l(1) <= l(2))) return "lambda_" + side + " not ascending";
    if (std::fabs(l.sum()) > tol) return "lambda_" + side + " not trace-free";
    if (l(0) > tol || l(2) < -tol) return "lambda_" + side + " violates l1 <= 0 <= l3";
    if (-0.5 * l(0) > l(2) + tol || l(2) > -2.0 * l(0) + tol) {
      return "lambda_" + side + " violates -l1/2 <= l3 <= -2 l1";
    }
  }
  return std::nullopt;
}

PositivityVerdict positivity_check(double s, const Mat3& weyl, double margin) {
  const Mat3 op = (s / 3.0) * Mat3::Identity() - 2.0 * weyl;
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (op + op.transpose()), Eigen::EigenvaluesOnly);
  PositivityVerdict v;
  v.smallest = es.eigenvalues()(0);
  v.positive = v.smallest > margin;
  return v;
}

namespace {

Mat3 random_traceless(std::mt19937_64& rng, std::normal_distribution<double>& n) {
  Mat3 w;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) w(i, j) = w(j, i) = n(rng);
  }
  w -= (w.trace() / 3.0) * Mat3::Identity();
  return w;
}

}  // namespace

CurvatureOperator random_curvature(std::uint64_t seed, CurvatureMode mode) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = 12.0 * normal(rng);
  Mat3 wp = random_traceless(rng, normal);
  Mat3 wm = random_traceless(rng, normal);
  Mat3 b;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) b(i, j) = normal(rng);
  }
  if (mode == CurvatureMode::einstein) b.setZero();
  if (mode == CurvatureMode::selfdual_weyl_only) wm.setZero();

  const Mat3 scalar_part = (s / 12.0) * Mat3::Identity();
  return CurvatureOperator::from_blocks(scalar_part + wp, b, scalar_part + wm);
}

}  // namespace curv4
