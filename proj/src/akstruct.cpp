#include "curv4/akstruct.hpp"

#include <cmath>
#include <random>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr int kProbeVectors = 32;

}  // namespace

SymplecticCheck check_symplectic_pointwise(const TwoFormPoint& w, double tau) {
  SymplecticCheck c;
  c.length = w.norm();
  c.selfdual = (w - hodge_star(w)).norm() <= tau;
  c.volume_identity_residual = std::fabs(wedge(w, w) - w.squared_norm());
  return c;
}

AlmostComplexStructure build_acs(const Mat4& g, const Mat4& omega, int orientation, double tol) {
  const Mat4 frame = orthonormal_frame(g, orientation);
  const TwoFormPoint wf = to_frame(frame, omega);
  const SymplecticCheck sc = check_symplectic_pointwise(wf, tol);
  if (!sc.selfdual) {
    throw NotSelfDual("form is not self-dual: |w - *w| = " +
                      std::to_string((wf - hodge_star(wf)).norm()));
  }
  if (std::fabs(sc.length - kSqrt2) > tol) {
    throw NotNormalized("form length " + std::to_string(sc.length) + " differs from sqrt(2)");
  }

  AlmostComplexStructure acs;
  acs.J = -g.ldlt().solve(omega);
  acs.j_squared_residual = (acs.J * acs.J + Mat4::Identity()).cwiseAbs().maxCoeff();

  std::mt19937_64 rng(0x61637321ULL);
  std::normal_distribution<double> n(0.0, 1.0);
  acs.min_taming = std::numeric_limits<double>::infinity();
  for (int t = 0; t < kProbeVectors; ++t) {
    Vec4 x, y;
    for (int i = 0; i < 4; ++i) x(i) = n(rng);
    for (int i = 0; i < 4; ++i) y(i) = n(rng);
    const Vec4 jx = acs.J * x, jy = acs.J * y;
    acs.metric_residual = std::max(acs.metric_residual, std::fabs(jx.dot(g * jy) - x.dot(g * y)));
    acs.skew_residual = std::max(acs.skew_residual, std::fabs(x.dot(g * jx)));
    acs.form_residual = std::max(acs.form_residual, std::fabs(jx.dot(omega * jy) - x.dot(omega * y)));
    acs.min_taming = std::min(acs.min_taming, x.dot(omega * jx) / x.dot(g * x));
  }
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if (acs.j_squared_residual > 100.0 * tol * scale || !(acs.min_taming > 0.0)) {
    throw Error("almost-complex structure fails its invariants (|J^2+I| = " +
                std::to_string(acs.j_squared_residual) +
                ", min w(x,Jx) = " + std::to_string(acs.min_taming) + ")");
  }
  return acs;
}

AlmostComplexStructure build_acs(const TwoFormPoint& omega_frame, double tol) {
  return build_acs(Mat4::Identity(), omega_frame.matrix(), +1, tol);
}

Expr squared_norm_expr(const MetricField& g, const TwoFormField& w) {
  // g^{ij} = C_ij / det g with C the (symmetric) cofactor matrix.
  auto minor = [&](int r, int c) {
    int rows[3], cols[3], nr = 0, nc = 0;
    for (int k = 0; k < 4; ++k) {
      if (k != r) rows[nr++] = k;
      if (k != c) cols[nc++] = k;
    }
    auto m = [&](int a, int b) { return g.component(rows[a], cols[b]); };
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  };
  std::array<std::array<Expr, 4>, 4> cof;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const Expr c = (i + j) % 2 == 0 ? minor(i, j) : -minor(i, j);
      cof[i][j] = c;
      cof[j][i] = c;
    }
  }
  Expr det = g.component(0, 0) * cof[0][0];
  for (int j = 1; j < 4; ++j) det = det + g.component(0, j) * cof[0][j];

  // |ω|² = Σ_{i<j, a<b} ω_ij ω_ab (C_ia C_jb − C_ja C_ib) / det².
  Expr num(0.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const Expr wij = w.component(i, j);
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          const Expr wab = w.component(a, b);
          num = num + wij * wab * (cof[i][a] * cof[j][b] - cof[j][a] * cof[i][b]);
        }
      }
    }
  }
  return num / (det * det);
}

ConformalNormalization conformal_normalize(const MetricField& g, const TwoFormField& w,
                                           std::span<const Point> points, double tau) {
  for (const Point& p : points) {
    const Mat4 gv = metric_at(g, p);
    const double len = form2_norm(gv.inverse(), w.values(p));
    if (len <= tau) {
      throw VanishingForm("|w|_g = " + std::to_string(len) + " at " + describe(p));
    }
  }
  ConformalNormalization out;
  out.u2 = sqrt(squared_norm_expr(g, w) * Expr(0.5));
  ExprMat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) c[i][j] = out.u2 * g.component(i, j);
  }
  out.metric = MetricField(c, g.domain(), g.orientation());
  for (const Point& p : points) {
    const Mat4 gv = metric_at(out.metric, p);
    const double len = form2_norm(gv.inverse(), w.values(p));
    out.max_length_error = std::max(out.max_length_error, std::fabs(len - kSqrt2));
  }
  return out;
}

double star_conformal_invariance(const MetricField& g, const Expr& factor, const TwoFormField& a,
                                 std::span<const Point> points) {
  double worst = 0.0;
  for (const Point& p : points) {
    const Mat4 gv = metric_at(g, p);
    const double f = factor.eval(p);
    if (!(f > 0.0)) throw DomainError("conformal factor not positive at " + describe(p));
    const Mat4 av = a.values(p);
    const Mat4 s1 = hodge_star_coordinates(gv, av, g.orientation());
    const Mat4 s2 = hodge_star_coordinates(f * gv, av, g.orientation());
    worst = std::max(worst, (s1 - s2).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace curv4
