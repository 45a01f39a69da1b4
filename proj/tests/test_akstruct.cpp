#include "curv4/akstruct.hpp"
#include "curv4/errors.hpp"
#include "curv4/models.hpp"
#include "support.hpp"

using namespace curv4;
using testsupport::x;

namespace {

const double kSqrt2 = std::sqrt(2.0);

void check_acs(const AlmostComplexStructure& acs, double tol) {
  CHECK(acs.j_squared_residual <= tol);
  CHECK(acs.metric_residual <= tol);
  CHECK(acs.skew_residual <= tol);
  CHECK(acs.form_residual <= tol);
  CHECK(acs.min_taming > 0.0);
}

TwoFormField scaled_standard(const Expr& f) {
  ExprMat4 w{};
  for (auto& r : w) r.fill(Expr(0.0));
  w[0][1] = f;
  w[2][3] = f;
  return TwoFormField(w);
}

}  // namespace

TEST_CASE("pointwise symplectic checks") {
  const TwoFormPoint w = TwoFormPoint::basis(0, 1) + TwoFormPoint::basis(2, 3);
  const SymplecticCheck c = check_symplectic_pointwise(w);
  CHECK(c.selfdual);
  CHECK(c.length == doctest::Approx(kSqrt2));
  CHECK(c.volume_identity_residual <= 1e-15);
  CHECK(!check_symplectic_pointwise(TwoFormPoint::basis(0, 1)).selfdual);
}

TEST_CASE("standard J on flat space") {
  const ModelGeometry flat = builtin("flat4");
  const Point p{0.5, 0.5, 0.5, 0.5};
  const AlmostComplexStructure acs = build_acs(metric_at(flat.metric, p), flat.form->values(p));
  check_acs(acs, 1e-12);
  // J e1 = e2, J e3 = e4.
  CHECK((acs.J.col(0) - Vec4::Unit(1)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((acs.J.col(2) - Vec4::Unit(3)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(std::fabs(acs.min_taming - 1.0) <= 1e-12);

  CHECK_THROWS_AS(build_acs(Mat4::Identity(), TwoFormPoint::basis(0, 1).matrix()), NotSelfDual);
  CHECK_THROWS_AS(build_acs(Mat4::Identity(), 2.0 * flat.form->values(p)), NotNormalized);
  // Anti-self-dual for +1 means self-dual for −1.
  const Mat4 asd = (TwoFormPoint::basis(0, 1) - TwoFormPoint::basis(2, 3)).matrix();
  CHECK_THROWS_AS(build_acs(Mat4::Identity(), asd, +1), NotSelfDual);
  check_acs(build_acs(Mat4::Identity(), asd, -1), 1e-12);
}

TEST_CASE("Fubini-Study Kähler structure") {
  const ModelGeometry fs = builtin("fubini_study");
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Point p = testsupport::random_point(rng, -0.9, 0.9);
    const Mat4 g = metric_at(fs.metric, p);
    const AlmostComplexStructure acs = build_acs(g, fs.form->values(p));
    check_acs(acs, 1e-9);
    // J is the chart complex structure.
    const Vec4 j1 = acs.J.col(0);
    CHECK((j1 - Vec4::Unit(1)).cwiseAbs().maxCoeff() <= 1e-9);

    // The kernel of s/3 − 2W⁺ is spanned by ω/√2.
    const CurvaturePoint cp = riemann(fs.metric, p);
    const SpectralData sd = spectra(curvature_operator(cp));
    const TwoFormPoint wf = to_frame(cp.frame, fs.form->values(p));
    CHECK(std::fabs(sd.r_plus(2)) <= 1e-8);
    CHECK(std::fabs(sd.forms_plus[2].dot(wf) / kSqrt2) >= 1.0 - 1e-9);
    check_acs(build_acs(wf), 1e-9);
  }
}

TEST_CASE("conformal normalization") {
  const auto pts = grid_points(Box{{0.1, 0.1, 0.1, 0.1}, {0.9, 0.9, 0.9, 0.9}}, 3);
  const ModelGeometry flat = builtin("flat4");
  const ConformalNormalization twice = conformal_normalize(flat.metric, scaled_standard(Expr(2.0)), pts);
  CHECK(twice.u2.eval(pts[0]) == doctest::Approx(2.0));
  CHECK(twice.max_length_error <= 1e-9);

  const ConformalNormalization varying = conformal_normalize(flat.metric, scaled_standard(exp(x(0)) + x(1) * x(1)), pts);
  CHECK(varying.max_length_error <= 1e-9);
  for (const Point& p : pts) {
    check_acs(build_acs(metric_at(varying.metric, p), scaled_standard(exp(x(0)) + x(1) * x(1)).values(p)), 1e-9);
  }

  const ModelGeometry fs = builtin("fubini_study");
  const auto fs_pts = grid_points(Box{{-0.8, -0.8, -0.8, -0.8}, {0.8, 0.8, 0.8, 0.8}}, 3);
  const ConformalNormalization unit = conformal_normalize(fs.metric, *fs.form, fs_pts);
  for (const Point& p : fs_pts) CHECK(std::fabs(unit.u2.eval(p) - 1.0) <= 1e-9);

  // A Fubini-Study form scaled by a positive function is renormalized.
  const ConformalNormalization back =
      conformal_normalize(fs.metric, fs.form->scaled(Expr(1.0) + x(0) * x(0)), fs_pts);
  CHECK(back.max_length_error <= 1e-9);

  CHECK_THROWS_AS(conformal_normalize(flat.metric, scaled_standard(x(0) - 0.5), pts), VanishingForm);
}

TEST_CASE("Hodge star on 2-forms is conformally invariant") {
  std::mt19937_64 rng(2);
  const auto pts = grid_points(Box{{-0.8, -0.8, -0.8, -0.8}, {0.8, 0.8, 0.8, 0.8}}, 3);
  ExprMat4 c{};
  for (auto& r : c) r.fill(Expr(0.0));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) c[i][j] = testsupport::random_expr(rng, 2);
  const TwoFormField a(c);
  const auto cube = grid_points(Box{{0.1, 0.1, 0.1, 0.1}, {0.9, 0.9, 0.9, 0.9}}, 3);
  CHECK(star_conformal_invariance(builtin("flat4").metric, exp(x(0)), a, cube) <= 1e-9);
  for (const char* model : {"sphere4", "fubini_study"}) {
    CHECK(star_conformal_invariance(builtin(model).metric, exp(x(0)), a, pts) <= 1e-9);
  }
  // Sphere and flat metrics are conformal, so their stars agree.
  const MetricField sphere = builtin("sphere4").metric;
  const Mat4 w = a.values(pts[5]);
  const Mat4 s1 = hodge_star_coordinates(metric_at(sphere, pts[5]), w, 1);
  const Mat4 s2 = hodge_star_coordinates(Mat4::Identity(), w, 1);
  CHECK((s1 - s2).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("squared norm expression") {
  const ModelGeometry fs = builtin("fubini_study");
  const Expr n2 = squared_norm_expr(fs.metric, *fs.form);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Point p = testsupport::random_point(rng, -0.9, 0.9);
    CHECK(std::fabs(n2.eval(p) - 2.0) <= 1e-10);
  }
}
