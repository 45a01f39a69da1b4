#include "curv4/errors.hpp"
#include "curv4/geometry.hpp"
#include "curv4/models.hpp"
#include "support.hpp"

using namespace curv4;

namespace {

Mat4 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat4 a;
  for (int i = 0; i < 16; ++i) a(i) = n(rng);
  Eigen::HouseholderQR<Mat4> qr(a);
  Mat4 q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

double max_symmetry_defect(const CurvaturePoint& cp) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double r = cp.R(i, j, k, l);
          worst = std::max({worst, std::fabs(r + cp.R(j, i, k, l)), std::fabs(r + cp.R(i, j, l, k)),
                            std::fabs(r - cp.R(k, l, i, j)),
                            std::fabs(r + cp.R(i, k, l, j) + cp.R(i, l, j, k))});
        }
  return worst;
}

double sectional_of(const CurvaturePoint& cp, const Vec4& u, const Vec4& v) {
  // K = R(u,v,v,u) for an orthonormal pair in frame components.
  double k = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) k += u(i) * v(j) * v(a) * u(b) * cp.R(i, j, a, b);
  return k;
}

}  // namespace

TEST_CASE("metric values") {
  CHECK(metric_at(builtin("flat4").metric, {0.2, 0.3, 0.4, 0.5}).isApprox(Mat4::Identity()));
  CHECK(metric_at(builtin("sphere4").metric, {0, 0, 0, 0}).isApprox(4.0 * Mat4::Identity()));
  // Holomorphic sectional curvature 4 puts the chart metric at the identity.
  CHECK(metric_at(builtin("fubini_study").metric, {0, 0, 0, 0}).isApprox(Mat4::Identity()));
}

TEST_CASE("non positive definite metrics are rejected") {
  ExprMat4 c{};
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) c[i][j] = Expr(i == j ? 1.0 : 0.0);
  c[0][0] = parse("x1");
  const MetricField g(c, Box{{-1, -1, -1, -1}, {1, 1, 1, 1}});
  try {
    metric_at(g, {-0.5, 0, 0, 0});
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.smallest_eigenvalue() == doctest::Approx(-0.5));
  }
  c[0][0] = parse("log(x1)");
  CHECK_THROWS_AS(metric_at(MetricField(c, Box{}), {-0.5, 0, 0, 0}), DomainError);
}

TEST_CASE("orthonormal frames") {
  CHECK(orthonormal_frame(Mat4::Identity(), 1).isApprox(Mat4::Identity()));
  CHECK(orthonormal_frame(4.0 * Mat4::Identity(), 1).isApprox(0.5 * Mat4::Identity()));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 100; ++t) {
    Mat4 a;
    for (int i = 0; i < 16; ++i) a(i) = n(rng);
    const Mat4 g = a * a.transpose() + 0.1 * Mat4::Identity();
    for (int o : {1, -1}) {
      const Mat4 f = orthonormal_frame(g, o);
      CHECK((f.transpose() * g * f - Mat4::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(f.determinant() * o > 0);
    }
  }
  CHECK_THROWS_AS(orthonormal_frame(-Mat4::Identity(), 1), NotPositiveDefinite);
}

TEST_CASE("Christoffel symbols") {
  const MetricField flat = builtin("flat4").metric;
  const MetricField sphere = builtin("sphere4").metric;
  for (const auto& row : christoffel(flat, {0.1, 0.2, 0.3, 0.4}))
    for (const auto& r : row)
      for (double v : r) CHECK(v == 0.0);
  for (const auto& row : christoffel(sphere, {0, 0, 0, 0}))
    for (const auto& r : row)
      for (double v : r) CHECK(std::fabs(v) <= 1e-15);

  // Finite-difference-of-metric oracle.
  for (const Point& p : {Point{0.5, 0, 0, 0}, Point{0.3, -0.2, 0.1, 0.4}}) {
    for (const char* model : {"sphere4", "fubini_study"}) {
      const MetricField g = builtin(model).metric;
      const Christoffel G = christoffel(g, p);
      const Mat4 gi = metric_at(g, p).inverse();
      double dg[4][4][4];
      for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            dg[l][i][j] = testsupport::richardson([&](const Point& q) { return g.values(q)(i, j); }, p, l, 1e-3);
      for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            double ref = 0.0;
            for (int l = 0; l < 4; ++l) ref += 0.5 * gi(k, l) * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
            CHECK(std::fabs(G[k][i][j] - ref) <= 1e-8);
            CHECK(G[k][i][j] == G[k][j][i]);
          }
    }
  }
}

TEST_CASE("constant-curvature and flat baselines") {
  std::mt19937_64 rng(11);
  const CurvaturePoint flat = riemann(builtin("flat4").metric, {0.2, 0.4, 0.6, 0.8});
  CHECK(flat.scalar == 0.0);
  CHECK(max_symmetry_defect(flat) == 0.0);
  for (double r : {1.0, 2.0, 0.5}) {
    const MetricField g = builtin("sphere4", {{"r", r}}).metric;
    const CurvaturePoint cp = riemann(g, testsupport::random_point(rng));
    CHECK(cp.scalar == doctest::Approx(12.0 / (r * r)).epsilon(1e-10));
    for (int t = 0; t < 100; ++t) {
      std::normal_distribution<double> n;
      Vec4 u, v;
      for (int i = 0; i < 4; ++i) u(i) = n(rng), v(i) = n(rng);
      u.normalize();
      v = (v - v.dot(u) * u).normalized();
      CHECK(std::fabs(sectional_of(cp, u, v) - 1.0 / (r * r)) <= 1e-9);
    }
  }
}

TEST_CASE("Fubini-Study is Einstein with s = 24") {
  std::mt19937_64 rng(5);
  const MetricField g = builtin("fubini_study").metric;
  for (int t = 0; t < 10; ++t) {
    const CurvaturePoint cp = riemann(g, testsupport::random_point(rng));
    CHECK(std::fabs(cp.scalar - 24.0) <= 1e-8);
    CHECK((cp.ricci - 6.0 * Mat4::Identity()).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(std::fabs(cp.ricci.trace() - cp.scalar) <= 1e-12);
  }
}

TEST_CASE("Riemann symmetries and Bianchi identity on every model") {
  std::mt19937_64 rng(8);
  for (const auto& name : builtin_names()) {
    const ModelGeometry m = builtin(name, name == "fs_perturbed" ? Params{{"t", 0.3}} : Params{});
    for (int t = 0; t < 5; ++t) {
      const Point p = testsupport::random_point(rng, -0.9, 0.9);
      if (!contains(m.metric.domain(), p)) continue;
      CAPTURE(name);
      CHECK(max_symmetry_defect(riemann(m.metric, p)) <= 1e-9);
    }
  }
}

TEST_CASE("frame independence") {
  std::mt19937_64 rng(21);
  const MetricField g = builtin("fs_perturbed", {{"t", 0.4}}).metric;
  const Point p{0.1, -0.2, 0.15, 0.05};
  const CurvaturePoint a = riemann(g, p);
  const Mat4 q = random_rotation(rng);
  const CurvaturePoint b = riemann_in_frame(g, p, a.frame * q);
  CHECK(std::fabs(a.scalar - b.scalar) <= 1e-9);
  Eigen::SelfAdjointEigenSolver<Mat4> ea(a.ricci), eb(b.ricci);
  CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-9);
  // A fixed geometric plane, expressed in both frames.
  std::normal_distribution<double> n;
  for (int t = 0; t < 20; ++t) {
    Vec4 u, v;
    for (int i = 0; i < 4; ++i) u(i) = n(rng), v(i) = n(rng);
    u.normalize();
    v = (v - v.dot(u) * u).normalized();
    CHECK(std::fabs(sectional_of(a, u, v) - sectional_of(b, q.transpose() * u, q.transpose() * v)) <= 1e-9);
  }
}

TEST_CASE("orientation flag only flips the last frame vector") {
  const MetricField g = builtin("fubini_study").metric;
  const Point p{0.2, 0.1, -0.3, 0.4};
  const CurvaturePoint a = riemann(g, p);
  const CurvaturePoint b = riemann(g.with_orientation(-1), p);
  CHECK(a.frame.col(3).isApprox(-b.frame.col(3)));
  CHECK(std::fabs(a.scalar - b.scalar) <= 1e-12);
}

TEST_CASE("domains") {
  const Box box{{0, 0, 0, 0}, {1, 1, 1, 1}};
  CHECK(contains(box, {0.5, 0.5, 0.5, 0.5}));
  CHECK(!contains(box, {1.5, 0.5, 0.5, 0.5}));
  const Ball ball{{0, 0, 0, 0}, 2.0};
  CHECK(contains(ball, {1, 1, 1, 0.5}));
  CHECK(!contains(ball, {1, 1, 1, 1.5}));
}
