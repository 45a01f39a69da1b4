#include "curv4/biortho.hpp"
#include "curv4/errors.hpp"
#include "curv4/models.hpp"
#include "support.hpp"

using namespace curv4;

namespace {

Vec3 random_traceless_sorted(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Vec3 v(n(rng), n(rng), n(rng));
  v.array() -= v.mean();
  std::sort(v.data(), v.data() + 3);
  return v;
}

CurvatureOperator model_operator(const char* name, const Point& p) {
  return curvature_operator(riemann(builtin(name).metric, p));
}

KperpExtremes closed_only(const SpectralData& sd) {
  KperpExtremes k;
  std::tie(k.kperp1, k.kperp3) = kperp_closed_values(sd);
  return k;
}

}  // namespace

TEST_CASE("planes") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const Plane p = random_plane(rng);
    CHECK_NOTHROW(validate(p, 1e-10));
    const Plane q = orthogonal_plane(p);
    CHECK_NOTHROW(validate(q, 1e-10));
    Mat4 f;
    f << p.u, p.v, q.u, q.v;
    CHECK((f.transpose() * f - Mat4::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(f.determinant() > 0);
    const TwoFormPoint a = TwoFormPoint::wedge_of(p.u, p.v), b = TwoFormPoint::wedge_of(q.u, q.v);
    CHECK((hodge_star(a).coefficients() - b.coefficients()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(validate(Plane{Vec4::Unit(0), Vec4::Unit(0)}), DegeneratePlane);
  CHECK_THROWS_AS(validate(Plane{2.0 * Vec4::Unit(0), Vec4::Unit(1)}), DegeneratePlane);
}

TEST_CASE("S2xS2 planes") {
  const CurvatureOperator op = model_operator("s2xs2", {0.1, 0.2, -0.3, 0.4});
  const Plane tangent{Vec4::Unit(0), Vec4::Unit(1)};
  const Plane mixed{Vec4::Unit(0), Vec4::Unit(2)};
  CHECK(sectional(op, tangent) == doctest::Approx(1.0));
  CHECK(std::fabs(sectional(op, mixed)) <= 1e-12);
  CHECK(biorthogonal(op, tangent) == doctest::Approx(1.0));
  CHECK(std::fabs(biorthogonal(op, mixed)) <= 1e-12);
  const KperpExtremes k = kperp_extremes_closed(spectra(op));
  CHECK(std::fabs(k.kperp1) <= 1e-9);
  CHECK(std::fabs(k.kperp3 - 1.0) <= 1e-9);
  CHECK(std::fabs(k.kperp3 - spectra(op).s / 4.0) <= 1e-9);
}

TEST_CASE("batched curvatures equal the scalar path") {
  std::mt19937_64 rng(2);
  const CurvatureOperator op = random_curvature(5, CurvatureMode::general);
  std::vector<Plane> planes;
  for (int t = 0; t < 257; ++t) planes.push_back(random_plane(rng));
  const auto ks = sectional_batch(op, planes);
  const auto kb = biorthogonal_batch(op, planes);
  for (std::size_t i = 0; i < planes.size(); ++i) {
    CHECK(std::fabs(ks[i] - sectional(op, planes[i])) <= 1e-12);
    CHECK(std::fabs(kb[i] - biorthogonal(op, planes[i])) <= 1e-12);
  }
}

TEST_CASE("closed form equals plane search on random operators") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const CurvatureMode mode = static_cast<CurvatureMode>(seed % 3);
    const CurvatureOperator op = random_curvature(seed, mode);
    const SpectralData sd = spectra(op);
    const KperpExtremes c = kperp_extremes_closed(sd);
    const KperpExtremes s = kperp_extremes_search(op, SearchBudget{1000, 50, 3, seed});
    CAPTURE(seed);
    CHECK(std::fabs(c.kperp1 - s.kperp1) <= 1e-5);
    CHECK(std::fabs(c.kperp3 - s.kperp3) <= 1e-5);
    CHECK(c.kperp1 <= c.kperp3);
    // The closed-form planes attain the extremes.
    CHECK(std::fabs(biorthogonal(op, c.argmin) - c.kperp1) <= 1e-8);
    CHECK(std::fabs(biorthogonal(op, c.argmax) - c.kperp3) <= 1e-8);
    // Nothing sampled beats the closed form.
    CHECK(s.kperp1 >= c.kperp1 - 1e-12);
    CHECK(s.kperp3 <= c.kperp3 + 1e-12);
  }
}

TEST_CASE("search is deterministic in its seed") {
  const CurvatureOperator op = random_curvature(77, CurvatureMode::general);
  const KperpExtremes a = kperp_extremes_search(op, SearchBudget{500, 20, 2, 3});
  const KperpExtremes b = kperp_extremes_search(op, SearchBudget{500, 20, 2, 3});
  CHECK(a.kperp1 == b.kperp1);
  CHECK(a.kperp3 == b.kperp3);
  CHECK(a.argmin.u == b.argmin.u);
}

TEST_CASE("implications hold on 1e5 random spectral data with margin 0") {
  std::mt19937_64 rng(20240101);
  std::normal_distribution<double> n;
  std::size_t counterexamples = 0, premise1 = 0, premise2 = 0;
  for (int t = 0; t < 100000; ++t) {
    const double s = 12.0 * n(rng);
    const double scale = std::exp(n(rng));
    const SpectralData sd =
        spectral_from_values(s, random_traceless_sorted(rng, scale), random_traceless_sorted(rng, scale));
    REQUIRE(!spectral_invariant_violation(sd, 1e-9));
    const PointHypotheses h = point_hypotheses(sd, closed_only(sd), 0.0);
    counterexamples += h.consistency_errors.empty() ? 0 : 1;
    premise1 += h.kperp_positive;
    premise2 += h.kperp_below_quarter_s;
  }
  CHECK(counterexamples == 0);
  // Both premises are exercised often.
  CHECK(premise1 > 1000);
  CHECK(premise2 > 1000);
}

TEST_CASE("scaling covariance") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const CurvatureOperator op = random_curvature(seed, CurvatureMode::general);
    const SpectralData a = spectra(op);
    const auto [k1, k3] = kperp_closed_values(a);
    for (double c : {0.5, 3.0, 1e3}) {
      const SpectralData b = spectra(op.scaled(c));
      const auto [c1, c3] = kperp_closed_values(b);
      const double tol = 1e-9 * c * std::max(1.0, op.matrix().cwiseAbs().maxCoeff());
      CHECK(std::fabs(b.s - c * a.s) <= tol);
      CHECK((b.lambda_plus - c * a.lambda_plus).cwiseAbs().maxCoeff() <= tol);
      CHECK((b.lambda_minus - c * a.lambda_minus).cwiseAbs().maxCoeff() <= tol);
      CHECK(std::fabs(c1 - c * k1) <= tol);
      CHECK(std::fabs(c3 - c * k3) <= tol);
      if (std::fabs(k1) > 1e-6) CHECK((c1 > 0) == (k1 > 0));
    }
  }
}

TEST_CASE("model point verdicts") {
  const Point p{0.1, -0.2, 0.3, 0.1};
  auto verdict = [&](const char* name) {
    const SpectralData sd = spectra(model_operator(name, p));
    return point_hypotheses(sd, kperp_extremes_closed(sd));
  };
  const PointHypotheses fs = verdict("fubini_study");
  CHECK(fs.kperp_positive);
  CHECK(fs.kperp_below_quarter_s);  // K⊥₃ = 4 < s/4 = 6
  const PointHypotheses flat = verdict("flat4");
  CHECK(!flat.kperp_positive);
  CHECK(!flat.kperp_below_quarter_s);
  CHECK(!flat.scalar_positive);
  const PointHypotheses prod = verdict("s2xs2");
  CHECK(!prod.kperp_positive);
  CHECK(!prod.kperp_below_quarter_s);
  CHECK(prod.scalar_positive);
  CHECK(prod.consistency_errors.empty());
}

TEST_CASE("aggregates") {
  CHECK_THROWS_AS(aggregate_hypotheses({}), EmptySample);
  const HypothesisReport only_errors = aggregate_hypotheses({}, 2);
  CHECK(!only_errors.hypothesis_holds());
  CHECK(only_errors.dichotomy == Dichotomy::none);

  std::vector<PointHypotheses> pts;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const SpectralData sd = spectra(random_curvature(seed, CurvatureMode::general));
    pts.push_back(point_hypotheses(sd, kperp_extremes_closed(sd)));
  }
  // Monotone: once false, adding points cannot make an aggregate true.
  HypothesisReport prev = aggregate_hypotheses({pts[0]});
  for (std::size_t n = 2; n <= pts.size(); ++n) {
    const HypothesisReport cur = aggregate_hypotheses(std::vector<PointHypotheses>(pts.begin(), pts.begin() + n));
    CHECK((!prev.all_kperp_positive ? !cur.all_kperp_positive : true));
    CHECK((!prev.all_kperp_below_quarter_s ? !cur.all_kperp_below_quarter_s : true));
    CHECK((!prev.all_scalar_positive ? !cur.all_scalar_positive : true));
    CHECK((!prev.all_r_sums_positive ? !cur.all_r_sums_positive : true));
    CHECK((!prev.plus_positive_everywhere ? !cur.plus_positive_everywhere : true));
    CHECK((!prev.minus_positive_everywhere ? !cur.minus_positive_everywhere : true));
    CHECK((!prev.hypothesis_holds() ? !cur.hypothesis_holds() : true));
    prev = cur;
  }
  // Errored points poison every aggregate.
  const SpectralData sphere = spectra(CurvatureOperator(Mat6::Identity()));
  const PointHypotheses good = point_hypotheses(sphere, kperp_extremes_closed(sphere));
  CHECK(aggregate_hypotheses({good}).hypothesis_holds());
  CHECK(aggregate_hypotheses({good}).dichotomy == Dichotomy::both);
  CHECK(!aggregate_hypotheses({good}, 1).hypothesis_holds());
  CHECK(std::string(dichotomy_name(Dichotomy::plus)) == "plus");
}

TEST_CASE("search converges when extreme eigenvalues nearly coincide") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    // Random eigenframes, λ₁⁺ and λ₂⁺ separated by 1e-3.
    std::normal_distribution<double> n;
    Mat3 r;
    for (int i = 0; i < 9; ++i) r(i) = n(rng);
    const Mat3 qp = Eigen::HouseholderQR<Mat3>(r).householderQ();
    for (int i = 0; i < 9; ++i) r(i) = n(rng);
    const Mat3 qm = Eigen::HouseholderQR<Mat3>(r).householderQ();
    const Mat3 wp = qp * Vec3(-2.0, -2.0 + 1e-3, 4.0 - 1e-3).asDiagonal() * qp.transpose();
    const Mat3 wm = qm * Vec3(-0.2, -0.02, 0.22).asDiagonal() * qm.transpose();
    const Mat3 sc = 2.0 * Mat3::Identity();
    Mat3 b;
    for (int i = 0; i < 9; ++i) b(i) = 0.3 * n(rng);
    const CurvatureOperator op = CurvatureOperator::from_blocks(sc + wp, b, sc + wm);
    const KperpExtremes c = kperp_extremes_closed(spectra(op));
    const KperpExtremes s = kperp_extremes_search(op, SearchBudget{1000, 50, 3, static_cast<std::uint64_t>(t)});
    CHECK(std::fabs(c.kperp1 - s.kperp1) <= 1e-10);
    CHECK(std::fabs(c.kperp3 - s.kperp3) <= 1e-10);
  }
}
