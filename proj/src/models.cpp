#include "curv4/models.hpp"

#include <cmath>
#include <random>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

Expr x(int i) { return Expr::variable(i); }

Box unit_cube(double lo, double hi) { return Box{{lo, lo, lo, lo}, {hi, hi, hi, hi}}; }

double take(Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  const double v = it->second;
  p.erase(it);
  return v;
}

void reject_leftovers(const std::string& model, const Params& p) {
  if (!p.empty()) throw BadParams("unknown parameter '" + p.begin()->first + "' for " + model);
}

int orientation_param(Params& p) {
  const double o = take(p, "orientation", 1.0);
  if (o != 1.0 && o != -1.0) throw BadParams("orientation must be +1 or -1");
  return static_cast<int>(o);
}

Fact fact(std::string q, Relation r, double v, double tol, FactOrigin o) {
  return Fact{std::move(q), r, v, tol, o, true};
}

// Facts shared by every model whose W± spectra are (λ⁺, λ⁻).
void add_spectral_facts(std::vector<Fact>& f, const Vec3& lp, const Vec3& lm, double tol,
                        FactOrigin o) {
  for (int i = 0; i < 3; ++i) {
    f.push_back(fact("lambda_plus_" + std::to_string(i + 1), Relation::equals, lp(i), tol, o));
    f.push_back(fact("lambda_minus_" + std::to_string(i + 1), Relation::equals, lm(i), tol, o));
  }
}

ExprMat4 scalar_metric(const Expr& f) {
  ExprMat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) c[i][j] = i == j ? f : Expr(0.0);
  }
  return c;
}

Expr stereographic_factor(double r, const Expr& sq) {
  const double r2 = r * r;
  const Expr d = Expr(r2) + sq;
  return Expr(4.0 * r2 * r2) / (d * d);
}

ModelGeometry make_flat(Params p) {
  const int o = orientation_param(p);
  reject_leftovers("flat4", p);
  ModelGeometry m;
  m.name = "flat4";
  m.metric = MetricField(scalar_metric(Expr(1.0)), unit_cube(0.0, 1.0), o);
  ExprMat4 w{};
  for (auto& row : w) row.fill(Expr(0.0));
  w[0][1] = Expr(1.0);
  w[2][3] = Expr(1.0);
  m.form = TwoFormField(w);
  const auto e = FactOrigin::elementary;
  m.facts = {fact("scalar", Relation::equals, 0.0, 1e-12, e),
             fact("einstein", Relation::equals, 0.0, 1e-12, e),
             fact("weyl_plus_norm", Relation::equals, 0.0, 1e-12, e),
             fact("weyl_minus_norm", Relation::equals, 0.0, 1e-12, e),
             fact("kperp1", Relation::equals, 0.0, 1e-12, e),
             fact("kperp3", Relation::equals, 0.0, 1e-12, e),
             fact("sectional", Relation::at_least, 0.0, 1e-12, e),
             fact("sectional", Relation::at_most, 0.0, 1e-12, e),
             fact("form_length", Relation::equals, kSqrt2, 1e-12, e),
             fact("form_closed", Relation::equals, 0.0, 1e-12, e)};
  return m;
}

ModelGeometry make_sphere(Params p) {
  const int o = orientation_param(p);
  const double r = take(p, "r", 1.0);
  reject_leftovers("sphere4", p);
  if (!(r > 0.0)) throw BadParams("sphere4 radius must be positive");
  ModelGeometry m;
  m.name = "sphere4";
  m.params = {{"r", r}};
  const Expr sq = x(0) * x(0) + x(1) * x(1) + x(2) * x(2) + x(3) * x(3);
  m.metric = MetricField(scalar_metric(stereographic_factor(r, sq)), unit_cube(-1.0, 1.0), o);
  const double k = 1.0 / (r * r);
  const auto e = FactOrigin::elementary;
  m.facts = {fact("scalar", Relation::equals, 12.0 * k, 1e-9, e),
             fact("einstein", Relation::equals, 3.0 * k, 1e-9, e),
             fact("weyl_plus_norm", Relation::equals, 0.0, 1e-9, e),
             fact("weyl_minus_norm", Relation::equals, 0.0, 1e-9, e),
             fact("kperp1", Relation::equals, k, 1e-8, e),
             fact("kperp3", Relation::equals, k, 1e-8, e),
             fact("sectional", Relation::at_least, k, 1e-8, e),
             fact("sectional", Relation::at_most, k, 1e-8, e)};
  return m;
}

ModelGeometry make_s2xs2(Params p) {
  const int o = orientation_param(p);
  const double r1 = take(p, "r1", 1.0);
  const double r2 = take(p, "r2", 1.0);
  reject_leftovers("s2xs2", p);
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw BadParams("s2xs2 radii must be positive");
  ModelGeometry m;
  m.name = "s2xs2";
  m.params = {{"r1", r1}, {"r2", r2}};
  const Expr f1 = stereographic_factor(r1, x(0) * x(0) + x(1) * x(1));
  const Expr f2 = stereographic_factor(r2, x(2) * x(2) + x(3) * x(3));
  ExprMat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) c[i][j] = Expr(0.0);
  }
  c[0][0] = f1;
  c[1][1] = f1;
  c[2][2] = f2;
  c[3][3] = f2;
  m.metric = MetricField(c, unit_cube(-1.0, 1.0), o);
  ExprMat4 w{};
  for (auto& row : w) row.fill(Expr(0.0));
  w[0][1] = f1;
  w[2][3] = f2;
  m.form = TwoFormField(w);

  // Product of curvatures k1, k2: ℛ = k1 on e12, k2 on e34, 0 elsewhere.
  const double k1 = 1.0 / (r1 * r1), k2 = 1.0 / (r2 * r2), c12 = k1 + k2;
  const Vec3 lam(-c12 / 6.0, -c12 / 6.0, c12 / 3.0);
  const auto d = FactOrigin::derived;
  m.facts = {fact("scalar", Relation::equals, 2.0 * c12, 1e-9, d),
             fact("kperp1", Relation::equals, 0.0, 1e-9, d),
             fact("kperp3", Relation::equals, c12 / 2.0, 1e-9, d),
             fact("kperp3_minus_quarter_s", Relation::equals, 0.0, 1e-9, d),
             fact("sectional", Relation::at_least, 0.0, 1e-9, d),
             fact("sectional", Relation::at_most, std::max(k1, k2), 1e-9, d),
             fact("form_length", Relation::equals, kSqrt2, 1e-9, d),
             fact("form_closed", Relation::equals, 0.0, 1e-9, d)};
  add_spectral_facts(m.facts, lam, lam, 1e-9, d);
  if (r1 == r2) m.facts.push_back(fact("einstein", Relation::equals, k1, 1e-9, d));
  return m;
}

ModelGeometry make_fubini_study(Params p) {
  const int o = orientation_param(p);
  reject_leftovers("fubini_study", p);
  ModelGeometry m;
  m.name = "fubini_study";
  m.metric = MetricField(fubini_study_components(), unit_cube(-1.0, 1.0), o);
  m.form = TwoFormField(fubini_study_kahler_components());
  const auto d = FactOrigin::derived;
  const auto q = FactOrigin::quoted;
  const Vec3 kahler_side(-2.0, -2.0, 4.0);
  const Vec3 zero = Vec3::Zero();
  m.facts = {fact("scalar", Relation::equals, 24.0, 1e-6, d),
             fact("einstein", Relation::equals, 6.0, 1e-8, q),
             fact("kperp1", Relation::equals, 1.0, 1e-5, d),
             fact("kperp3", Relation::equals, 4.0, 1e-5, d),
             fact("sectional", Relation::at_least, 1.0, 1e-6, q),
             fact("sectional", Relation::at_most, 4.0, 1e-6, q),
             fact("form_length", Relation::equals, kSqrt2, 1e-8, d),
             fact("form_closed", Relation::equals, 0.0, 1e-9, d)};
  // The Kähler form is self-dual for the complex orientation; flipping the
  // orientation exchanges the two halves of the spectrum.
  if (o > 0) {
    add_spectral_facts(m.facts, kahler_side, zero, 1e-6, d);
  } else {
    add_spectral_facts(m.facts, zero, kahler_side, 1e-6, d);
  }
  Fact vol = fact("volume", Relation::equals, M_PI * M_PI / 2.0, 0.0, q);
  vol.verifiable = false;
  m.facts.push_back(vol);
  return m;
}

ModelGeometry make_fs_perturbed(Params p) {
  const int o = orientation_param(p);
  const double t = take(p, "t", 0.0);
  reject_leftovers("fs_perturbed", p);
  ModelGeometry m = fs_perturbed(reference_bump(), t);
  m.metric = m.metric.with_orientation(o);
  return m;
}

}  // namespace

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::equals: return "equals";
    case Relation::at_least: return "at_least";
    case Relation::at_most: return "at_most";
  }
  return "?";
}

const char* origin_name(FactOrigin o) {
  switch (o) {
    case FactOrigin::quoted: return "quoted";
    case FactOrigin::derived: return "derived";
    case FactOrigin::elementary: return "elementary";
  }
  return "?";
}

ExprMat4 fubini_study_components() {
  // g_ij = ((1+r²)δ_ij − a_i a_j − b_i b_j)/(1+r²)², a = x, b = Jx.
  const std::array<Expr, 4> a = {x(0), x(1), x(2), x(3)};
  const std::array<Expr, 4> b = {-x(1), x(0), -x(3), x(2)};
  const Expr d = Expr(1.0) + x(0) * x(0) + x(1) * x(1) + x(2) * x(2) + x(3) * x(3);
  const Expr d2 = d * d;
  ExprMat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      Expr num = -(a[i] * a[j]) - b[i] * b[j];
      if (i == j) num = d + num;
      c[i][j] = num / d2;
    }
  }
  return c;
}

ExprMat4 fubini_study_kahler_components() {
  // ω_ij = g(J∂_i, ∂_j).
  const ExprMat4 g = fubini_study_components();
  auto G = [&](int i, int j) { return i <= j ? g[i][j] : g[j][i]; };
  ExprMat4 w{};
  for (auto& row : w) row.fill(Expr(0.0));
  w[0][1] = G(1, 1);
  w[0][2] = G(1, 2);
  w[0][3] = G(1, 3);
  w[1][2] = -G(0, 2);
  w[1][3] = -G(0, 3);
  w[2][3] = G(3, 3);
  return w;
}

ExprMat4 reference_bump() {
  const Expr beta = exp(Expr(-4.0) * (x(0) * x(0) + x(1) * x(1) + x(2) * x(2) + x(3) * x(3)));
  ExprMat4 h{};
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) h[i][j] = Expr(0.0);
  }
  h[0][0] = beta;
  h[1][1] = -beta;
  h[2][2] = beta;
  h[3][3] = -beta;
  h[0][2] = Expr(0.5) * x(1) * beta;
  return h;
}

ModelGeometry fs_perturbed(const ExprMat4& h, double t) {
  if (!(std::fabs(t) < fs_perturbation_t_max)) {
    throw BadParams("|t| must be below " + std::to_string(fs_perturbation_t_max));
  }
  const ExprMat4 fs = fubini_study_components();
  ExprMat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) c[i][j] = t == 0.0 ? fs[i][j] : fs[i][j] + Expr(t) * h[i][j];
  }
  ModelGeometry m;
  m.name = "fs_perturbed";
  m.params = {{"t", t}};
  m.metric = MetricField(c, unit_cube(-1.0, 1.0), +1);
  return m;
}

std::vector<std::string> builtin_names() {
  return {"flat4", "sphere4", "fubini_study", "s2xs2", "fs_perturbed"};
}

ModelGeometry builtin(const std::string& name, const Params& params) {
  if (name == "flat4") return make_flat(params);
  if (name == "sphere4") return make_sphere(params);
  if (name == "fubini_study") return make_fubini_study(params);
  if (name == "s2xs2") return make_s2xs2(params);
  if (name == "fs_perturbed") return make_fs_perturbed(params);
  throw UnknownModel("unknown model '" + name + "'");
}

std::vector<Point> grid_points(const Box& box, int n) {
  if (n < 1) throw BadParams("grid size must be at least 1");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n) * n * n * n);
  auto coord = [&](int axis, int i) {
    return box.lo[axis] + (i + 0.5) * (box.hi[axis] - box.lo[axis]) / n;
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) pts.push_back({coord(0, a), coord(1, b), coord(2, c), coord(3, d)});
      }
    }
  }
  return pts;
}

std::vector<Point> random_points(const Box& box, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(count);
  for (auto& p : pts) {
    for (int k = 0; k < 4; ++k) p[k] = box.lo[k] + u(rng) * (box.hi[k] - box.lo[k]);
  }
  return pts;
}

Box bounding_box(const Domain& d) {
  if (const Box* b = std::get_if<Box>(&d)) return *b;
  const Ball& ball = std::get<Ball>(d);
  Box b;
  for (int k = 0; k < 4; ++k) {
    b.lo[k] = ball.center[k] - ball.radius;
    b.hi[k] = ball.center[k] + ball.radius;
  }
  return b;
}

namespace {

struct PointQuantities {
  CurvaturePoint cp;
  SpectralData sd;
  double kperp1 = 0.0, kperp3 = 0.0;
  double sect_min = 0.0, sect_max = 0.0;
  double form_length = 0.0, form_d = 0.0;
};

double quantity_value(const std::string& q, const Fact& f, const PointQuantities& pq) {
  if (q == "scalar") return pq.sd.s;
  if (q == "einstein") return (pq.cp.ricci - f.value * Mat4::Identity()).cwiseAbs().maxCoeff();
  if (q == "weyl_plus_norm") return pq.sd.weyl_plus.norm();
  if (q == "weyl_minus_norm") return pq.sd.weyl_minus.norm();
  if (q == "kperp1") return pq.kperp1;
  if (q == "kperp3") return pq.kperp3;
  if (q == "kperp3_minus_quarter_s") return pq.kperp3 - pq.sd.s / 4.0;
  if (q == "sectional") return f.relation == Relation::at_most ? pq.sect_max : pq.sect_min;
  if (q == "form_length") return pq.form_length;
  if (q == "form_closed") return pq.form_d;
  for (int i = 0; i < 3; ++i) {
    if (q == "lambda_plus_" + std::to_string(i + 1)) return pq.sd.lambda_plus(i);
    if (q == "lambda_minus_" + std::to_string(i + 1)) return pq.sd.lambda_minus(i);
  }
  throw Error("unknown fact quantity '" + q + "'");
}

double deviation(const Fact& f, double observed) {
  // einstein reports its own deviation from c·g.
  if (f.quantity == "einstein") return observed;
  switch (f.relation) {
    case Relation::equals: return std::fabs(observed - f.value);
    case Relation::at_least: return std::max(0.0, f.value - observed);
    case Relation::at_most: return std::max(0.0, observed - f.value);
  }
  return 0.0;
}

}  // namespace

FactReport verify_facts(const ModelGeometry& m, std::span<const Point> points, std::uint64_t seed,
                        int planes_per_point) {
  FactReport rep;
  for (const Fact& f : m.facts) {
    FactResult r;
    r.fact = f;
    rep.results.push_back(r);
  }
  std::mt19937_64 rng(seed);
  for (const Point& p : points) {
    PointQuantities pq;
    pq.cp = riemann(m.metric, p);
    const CurvatureOperator op = curvature_operator(pq.cp);
    pq.sd = spectra(op);
    std::tie(pq.kperp1, pq.kperp3) = kperp_closed_values(pq.sd);
    std::vector<Plane> planes(static_cast<std::size_t>(std::max(1, planes_per_point)));
    for (auto& pl : planes) pl = random_plane(rng);
    const std::vector<double> k = sectional_batch(op, planes);
    pq.sect_min = *std::min_element(k.begin(), k.end());
    pq.sect_max = *std::max_element(k.begin(), k.end());
    if (m.form) {
      const Mat4 gi = pq.cp.metric.inverse();
      pq.form_length = form2_norm(gi, m.form->values(p));
      pq.form_d = form3_norm(gi, exterior_d(*m.form, p));
    }
    for (FactResult& r : rep.results) {
      if (!r.fact.verifiable) continue;
      const double obs = quantity_value(r.fact.quantity, r.fact, pq);
      const double dev = deviation(r.fact, obs);
      if (!r.checked || dev > r.worst_deviation) {
        r.worst_deviation = dev;
        r.observed = obs;
        r.worst_point = p;
      }
      r.checked = true;
    }
  }
  for (FactResult& r : rep.results) {
    r.passed = r.checked && r.worst_deviation <= r.fact.tolerance;
    if (r.fact.verifiable && !r.passed) rep.all_passed = false;
  }
  return rep;
}

PerturbationReport perturbation_threshold(const ExprMat4& h, std::uint64_t seed, int n_points,
                                          int planes_per_point, int dyadic_levels) {
  PerturbationReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  // Points where the reference bump is active.
  const std::vector<Point> pts = random_points(unit_cube(-0.5, 0.5), static_cast<std::size_t>(n_points), rng());
  std::vector<std::vector<Plane>> planes(pts.size());
  for (auto& ps : planes) {
    ps.resize(static_cast<std::size_t>(planes_per_point));
    for (auto& pl : ps) pl = random_plane(rng);
  }
  rep.pairs = pts.size() * static_cast<std::size_t>(planes_per_point);

  auto min_kperp = [&](double t) {
    const ModelGeometry m = fs_perturbed(h, t);
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const CurvatureOperator op = curvature_operator(riemann(m.metric, pts[i]));
      for (double v : biorthogonal_batch(op, planes[i])) lo = std::min(lo, v);
    }
    return lo;
  };

  rep.unperturbed_min = min_kperp(0.0);
  const double bar = 0.5 * rep.unperturbed_min;
  double t = 0.5;
  for (int k = 0; k < dyadic_levels; ++k, t *= 0.5) {
    PerturbationRow row;
    row.t = t;
    row.min_plus = min_kperp(t);
    row.min_minus = min_kperp(-t);
    row.passed = row.min_plus >= bar && row.min_minus >= bar;
    rep.rows.push_back(row);
  }
  // Largest t whose row and every smaller row pass.
  for (auto it = rep.rows.rbegin(); it != rep.rows.rend() && it->passed; ++it) rep.threshold = it->t;
  if (rep.threshold > 0.0) {
    const double half = 0.5 * rep.threshold;
    rep.min_at_half_threshold = std::min(min_kperp(half), min_kperp(-half));
  }
  return rep;
}

}  // namespace curv4
