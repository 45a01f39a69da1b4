#include "curv4/biortho.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "curv4/errors.hpp"
#include "curv4/kernels.hpp"

namespace curv4 {

void validate(const Plane& p, double tol) {
  if (std::fabs(p.u.norm() - 1.0) > tol || std::fabs(p.v.norm() - 1.0) > tol ||
      std::fabs(p.u.dot(p.v)) > tol) {
    throw DegeneratePlane("plane vectors are not orthonormal");
  }
}

Plane random_plane(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    Vec4 a, b;
    for (int i = 0; i < 4; ++i) a(i) = n(rng);
    for (int i = 0; i < 4; ++i) b(i) = n(rng);
    const double na = a.norm();
    if (na < 1e-12) continue;
    a /= na;
    b -= a.dot(b) * a;
    const double nb = b.norm();
    if (nb < 1e-12) continue;
    return {a, b / nb};
  }
}

double sectional(const CurvatureOperator& op, const Plane& p) {
  validate(p);
  const TwoFormPoint x = TwoFormPoint::wedge_of(p.u, p.v);
  return op.apply(x, x);
}

Plane orthogonal_plane(const Plane& p) {
  validate(p);
  // ⋆(u∧v) is the unit area form of P⊥ with the orientation completing (u, v).
  const auto [a, b] = decompose_simple(hodge_star(TwoFormPoint::wedge_of(p.u, p.v)), 1e-6);
  return {a, b};
}

double biorthogonal(const CurvatureOperator& op, const Plane& p) {
  validate(p);
  const TwoFormPoint x = TwoFormPoint::wedge_of(p.u, p.v);
  const TwoFormPoint y = hodge_star(x);
  return 0.5 * (op.apply(x, x) + op.apply(y, y));
}

Mat6 biorthogonal_quadric(const CurvatureOperator& op) {
  const Mat6 s = star_matrix();
  const Mat6 m = 0.5 * (op.matrix() + op.matrix().transpose());
  return 0.5 * (m + s * m * s);
}

namespace {

kernels::Quadric6 to_quadric(const Mat6& m) {
  kernels::Quadric6 q;
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) q[a * 6 + b] = m(a, b);
  }
  return q;
}

struct PlaneSoA {
  explicit PlaneSoA(std::size_t n) {
    for (auto& c : u) c.resize(n);
    for (auto& c : v) c.resize(n);
  }
  void set(std::size_t i, const Plane& p) {
    for (int k = 0; k < 4; ++k) {
      u[k][i] = p.u(k);
      v[k][i] = p.v(k);
    }
  }
  kernels::PlaneBatch batch() const {
    kernels::PlaneBatch b;
    for (int k = 0; k < 4; ++k) {
      b.u[k] = u[k];
      b.v[k] = v[k];
    }
    return b;
  }
  std::array<std::vector<double>, 4> u, v;
};

std::vector<double> batch_forms(const Mat6& q, std::span<const Plane> planes) {
  PlaneSoA soa(planes.size());
  for (std::size_t i = 0; i < planes.size(); ++i) soa.set(i, planes[i]);
  std::vector<double> out(planes.size());
  kernels::plane_quadratic_forms(to_quadric(q), soa.batch(), out);
  return out;
}

double quad(const Mat6& q, const Vec4& u, const Vec4& v) {
  const Vec6 x = TwoFormPoint::wedge_of(u, v).coefficients();
  return x.dot(q * x);
}

constexpr double kPi = 3.14159265358979323846;

// Minimizes sign·K⊥ along the rotation of frame[a] toward frame[b]; returns
// the optimal angle. The objective is a + b cos 2θ + c sin 2θ, so a coarse
// scan over one period followed by golden section on a bracket narrower than
// the basin is exact up to the section tolerance.
double line_minimize(const Mat6& q, double sign, const std::array<Vec4, 4>& f, int a, int b) {
  const int other = 1 - a;
  auto objective = [&](double t) {
    const Vec4 moved = std::cos(t) * f[a] + std::sin(t) * f[b];
    return a == 0 ? sign * quad(q, moved, f[other]) : sign * quad(q, f[other], moved);
  };
  constexpr int kScan = 8;
  double best_t = 0.0;
  double best_f = objective(0.0);
  for (int k = 1; k < kScan; ++k) {
    const double t = -kPi / 2 + k * kPi / kScan;
    const double val = objective(t);
    if (val < best_f) {
      best_f = val;
      best_t = t;
    }
  }
  constexpr double kInvPhi = 0.61803398874989484820;
  double lo = best_t - kPi / kScan;
  double hi = best_t + kPi / kScan;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  while (hi - lo > 1e-11) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double t = 0.5 * (lo + hi);
  return objective(t) < objective(0.0) ? t : 0.0;
}

// Newton steps in the graph chart span(u + θ0 w1 + θ1 w2, v + θ2 w1 + θ3 w2)
// around the current plane, w = (w1, w2) spanning P⊥. With Y the four first-
// order bivectors and z = w1∧w2, all orthonormal to u∧v,
//   f(θ) = f0 + 2 gᵀθ + θᵀHθ + O(|θ|³),
//   g = Yᵀ Q x0,  H = YᵀQY − f0 I + (x0ᵀQz) S,  θᵀSθ = 2(θ0θ3 − θ1θ2).
// Coordinate sweeps stall where two eigenvalues nearly coincide, and can sit
// on saddles whose descent direction mixes several rotations.
Plane newton_polish(const Mat6& q, double sign, Plane p) {
  const Mat6 qs = sign * q;
  double current = quad(qs, p.u, p.v);
  for (int it = 0; it < 30; ++it) {
    const Plane w = orthogonal_plane(p);
    const Vec6 x0 = TwoFormPoint::wedge_of(p.u, p.v).coefficients();
    Eigen::Matrix<double, 6, 4> y;
    y.col(0) = TwoFormPoint::wedge_of(w.u, p.v).coefficients();
    y.col(1) = TwoFormPoint::wedge_of(w.v, p.v).coefficients();
    y.col(2) = TwoFormPoint::wedge_of(p.u, w.u).coefficients();
    y.col(3) = TwoFormPoint::wedge_of(p.u, w.v).coefficients();
    const Vec6 z = TwoFormPoint::wedge_of(w.u, w.v).coefficients();
    const Eigen::Vector4d g = y.transpose() * (qs * x0);
    Eigen::Matrix4d h = y.transpose() * qs * y - current * Eigen::Matrix4d::Identity();
    const double c = x0.dot(qs * z);
    h(0, 3) += c;
    h(3, 0) += c;
    h(1, 2) -= c;
    h(2, 1) -= c;
    auto step = [&](const Eigen::Vector4d& theta) {
      Vec4 u = p.u + theta(0) * w.u + theta(1) * w.v;
      Vec4 v = p.v + theta(2) * w.u + theta(3) * w.v;
      u.normalize();
      v = (v - v.dot(u) * u).normalized();
      return Plane{u, v};
    };
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (es.eigenvalues()(0) < -1e-12 * scale) {
      // Saddle or maximum: move along the most negative curvature direction.
      const Eigen::Vector4d d = es.eigenvectors().col(0);
      bool moved = false;
      for (double a = 1.0; a > 1e-6 && !moved; a *= 0.5) {
        for (double sgn : {1.0, -1.0}) {
          const Plane cand = step(sgn * a * d);
          const double next = quad(qs, cand.u, cand.v);
          if (next < current) {
            p = cand;
            current = next;
            moved = true;
            break;
          }
        }
      }
      if (!moved) break;
      continue;
    }
    if (g.norm() <= 1e-15 * std::max(1.0, std::fabs(current))) break;
    if (es.eigenvalues()(0) <= 0.0) break;
    const Eigen::Vector4d theta = -(es.eigenvectors() *
                                    (es.eigenvectors().transpose() * g).cwiseQuotient(es.eigenvalues()));
    const Plane cand = step(theta);
    const double next = quad(qs, cand.u, cand.v);
    if (!(next < current)) break;
    p = cand;
    current = next;
  }
  return p;
}

// Local refinement of sign·K⊥ from a starting plane; returns the plane.
Plane refine(const Mat6& q, double sign, const Plane& start, int sweeps) {
  const Plane perp = orthogonal_plane(start);
  std::array<Vec4, 4> f = {start.u, start.v, perp.u, perp.v};
  double current = sign * quad(q, f[0], f[1]);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double before = current;
    for (int a = 0; a < 2; ++a) {
      for (int b = 2; b < 4; ++b) {
        const double t = line_minimize(q, sign, f, a, b);
        if (t == 0.0) continue;
        const Vec4 fa = std::cos(t) * f[a] + std::sin(t) * f[b];
        const Vec4 fb = -std::sin(t) * f[a] + std::cos(t) * f[b];
        f[a] = fa;
        f[b] = fb;
      }
    }
    // Keep the frame orthonormal against drift.
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < i; ++j) f[i] -= f[j].dot(f[i]) * f[j];
      f[i].normalize();
    }
    current = sign * quad(q, f[0], f[1]);
    if (before - current <= 1e-15 * std::max(1.0, std::fabs(current))) break;
  }
  return newton_polish(q, sign, {f[0], f[1]});
}

}  // namespace

std::vector<double> sectional_batch(const CurvatureOperator& op, std::span<const Plane> planes) {
  return batch_forms(0.5 * (op.matrix() + op.matrix().transpose()), planes);
}

std::vector<double> biorthogonal_batch(const CurvatureOperator& op, std::span<const Plane> planes) {
  return batch_forms(biorthogonal_quadric(op), planes);
}

std::pair<double, double> kperp_closed_values(const SpectralData& sd) {
  return {0.5 * (sd.s / 6.0 + sd.lambda_plus(0) + sd.lambda_minus(0)),
          0.5 * (sd.s / 6.0 + sd.lambda_plus(2) + sd.lambda_minus(2))};
}

KperpExtremes kperp_extremes_closed(const SpectralData& sd) {
  KperpExtremes kx;
  std::tie(kx.kperp1, kx.kperp3) = kperp_closed_values(sd);
  const Mat4 fmin = frame_from_eigenforms(sd.forms_plus[0], sd.forms_minus[0]);
  const Mat4 fmax = frame_from_eigenforms(sd.forms_plus[2], sd.forms_minus[2]);
  kx.argmin = {fmin.col(0), fmin.col(1)};
  kx.argmax = {fmax.col(0), fmax.col(1)};
  return kx;
}

KperpExtremes kperp_extremes_search(const CurvatureOperator& op, const SearchBudget& budget) {
  const Mat6 q = biorthogonal_quadric(op);
  std::mt19937_64 rng(budget.seed);
  const auto n = static_cast<std::size_t>(std::max(1, budget.n_samples));
  std::vector<Plane> planes(n);
  for (auto& p : planes) p = random_plane(rng);
  const std::vector<double> values = batch_forms(q, planes);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const std::size_t starts = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, budget.n_starts)));

  KperpExtremes kx;
  kx.kperp1 = std::numeric_limits<double>::infinity();
  kx.kperp3 = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < starts; ++k) {
    const Plane lo = refine(q, +1.0, planes[order[k]], budget.n_refinements);
    const double vlo = quad(q, lo.u, lo.v);
    if (vlo < kx.kperp1) {
      kx.kperp1 = vlo;
      kx.argmin = lo;
    }
    const Plane hi = refine(q, -1.0, planes[order[n - 1 - k]], budget.n_refinements);
    const double vhi = quad(q, hi.u, hi.v);
    if (vhi > kx.kperp3) {
      kx.kperp3 = vhi;
      kx.argmax = hi;
    }
  }
  return kx;
}

const char* dichotomy_name(Dichotomy d) {
  switch (d) {
    case Dichotomy::none: return "none";
    case Dichotomy::plus: return "plus";
    case Dichotomy::minus: return "minus";
    case Dichotomy::both: return "both";
  }
  return "?";
}

PointHypotheses point_hypotheses(const SpectralData& sd, const KperpExtremes& kx,
                                 std::optional<double> margin) {
  PointHypotheses h;
  h.s = sd.s;
  h.lambda_plus = sd.lambda_plus;
  h.lambda_minus = sd.lambda_minus;
  h.kperp1 = kx.kperp1;
  h.kperp3 = kx.kperp3;
  const double tau = margin ? *margin : default_margin(sd.s);
  h.margin = tau;

  h.kperp_positive = kx.kperp1 > tau;
  h.kperp_below_quarter_s = sd.s / 4.0 - kx.kperp3 > tau;
  h.scalar_positive = sd.s > tau;
  h.min_r_sum = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) h.min_r_sum = std::min(h.min_r_sum, sd.r_plus(i) + sd.r_minus(j));
  }
  h.r_sums_positive = h.min_r_sum > tau;
  h.sum_gap = 2.0 * sd.s / 3.0 - 2.0 * sd.lambda_plus(2) - 2.0 * sd.lambda_minus(2);
  h.top_plus_positive = sd.s / 3.0 - 2.0 * sd.lambda_plus(2) > tau;
  h.top_minus_positive = sd.s / 3.0 - 2.0 * sd.lambda_minus(2) > tau;
  h.plus = positivity_check(sd.s, sd.weyl_plus, tau);
  h.minus = positivity_check(sd.s, sd.weyl_minus, tau);

  if (h.kperp_positive && !h.kperp_below_quarter_s) {
    h.consistency_errors.emplace_back("K_perp_1 > 0 but K_perp_3 >= s/4");
  }
  if (h.kperp_positive && !h.scalar_positive) {
    h.consistency_errors.emplace_back("K_perp_1 > 0 but s <= 0");
  }
  if (h.kperp_below_quarter_s && !h.scalar_positive) {
    h.consistency_errors.emplace_back("K_perp_3 < s/4 but s <= 0");
  }
  if (h.kperp_below_quarter_s && !h.r_sums_positive) {
    h.consistency_errors.emplace_back("K_perp_3 < s/4 but some r+_i + r-_j <= 0");
  }
  if (h.sum_gap > tau && !(h.top_plus_positive || h.top_minus_positive)) {
    h.consistency_errors.emplace_back("2s/3 - 2l3+ - 2l3- > 0 but neither s/3 - 2l3 is positive");
  }
  return h;
}

HypothesisReport aggregate_hypotheses(std::vector<PointHypotheses> points, std::size_t errored) {
  if (points.empty() && errored == 0) throw EmptySample("no sample points");
  HypothesisReport r;
  r.points = std::move(points);
  r.errored_points = errored;
  const bool clean = errored == 0;
  r.all_kperp_positive = clean;
  r.all_kperp_below_quarter_s = clean;
  r.all_scalar_positive = clean;
  r.all_r_sums_positive = clean;
  r.plus_positive_everywhere = clean;
  r.minus_positive_everywhere = clean;
  for (const auto& h : r.points) {
    r.all_kperp_positive = r.all_kperp_positive && h.kperp_positive;
    r.all_kperp_below_quarter_s = r.all_kperp_below_quarter_s && h.kperp_below_quarter_s;
    r.all_scalar_positive = r.all_scalar_positive && h.scalar_positive;
    r.all_r_sums_positive = r.all_r_sums_positive && h.r_sums_positive;
    r.plus_positive_everywhere = r.plus_positive_everywhere && h.plus.positive;
    r.minus_positive_everywhere = r.minus_positive_everywhere && h.minus.positive;
    r.consistency_failures += h.consistency_errors.size();
  }
  if (r.plus_positive_everywhere && r.minus_positive_everywhere) {
    r.dichotomy = Dichotomy::both;
  } else if (r.plus_positive_everywhere) {
    r.dichotomy = Dichotomy::plus;
  } else if (r.minus_positive_everywhere) {
    r.dichotomy = Dichotomy::minus;
  }
  return r;
}

HypothesisReport hypothesis_report(std::span<const std::pair<SpectralData, KperpExtremes>> points,
                                   std::optional<double> margin, std::size_t errored) {
  std::vector<PointHypotheses> hs;
  hs.reserve(points.size());
  for (const auto& [sd, kx] : points) hs.push_back(point_hypotheses(sd, kx, margin));
  return aggregate_hypotheses(std::move(hs), errored);
}

}  // namespace curv4
