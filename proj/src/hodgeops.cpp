#include "curv4/hodgeops.hpp"

#include <cmath>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {

Mat4 value_of(const JetMat4& m) {
  Mat4 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) r(i, j) = m[i][j].v;
  }
  return r;
}

Jet zero_jet() { return Jet(0.0, 2); }

}  // namespace

OneFormField::OneFormField(const std::array<Expr, 4>& components) {
  auto c = std::make_shared<std::array<DifferentiatedExpr, 4>>();
  for (int i = 0; i < 4; ++i) (*c)[i] = DifferentiatedExpr(components[i]);
  comps_ = std::move(c);
}

const Expr& OneFormField::component(int i) const { return (*comps_)[i].expr(); }

Vec4 OneFormField::values(const Point& p) const {
  Vec4 v;
  for (int i = 0; i < 4; ++i) v(i) = (*comps_)[i].eval(p);
  return v;
}

Form1Jets OneFormField::jets(const Point& p) const {
  Form1Jets r;
  for (int i = 0; i < 4; ++i) r[i] = (*comps_)[i].jet(p);
  return r;
}

int TwoFormField::slot(int i, int j) {
  // (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
  static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[i][j];
}

TwoFormField::TwoFormField(const ExprMat4& components) {
  auto c = std::make_shared<std::array<DifferentiatedExpr, 6>>();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) (*c)[slot(i, j)] = DifferentiatedExpr(components[i][j]);
  }
  comps_ = std::move(c);
}

Expr TwoFormField::component(int i, int j) const {
  if (i == j) return Expr(0.0);
  const Expr& e = (*comps_)[slot(i, j)].expr();
  return i < j ? e : -e;
}

Mat4 TwoFormField::values(const Point& p) const {
  Mat4 w = Mat4::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      w(i, j) = (*comps_)[slot(i, j)].eval(p);
      w(j, i) = -w(i, j);
    }
  }
  return w;
}

Form2Jets TwoFormField::jets(const Point& p) const {
  Form2Jets w;
  for (int i = 0; i < 4; ++i) w[i][i] = zero_jet();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      w[i][j] = (*comps_)[slot(i, j)].jet(p);
      w[j][i] = -w[i][j];
    }
  }
  return w;
}

TwoFormField TwoFormField::scaled(const Expr& factor) const {
  ExprMat4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) c[i][j] = factor * (*comps_)[slot(i, j)].expr();
  }
  return TwoFormField(c);
}

int levi_civita(int i, int j, int k, int l) {
  if (i == j || i == k || i == l || j == k || j == l || k == l) return 0;
  const int a[4] = {i, j, k, l};
  int inversions = 0;
  for (int x = 0; x < 4; ++x) {
    for (int y = x + 1; y < 4; ++y) inversions += a[x] > a[y];
  }
  return inversions % 2 == 0 ? 1 : -1;
}

Form2Jets d_form1(const Form1Jets& a) {
  Form2Jets r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) r[i][j] = a[j].partial(i) - a[i].partial(j);
  }
  return r;
}

Form3Jets d_form2(const Form2Jets& w) {
  Form3Jets r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) r[i][j][k] = w[j][k].partial(i) + w[k][i].partial(j) + w[i][j].partial(k);
    }
  }
  return r;
}

Form3Jets star_form1(const Form1Jets& a, const MetricJets& m, int orientation) {
  Form1Jets up;
  for (int i = 0; i < 4; ++i) {
    up[i] = m.inverse[i][0] * a[0];
    for (int k = 1; k < 4; ++k) up[i] += m.inverse[i][k] * a[k];
  }
  const Jet vol = static_cast<double>(orientation) * m.sqrt_det;
  Form3Jets r;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      for (int l = 0; l < 4; ++l) {
        Jet acc(0.0, up[0].order);
        for (int i = 0; i < 4; ++i) {
          const int e = levi_civita(i, j, k, l);
          if (e != 0) acc += static_cast<double>(e) * up[i];
        }
        r[j][k][l] = vol * acc;
      }
    }
  }
  return r;
}

Form2Jets star_form2(const Form2Jets& w, const MetricJets& m, int orientation) {
  // α^{ij} = g^{ia} g^{jb} α_ab, one index at a time.
  Form2Jets half, up;
  for (int i = 0; i < 4; ++i) {
    for (int b = 0; b < 4; ++b) {
      half[i][b] = m.inverse[i][0] * w[0][b];
      for (int a = 1; a < 4; ++a) half[i][b] += m.inverse[i][a] * w[a][b];
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      up[i][j] = half[i][0] * m.inverse[j][0];
      for (int b = 1; b < 4; ++b) up[i][j] += half[i][b] * m.inverse[j][b];
    }
  }
  const Jet vol = (0.5 * orientation) * m.sqrt_det;
  Form2Jets r;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      Jet acc(0.0, up[0][0].order);
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const int e = levi_civita(i, j, k, l);
          if (e != 0) acc += static_cast<double>(e) * up[i][j];
        }
      }
      r[k][l] = vol * acc;
    }
  }
  return r;
}

Form1Jets star_form3(const Form3Jets& b, const MetricJets& m, int orientation) {
  Form3Jets t1, t2, up;
  for (int i = 0; i < 4; ++i) {
    for (int y = 0; y < 4; ++y) {
      for (int z = 0; z < 4; ++z) {
        t1[i][y][z] = m.inverse[i][0] * b[0][y][z];
        for (int a = 1; a < 4; ++a) t1[i][y][z] += m.inverse[i][a] * b[a][y][z];
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int z = 0; z < 4; ++z) {
        t2[i][j][z] = m.inverse[j][0] * t1[i][0][z];
        for (int a = 1; a < 4; ++a) t2[i][j][z] += m.inverse[j][a] * t1[i][a][z];
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        up[i][j][k] = m.inverse[k][0] * t2[i][j][0];
        for (int a = 1; a < 4; ++a) up[i][j][k] += m.inverse[k][a] * t2[i][j][a];
      }
    }
  }
  const Jet vol = (static_cast<double>(orientation) / 6.0) * m.sqrt_det;
  Form1Jets r;
  for (int l = 0; l < 4; ++l) {
    Jet acc(0.0, up[0][0][0].order);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
          const int e = levi_civita(i, j, k, l);
          if (e != 0) acc += static_cast<double>(e) * up[i][j][k];
        }
      }
    }
    r[l] = vol * acc;
  }
  return r;
}

Mat4 hodge_star_coordinates(const Mat4& g, const Mat4& alpha, int orientation) {
  const Mat4 gi = g.inverse();
  const Mat4 up = gi * alpha * gi.transpose();
  const double vol = 0.5 * orientation * std::sqrt(g.determinant());
  Mat4 r = Mat4::Zero();
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      double acc = 0.0;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) acc += levi_civita(i, j, k, l) * up(i, j);
      }
      r(k, l) = vol * acc;
    }
  }
  return r;
}

double form1_norm(const Mat4& g_inv, const Vec4& a) { return std::sqrt(std::max(0.0, a.dot(g_inv * a))); }

double form2_norm(const Mat4& g_inv, const Mat4& w) {
  const Mat4 up = g_inv * w * g_inv;
  return std::sqrt(std::max(0.0, 0.5 * (w.array() * up.array()).sum()));
}

double form3_norm(const Mat4& g_inv, const Tensor3& b) {
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        double up = 0.0;
        for (int a = 0; a < 4; ++a) {
          for (int c = 0; c < 4; ++c) {
            for (int e = 0; e < 4; ++e) up += g_inv(i, a) * g_inv(j, c) * g_inv(k, e) * b[a][c][e];
          }
        }
        acc += b[i][j][k] * up;
      }
    }
  }
  return std::sqrt(std::max(0.0, acc / 6.0));
}

TwoFormPoint to_frame(const Mat4& frame, const Mat4& w) {
  return TwoFormPoint::from_matrix(frame.transpose() * w * frame);
}

Mat4 from_frame(const Mat4& frame, const TwoFormPoint& w) {
  const Mat4 inv = frame.inverse();
  return inv.transpose() * w.matrix() * inv;
}

Tensor3 exterior_d(const TwoFormField& w, const Point& p) {
  const Form3Jets d = d_form2(w.jets(p));
  Tensor3 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) r[i][j][k] = d[i][j][k].v;
    }
  }
  return r;
}

Tensor3 exterior_dd(const OneFormField& a, const Point& p) {
  const Form3Jets d = d_form2(d_form1(a.jets(p)));
  Tensor3 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) r[i][j][k] = d[i][j][k].v;
    }
  }
  return r;
}

namespace {

Form1Jets codifferential_jets(const Form2Jets& w, const MetricJets& m, int o) {
  Form1Jets r = star_form3(d_form2(star_form2(w, m, o)), m, o);
  for (auto& c : r) c *= -1.0;
  return r;
}

Form2Jets codifferential_jets(const Form3Jets& b, const MetricJets& m, int o) {
  Form2Jets r = star_form2(d_form1(star_form3(b, m, o)), m, o);
  for (auto& row : r) {
    for (auto& c : row) c *= -1.0;
  }
  return r;
}

Mat4 laplacian_values(const Form2Jets& w, const MetricJets& m, int o) {
  const Form2Jets a = d_form1(codifferential_jets(w, m, o));
  const Form2Jets b = codifferential_jets(d_form2(w), m, o);
  Mat4 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) r(i, j) = a[i][j].v + b[i][j].v;
  }
  return r;
}

using Tensor3Jets = std::array<std::array<std::array<Jet, 4>, 4>, 4>;

Tensor3Jets nabla_jets(const Form2Jets& w, const MetricJets& m) {
  const auto& G = m.gamma;
  Tensor3Jets t;
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        Jet acc = w[i][j].partial(k);
        for (int n = 0; n < 4; ++n) {
          acc -= G[n][k][i] * w[n][j];
          acc -= G[n][k][j] * w[i][n];
        }
        t[k][i][j] = acc;
      }
    }
  }
  return t;
}

// ∇*∇ω = −g^{kl}(∂_l T_kij − Γ^n_lk T_nij − Γ^n_li T_knj − Γ^n_lj T_kin).
Mat4 rough_values(const Tensor3Jets& t, const MetricJets& m) {
  const auto& G = m.gamma;
  Mat4 r = Mat4::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
          double s2 = t[k][i][j].d[l];
          for (int n = 0; n < 4; ++n) {
            s2 -= G[n][l][k].v * t[n][i][j].v + G[n][l][i].v * t[k][n][j].v +
                  G[n][l][j].v * t[k][i][n].v;
          }
          acc += m.inverse[k][l].v * s2;
        }
      }
      r(i, j) = -acc;
    }
  }
  return r;
}

struct DualityAtPoint {
  Duality duality;
  Mat4 frame;
  TwoFormPoint frame_form;
  CurvatureOperator op;
  double scalar;
};

DualityAtPoint classify(const TwoFormField& w, const MetricField& g, const Point& p, double tau) {
  const CurvaturePoint cp = riemann(g, p);
  const TwoFormPoint f = to_frame(cp.frame, w.values(p));
  const double plus = f.self_dual_coordinates().norm();
  const double minus = f.anti_self_dual_coordinates().norm();
  const double bound = tau * std::max(1.0, f.norm());
  if (plus > bound && minus > bound) {
    throw MixedDuality("form has both self-dual (" + std::to_string(plus) +
                       ") and anti-self-dual (" + std::to_string(minus) + ") parts at " +
                       describe(p));
  }
  return {minus > plus ? Duality::anti_self_dual : Duality::self_dual, cp.frame, f,
          curvature_operator(cp), cp.scalar};
}

// −2W±ω + (s/3)ω in frame components.
TwoFormPoint curvature_term(const DualityAtPoint& d) {
  if (d.duality == Duality::self_dual) {
    const Vec3 x = d.frame_form.self_dual_coordinates();
    return TwoFormPoint::from_duality(-2.0 * d.op.weyl_plus() * x + (d.scalar / 3.0) * x, Vec3::Zero());
  }
  const Vec3 y = d.frame_form.anti_self_dual_coordinates();
  return TwoFormPoint::from_duality(Vec3::Zero(), -2.0 * d.op.weyl_minus() * y + (d.scalar / 3.0) * y);
}

double nabla_norm_sq(const Tensor3Jets& t, const Mat4& gi) {
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      Mat4 a, b;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          a(i, j) = t[k][i][j].v;
          b(i, j) = t[l][i][j].v;
        }
      }
      acc += gi(k, l) * 0.5 * (a.array() * (gi * b * gi).array()).sum();
    }
  }
  return acc;
}

}  // namespace

Vec4 codifferential(const TwoFormField& w, const MetricField& g, const Point& p) {
  const MetricJets m = metric_jets(g, p);
  const Form1Jets r = codifferential_jets(w.jets(p), m, g.orientation());
  return {r[0].v, r[1].v, r[2].v, r[3].v};
}

double codifferential(const OneFormField& a, const MetricField& g, const Point& p) {
  const MetricJets m = metric_jets(g, p);
  const int o = g.orientation();
  // ⋆ of a 4-form f dx1234 is f/√g · o.
  const Form3Jets s = star_form1(a.jets(p), m, o);
  double top = 0.0;
  for (int l = 0; l < 4; ++l) {
    // d of a 3-form, component 0123.
    int jk[3], n = 0;
    for (int x = 0; x < 4; ++x) {
      if (x != l) jk[n++] = x;
    }
    top += levi_civita(l, jk[0], jk[1], jk[2]) * s[jk[0]][jk[1]][jk[2]].d[l];
  }
  return -o * top / m.sqrt_det.v;
}

Mat4 hodge_laplacian(const TwoFormField& w, const MetricField& g, const Point& p) {
  return laplacian_values(w.jets(p), metric_jets(g, p), g.orientation());
}

Tensor3 covariant_derivative(const TwoFormField& w, const MetricField& g, const Point& p) {
  const auto t = nabla_jets(w.jets(p), metric_jets(g, p));
  Tensor3 r;
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) r[k][i][j] = t[k][i][j].v;
    }
  }
  return r;
}

Mat4 rough_laplacian(const TwoFormField& w, const MetricField& g, const Point& p) {
  const MetricJets m = metric_jets(g, p);
  return rough_values(nabla_jets(w.jets(p), m), m);
}

WeitzenboeckReport weitzenboeck_residual(const TwoFormField& w, const MetricField& g,
                                         const Point& p, double tau) {
  const DualityAtPoint dp = classify(w, g, p, tau);
  const MetricJets m = metric_jets(g, p);
  const int o = g.orientation();
  const Form2Jets wj = w.jets(p);
  const Mat4 gi = value_of(m.inverse);

  const Mat4 lap = laplacian_values(wj, m, o);
  const auto t = nabla_jets(wj, m);
  const Mat4 rough = rough_values(t, m);
  const Mat4 curv = from_frame(dp.frame, curvature_term(dp));

  WeitzenboeckReport r;
  r.point = p;
  r.duality = dp.duality;
  const Form3Jets dw = d_form2(wj);
  Tensor3 dv;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) dv[i][j][k] = dw[i][j][k].v;
    }
  }
  r.d_norm = form3_norm(gi, dv);
  const Form1Jets dl = codifferential_jets(wj, m, o);
  r.delta_norm = form1_norm(gi, Vec4(dl[0].v, dl[1].v, dl[2].v, dl[3].v));
  r.laplacian_norm = form2_norm(gi, lap);
  r.nabla_norm = std::sqrt(std::max(0.0, nabla_norm_sq(t, gi)));
  r.residual = form2_norm(gi, lap - rough - curv);
  return r;
}

BochnerTerms bochner_terms(const TwoFormField& w, const MetricField& g, const Point& p, double tau) {
  const DualityAtPoint dp = classify(w, g, p, tau);
  const MetricJets m = metric_jets(g, p);
  const int o = g.orientation();
  const Form2Jets wj = w.jets(p);
  const Mat4 gi = value_of(m.inverse);
  const Mat4 wv = value_of(wj);

  BochnerTerms b;
  const Mat4 lap = laplacian_values(wj, m, o);
  b.inner_laplacian = 0.5 * (lap.array() * (gi * wv * gi).array()).sum();

  // f = |ω|² = ½ g^{ia} g^{jb} ω_ij ω_ab as a jet.
  Jet f(0.0, 2);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int a = 0; a < 4; ++a) {
        for (int c = 0; c < 4; ++c) f += 0.5 * (m.inverse[i][a] * m.inverse[j][c] * wj[i][j] * wj[a][c]);
      }
    }
  }
  double lap_f = 0.0;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      double hess = f.h[k][l];
      for (int n = 0; n < 4; ++n) hess -= m.gamma[n][k][l].v * f.d[n];
      lap_f -= m.inverse[k][l].v * hess;
    }
  }
  b.half_laplacian_norm_sq = 0.5 * lap_f;
  b.nabla_norm_sq = nabla_norm_sq(nabla_jets(wj, m), gi);

  const Vec3 x = dp.duality == Duality::self_dual ? dp.frame_form.self_dual_coordinates()
                                                   : dp.frame_form.anti_self_dual_coordinates();
  const Mat3 weyl = dp.duality == Duality::self_dual ? dp.op.weyl_plus() : dp.op.weyl_minus();
  b.weyl_term = -2.0 * x.dot(weyl * x);
  b.scalar_term = dp.scalar / 3.0 * x.squaredNorm();
  return b;
}

}  // namespace curv4
