#include "curv4/geometry.hpp"

#include <cmath>
#include <cstdio>

#include "curv4/errors.hpp"

namespace curv4 {

bool contains(const Domain& d, const Point& p) {
  if (const auto* box = std::get_if<Box>(&d)) {
    for (int i = 0; i < 4; ++i) {
      if (p[i] < box->lo[i] || p[i] > box->hi[i]) return false;
    }
    return true;
  }
  const auto& ball = std::get<Ball>(d);
  double r2 = 0.0;
  for (int i = 0; i < 4; ++i) r2 += (p[i] - ball.center[i]) * (p[i] - ball.center[i]);
  return r2 <= ball.radius * ball.radius;
}

std::string describe(const Point& p) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g, %.6g)", p[0], p[1], p[2], p[3]);
  return buf;
}

std::string describe(const Domain& d) {
  if (const auto* box = std::get_if<Box>(&d)) {
    std::string s = "box(";
    for (int i = 0; i < 4; ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%.17g..%.17g", i ? ", " : "", box->lo[i], box->hi[i]);
      s += buf;
    }
    return s + ")";
  }
  const auto& ball = std::get<Ball>(d);
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.17g)", ball.radius);
  return "ball(" + describe(ball.center) + buf;
}

DifferentiatedExpr::DifferentiatedExpr(Expr e) : e_(std::move(e)) {
  for (int k = 0; k < 4; ++k) d1_[k] = differentiate(e_, k);
  for (int k = 0; k < 4; ++k) {
    for (int l = k; l < 4; ++l) {
      d2_[k][l] = differentiate(d1_[k], l);
      d2_[l][k] = d2_[k][l];
    }
  }
}

int MetricField::slot(int i, int j) {
  if (i > j) std::swap(i, j);
  // Row-major upper triangle: (0,0)=0 .. (3,3)=9.
  static constexpr int kOffset[4] = {0, 4, 7, 9};
  return kOffset[i] + (j - i);
}

MetricField::MetricField(const ExprMat4& components, Domain domain, int orientation)
    : domain_(domain), orientation_(orientation >= 0 ? +1 : -1) {
  auto comps = std::make_shared<std::array<DifferentiatedExpr, 10>>();
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) (*comps)[slot(i, j)] = DifferentiatedExpr(components[i][j]);
  }
  comps_ = std::move(comps);
}

const Expr& MetricField::component(int i, int j) const { return (*comps_)[slot(i, j)].expr(); }

MetricField MetricField::with_orientation(int orientation) const {
  MetricField m = *this;
  m.orientation_ = orientation >= 0 ? +1 : -1;
  return m;
}

Mat4 MetricField::values(const Point& p) const {
  Mat4 g;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) g(i, j) = g(j, i) = (*comps_)[slot(i, j)].eval(p);
  }
  return g;
}

JetMat4 MetricField::jets(const Point& p) const {
  JetMat4 g;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) g[i][j] = g[j][i] = (*comps_)[slot(i, j)].jet(p);
  }
  return g;
}

Mat4 metric_at(const MetricField& field, const Point& p) {
  const Mat4 g = field.values(p);
  Eigen::LLT<Mat4> llt(g);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(g, Eigen::EigenvaluesOnly);
    throw NotPositiveDefinite(describe(p), es.eigenvalues()(0));
  }
  return g;
}

Mat4 orthonormal_frame(const Mat4& g, int orientation) {
  Eigen::LLT<Mat4> llt(g);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(g, Eigen::EigenvaluesOnly);
    throw NotPositiveDefinite("frame construction", es.eigenvalues()(0));
  }
  Mat4 e = Mat4::Zero();
  for (int i = 0; i < 4; ++i) {
    Vec4 v = Vec4::Unit(i);
    // Two passes of modified Gram–Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) v -= (e.col(j).dot(g * v)) * e.col(j);
    }
    e.col(i) = v / std::sqrt(v.dot(g * v));
  }
  if (orientation < 0) e.col(3) = -e.col(3);
  return e;
}

JetMat4 inverse_jets(const JetMat4& g) {
  Mat4 v;
  std::array<Mat4, 4> d;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      v(i, j) = g[i][j].v;
      for (int k = 0; k < 4; ++k) d[k](i, j) = g[i][j].d[k];
    }
  }
  int order = 2;
  for (const auto& row : g) {
    for (const auto& x : row) order = std::min(order, x.order);
  }
  const Mat4 G = v.inverse();
  std::array<Mat4, 4> Gd;
  std::array<Mat4, 4> dG;  // d_k g * G
  for (int k = 0; k < 4; ++k) {
    dG[k] = d[k] * G;
    Gd[k] = -G * dG[k];
  }
  JetMat4 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      r[i][j].v = G(i, j);
      r[i][j].order = order;
      for (int k = 0; k < 4; ++k) r[i][j].d[k] = Gd[k](i, j);
    }
  }
  if (order >= 2) {
    for (int k = 0; k < 4; ++k) {
      for (int l = k; l < 4; ++l) {
        Mat4 hkl;
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) hkl(i, j) = g[i][j].h[k][l];
        }
        const Mat4 m = G * (dG[k] * dG[l] + dG[l] * dG[k]) - G * hkl * G;
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) r[i][j].h[k][l] = r[i][j].h[l][k] = m(i, j);
        }
      }
    }
  }
  return r;
}

namespace {

Jet determinant(const JetMat4& g) {
  static constexpr int kPerms[24][4] = {
      {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1},
      {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}, {1, 3, 2, 0},
      {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0},
      {3, 0, 1, 2}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0}};
  Jet det(0.0);
  for (const auto& perm : kPerms) {
    int inversions = 0;
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) inversions += perm[a] > perm[b];
    }
    Jet term = g[0][perm[0]] * g[1][perm[1]] * g[2][perm[2]] * g[3][perm[3]];
    if (inversions % 2) {
      det -= term;
    } else {
      det += term;
    }
  }
  return det;
}

}  // namespace

MetricJets metric_jets(const MetricField& field, const Point& p) {
  metric_at(field, p);
  MetricJets mj;
  mj.g = field.jets(p);
  mj.inverse = inverse_jets(mj.g);
  mj.sqrt_det = sqrt(determinant(mj.g));
  // Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        Jet acc(0.0, 1);
        for (int l = 0; l < 4; ++l) {
          const Jet lowered = mj.g[j][l].partial(i) + mj.g[i][l].partial(j) - mj.g[i][j].partial(l);
          acc += mj.inverse[k][l] * lowered;
        }
        acc *= 0.5;
        mj.gamma[k][i][j] = mj.gamma[k][j][i] = acc;
      }
    }
  }
  return mj;
}

Christoffel christoffel(const MetricField& field, const Point& p) {
  const MetricJets mj = metric_jets(field, p);
  Christoffel out{};
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) out[k][i][j] = mj.gamma[k][i][j].v;
    }
  }
  return out;
}

CurvaturePoint riemann_in_frame(const MetricField& field, const Point& p, const Mat4& frame) {
  const MetricJets mj = metric_jets(field, p);
  const auto& G = mj.gamma;

  // R_ijk^l = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^m_jk Γ^l_im − Γ^m_ik Γ^l_jm
  Tensor4 up{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
          double r = G[l][j][k].d[i] - G[l][i][k].d[j];
          for (int m = 0; m < 4; ++m) {
            r += G[m][j][k].v * G[l][i][m].v - G[m][i][k].v * G[l][j][m].v;
          }
          up[i][j][k][l] = r;
        }
      }
    }
  }
  CurvaturePoint cp;
  cp.point = p;
  cp.orientation = field.orientation();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) cp.metric(i, j) = mj.g[i][j].v;
  }
  cp.frame = frame;

  Tensor4 coord{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
          double r = 0.0;
          for (int m = 0; m < 4; ++m) r += cp.metric(l, m) * up[i][j][k][m];
          coord[i][j][k][l] = r;
        }
      }
    }
  }
  // Contract one index at a time with the frame.
  Tensor4 a{}, b{};
  const Mat4& E = frame;
  for (int x = 0; x < 4; ++x)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double r = 0.0;
          for (int i = 0; i < 4; ++i) r += E(i, x) * coord[i][j][k][l];
          a[x][j][k][l] = r;
        }
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double r = 0.0;
          for (int j = 0; j < 4; ++j) r += E(j, y) * a[x][j][k][l];
          b[x][y][k][l] = r;
        }
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z)
        for (int l = 0; l < 4; ++l) {
          double r = 0.0;
          for (int k = 0; k < 4; ++k) r += E(k, z) * b[x][y][k][l];
          a[x][y][z][l] = r;
        }
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z)
        for (int w = 0; w < 4; ++w) {
          double r = 0.0;
          for (int l = 0; l < 4; ++l) r += E(l, w) * a[x][y][z][l];
          cp.riemann[x][y][z][w] = r;
        }

  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      double r = 0.0;
      for (int i = 0; i < 4; ++i) r += cp.riemann[i][j][k][i];
      cp.ricci(j, k) = r;
    }
  }
  cp.scalar = cp.ricci.trace();
  return cp;
}

CurvaturePoint riemann(const MetricField& field, const Point& p) {
  const Mat4 g = metric_at(field, p);
  return riemann_in_frame(field, p, orthonormal_frame(g, field.orientation()));
}

}  // namespace curv4
