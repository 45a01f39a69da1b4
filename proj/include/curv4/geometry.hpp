#pragma once

// Pointwise Riemannian geometry of a metric given in a single chart.
//
// Curvature convention:
//   R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z,   R(X,Y,Z,W) = g(R(X,Y)Z, W),
//   K(X,Y)  = R(X,Y,Y,X) for orthonormal X, Y   (positive on the round sphere),
//   Ric(Y,Z) = Σ_i R(e_i,Y,Z,e_i).

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <string>
#include <variant>

#include "curv4/expr.hpp"
#include "curv4/jet.hpp"

namespace curv4 {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

struct Box {
  Point lo{};
  Point hi{};
};
struct Ball {
  Point center{};
  double radius = 1.0;
};
using Domain = std::variant<Box, Ball>;

bool contains(const Domain& d, const Point& p);
std::string describe(const Domain& d);
std::string describe(const Point& p);

/// Expression with its first and second symbolic partial derivatives.
class DifferentiatedExpr {
 public:
  DifferentiatedExpr() = default;
  explicit DifferentiatedExpr(Expr e);

  const Expr& expr() const { return e_; }
  const Expr& first(int k) const { return d1_[static_cast<std::size_t>(k)]; }
  const Expr& second(int k, int l) const {
    return d2_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
  }
  double eval(const Point& p) const { return e_.eval(p); }
  Jet jet(const Point& p) const { return seed_jet(e_, d1_, d2_, p); }

 private:
  Expr e_;
  std::array<Expr, 4> d1_{};
  std::array<std::array<Expr, 4>, 4> d2_{};
};

using JetMat4 = std::array<std::array<Jet, 4>, 4>;
using ExprMat4 = std::array<std::array<Expr, 4>, 4>;

/// Chart-local Riemannian metric g_ij(x). Only the upper triangle of the
/// component matrix is read; the lower triangle mirrors it.
class MetricField {
 public:
  MetricField() = default;
  MetricField(const ExprMat4& components, Domain domain, int orientation = +1);

  const Expr& component(int i, int j) const;
  const Domain& domain() const { return domain_; }
  int orientation() const { return orientation_; }
  MetricField with_orientation(int orientation) const;

  /// Component values without the positive-definiteness check.
  Mat4 values(const Point& p) const;
  /// Second-order jets of all components at `p`.
  JetMat4 jets(const Point& p) const;

 private:
  static int slot(int i, int j);
  std::shared_ptr<const std::array<DifferentiatedExpr, 10>> comps_;
  Domain domain_ = Box{};
  int orientation_ = +1;
};

/// g(p), verified symmetric positive definite. Throws NotPositiveDefinite or
/// DomainError.
Mat4 metric_at(const MetricField& field, const Point& p);

/// Gram–Schmidt of the coordinate basis in order; columns are e_1..e_4 with
/// g(e_i,e_j) = δ_ij. For orientation −1 the last vector is negated so the
/// frame is positively oriented for the chart orientation.
Mat4 orthonormal_frame(const Mat4& g, int orientation);

/// Γ^k_ij stored as gamma[k][i][j].
using Christoffel = std::array<std::array<std::array<double, 4>, 4>, 4>;
Christoffel christoffel(const MetricField& field, const Point& p);

using Tensor4 = std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4>;

struct CurvaturePoint {
  Point point{};
  Mat4 metric = Mat4::Identity();
  Mat4 frame = Mat4::Identity();  // columns e_i in coordinate components
  Tensor4 riemann{};              // R_ijkl in the frame
  Mat4 ricci = Mat4::Zero();      // frame components
  double scalar = 0.0;
  int orientation = +1;

  double R(int i, int j, int k, int l) const { return riemann[i][j][k][l]; }
};

/// Full pointwise curvature at `p`, converted to the oriented orthonormal
/// frame of orthonormal_frame().
CurvaturePoint riemann(const MetricField& field, const Point& p);

/// Same computation with a caller-supplied g-orthonormal frame.
CurvaturePoint riemann_in_frame(const MetricField& field, const Point& p, const Mat4& frame);

/// Jets of the metric and the quantities derived from it at one point, for
/// the exterior calculus in hodgeops.
struct MetricJets {
  JetMat4 g;         // order 2
  JetMat4 inverse;   // order 2
  Jet sqrt_det;      // order 2
  std::array<JetMat4, 4> gamma;  // gamma[k][i][j] = Γ^k_ij, order 1
};
MetricJets metric_jets(const MetricField& field, const Point& p);

/// Inverse of a symmetric matrix of jets.
JetMat4 inverse_jets(const JetMat4& g);

}  // namespace curv4
