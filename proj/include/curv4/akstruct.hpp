#pragma once

// Almost-Kähler data from a self-dual 2-form: pointwise symplectic checks,
// the compatible almost-complex structure, and conformal normalization of
// the metric so the form has constant length √2.

#include <span>

#include "curv4/hodgeops.hpp"

namespace curv4 {

struct SymplecticCheck {
  bool selfdual = false;
  double length = 0.0;
  double volume_identity_residual = 0.0;  // |ω∧ω/dμ − |ω|²|
};

/// `w` in an oriented orthonormal frame.
SymplecticCheck check_symplectic_pointwise(const TwoFormPoint& w, double tau = 1e-8);

/// J with g(Jx, y) = ω(x, y), together with the residuals of its defining
/// properties measured on seeded random vectors.
struct AlmostComplexStructure {
  Mat4 J = Mat4::Zero();
  double j_squared_residual = 0.0;     // max |J² + I|
  double metric_residual = 0.0;        // max |g(Jx,Jy) − g(x,y)|
  double skew_residual = 0.0;          // max |g(x,Jx)|
  double form_residual = 0.0;          // max |ω(Jx,Jy) − ω(x,y)|
  double min_taming = 0.0;             // min ω(x,Jx)/g(x,x)
};

/// `g` and `omega` are components in one basis (the identity metric for an
/// orthonormal frame). Throws NotSelfDual or NotNormalized when the form,
/// measured in a g-orthonormal frame of the given orientation, is not
/// self-dual of length √2 within `tol`; throws Error if J fails its
/// invariants anyway.
AlmostComplexStructure build_acs(const Mat4& g, const Mat4& omega, int orientation = +1,
                                 double tol = 1e-8);
AlmostComplexStructure build_acs(const TwoFormPoint& omega_frame, double tol = 1e-8);

/// |ω|²_g as an expression, from the symbolic cofactor inverse of g.
Expr squared_norm_expr(const MetricField& g, const TwoFormField& w);

struct ConformalNormalization {
  Expr u2;             // (1/√2)|ω|_g
  MetricField metric;  // u²·g
  double max_length_error = 0.0;  // max over points of ||ω|_{g'} − √2|
};

/// Throws VanishingForm when |ω|_g ≤ tau at a sampled point.
ConformalNormalization conformal_normalize(const MetricField& g, const TwoFormField& w,
                                           std::span<const Point> points, double tau = 1e-8);

/// max over points of |⋆_g α − ⋆_{f·g} α| in coordinate components.
double star_conformal_invariance(const MetricField& g, const Expr& factor, const TwoFormField& a,
                                 std::span<const Point> points);

}  // namespace curv4
