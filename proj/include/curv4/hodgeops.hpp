#pragma once

// Exterior calculus on chart fields, evaluated pointwise from second-order
// jets whose seeds are exact symbolic derivatives.
//
// Conventions (coordinate components, full antisymmetric arrays):
//   (dγ)_ij   = ∂_i γ_j − ∂_j γ_i
//   (dω)_ijk  = ∂_i ω_jk + ∂_j ω_ki + ∂_k ω_ij
//   ⋆ on k-forms: (⋆β)_J = (1/k!) o √det g  β^I ε_IJ, o = chart orientation
//   δ = −⋆d⋆ on every degree,  Δ = dδ + δd
//   |β|² = (1/k!) β_I β^I
//   ∇_k ω_ij = ∂_k ω_ij − Γ^m_ki ω_mj − Γ^m_kj ω_im,  ∇*∇ω = −g^{kl} ∇²_{kl} ω

#include <array>
#include <memory>

#include "curv4/curvspec.hpp"
#include "curv4/geometry.hpp"

namespace curv4 {

using Form1Jets = std::array<Jet, 4>;
using Form2Jets = JetMat4;
using Form3Jets = std::array<std::array<std::array<Jet, 4>, 4>, 4>;
using Tensor3 = std::array<std::array<std::array<double, 4>, 4>, 4>;

class OneFormField {
 public:
  OneFormField() = default;
  explicit OneFormField(const std::array<Expr, 4>& components);

  const Expr& component(int i) const;
  Vec4 values(const Point& p) const;
  Form1Jets jets(const Point& p) const;

 private:
  std::shared_ptr<const std::array<DifferentiatedExpr, 4>> comps_;
};

/// ω = Σ_{i<j} ω_ij dx^i∧dx^j. Only the strict upper triangle of the input
/// matrix is read; antisymmetry is structural.
class TwoFormField {
 public:
  TwoFormField() = default;
  explicit TwoFormField(const ExprMat4& components);

  /// ω_ij for any i, j (negated expression below the diagonal, 0 on it).
  Expr component(int i, int j) const;
  Mat4 values(const Point& p) const;
  Form2Jets jets(const Point& p) const;

  TwoFormField scaled(const Expr& factor) const;

 private:
  static int slot(int i, int j);
  std::shared_ptr<const std::array<DifferentiatedExpr, 6>> comps_;
};

/// Levi-Civita symbol ε_ijkl with ε_0123 = +1.
int levi_civita(int i, int j, int k, int l);

Form2Jets d_form1(const Form1Jets& a);
Form3Jets d_form2(const Form2Jets& w);
Form3Jets star_form1(const Form1Jets& a, const MetricJets& m, int orientation);
Form2Jets star_form2(const Form2Jets& w, const MetricJets& m, int orientation);
Form1Jets star_form3(const Form3Jets& b, const MetricJets& m, int orientation);

/// Pointwise coordinate Hodge star of a 2-form.
Mat4 hodge_star_coordinates(const Mat4& g, const Mat4& alpha, int orientation);

double form1_norm(const Mat4& g_inv, const Vec4& a);
double form2_norm(const Mat4& g_inv, const Mat4& w);
double form3_norm(const Mat4& g_inv, const Tensor3& b);

/// Frame components ω(e_a, e_b) and back.
TwoFormPoint to_frame(const Mat4& frame, const Mat4& w);
Mat4 from_frame(const Mat4& frame, const TwoFormPoint& w);

Tensor3 exterior_d(const TwoFormField& w, const Point& p);
/// d(dα) at p, for the d∘d = 0 property.
Tensor3 exterior_dd(const OneFormField& a, const Point& p);
Vec4 codifferential(const TwoFormField& w, const MetricField& g, const Point& p);
double codifferential(const OneFormField& a, const MetricField& g, const Point& p);
Mat4 hodge_laplacian(const TwoFormField& w, const MetricField& g, const Point& p);
/// ∇ω as [k][i][j] = ∇_k ω_ij.
Tensor3 covariant_derivative(const TwoFormField& w, const MetricField& g, const Point& p);
Mat4 rough_laplacian(const TwoFormField& w, const MetricField& g, const Point& p);

enum class Duality { self_dual, anti_self_dual };

struct WeitzenboeckReport {
  Point point{};
  Duality duality = Duality::self_dual;
  double d_norm = 0.0;
  double delta_norm = 0.0;
  double laplacian_norm = 0.0;
  double nabla_norm = 0.0;
  double residual = 0.0;  // |Δω − (∇*∇ω − 2W±ω + (s/3)ω)|
};

/// Throws MixedDuality when both |ω⁺| and |ω⁻| exceed tau·max(1, |ω|).
WeitzenboeckReport weitzenboeck_residual(const TwoFormField& w, const MetricField& g,
                                         const Point& p, double tau = 1e-8);

/// Terms of ⟨Δω,ω⟩ = ½Δ|ω|² + |∇ω|² − 2⟨W±ω,ω⟩ + (s/3)|ω|² at one point.
/// Δ on functions is −g^{kl}∇_k∇_l. Same duality requirement as above.
struct BochnerTerms {
  double inner_laplacian = 0.0;
  double half_laplacian_norm_sq = 0.0;
  double nabla_norm_sq = 0.0;
  double weyl_term = 0.0;    // −2⟨W±ω,ω⟩
  double scalar_term = 0.0;  // (s/3)|ω|²
  double rhs() const { return half_laplacian_norm_sq + nabla_norm_sq + weyl_term + scalar_term; }
};
BochnerTerms bochner_terms(const TwoFormField& w, const MetricField& g, const Point& p,
                           double tau = 1e-8);

}  // namespace curv4
