#pragma once

// Sectional and biorthogonal curvature of tangent 2-planes, the closed-form
// extremes of K⊥(P) = (K(P) + K(P⊥))/2 over the Grassmannian, a derivative-free
// plane-search oracle for those extremes, and the pointwise hypothesis checks
// built on them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curv4/curvspec.hpp"

namespace curv4 {

/// Plane spanned by two orthonormal vectors, in frame components.
struct Plane {
  Vec4 u = Vec4::Unit(0);
  Vec4 v = Vec4::Unit(1);
};

/// Throws DegeneratePlane when |u|, |v| or <u,v> deviate beyond `tol`.
void validate(const Plane& p, double tol = 1e-8);

/// Random plane from two standard-normal vectors and Gram–Schmidt.
Plane random_plane(std::mt19937_64& rng);

double sectional(const CurvatureOperator& op, const Plane& p);

/// Orthonormal (u⊥, v⊥) spanning P⊥ with (u, v, u⊥, v⊥) positively oriented.
Plane orthogonal_plane(const Plane& p);

double biorthogonal(const CurvatureOperator& op, const Plane& p);

/// Quadric whose value on u∧v is K⊥(span(u,v)): ½(ℛ + ⋆ℛ⋆).
Mat6 biorthogonal_quadric(const CurvatureOperator& op);

/// Batched sectional / biorthogonal curvature through the SIMD kernels.
std::vector<double> sectional_batch(const CurvatureOperator& op, std::span<const Plane> planes);
std::vector<double> biorthogonal_batch(const CurvatureOperator& op, std::span<const Plane> planes);

struct KperpExtremes {
  double kperp1 = 0.0;  // min over planes
  double kperp3 = 0.0;  // max over planes
  Plane argmin;
  Plane argmax;
};

/// (K⊥₁, K⊥₃) = ((s/6 + λ₁⁺ + λ₁⁻)/2, (s/6 + λ₃⁺ + λ₃⁻)/2).
std::pair<double, double> kperp_closed_values(const SpectralData& sd);

/// Closed-form extremes; the extremal planes are span(f1, f2) of the frames
/// built from (α₁⁺, α₁⁻) and (α₃⁺, α₃⁻). Requires eigenforms in `sd`.
KperpExtremes kperp_extremes_closed(const SpectralData& sd);

struct SearchBudget {
  int n_samples = 1000;
  int n_refinements = 50;
  int n_starts = 3;
  std::uint64_t seed = 0x6b70657270ULL;
};

/// Brute-force extremes: random planes, then coordinate-rotation refinement
/// with a golden-section line search per rotation direction.
KperpExtremes kperp_extremes_search(const CurvatureOperator& op, const SearchBudget& budget = {});

/// Default strictness margin for the pointwise inequalities.
inline double default_margin(double s) { return 1e-9 * std::max(1.0, std::abs(s)); }

enum class Dichotomy { none, plus, minus, both };
const char* dichotomy_name(Dichotomy d);

struct PointHypotheses {
  double s = 0.0;
  Vec3 lambda_plus = Vec3::Zero();
  Vec3 lambda_minus = Vec3::Zero();
  double kperp1 = 0.0;
  double kperp3 = 0.0;
  double margin = 0.0;

  bool kperp_positive = false;          // K⊥₁ > τ
  bool kperp_below_quarter_s = false;   // s/4 − K⊥₃ > τ
  bool scalar_positive = false;         // s > τ
  double min_r_sum = 0.0;               // min_{i,j} rᵢ⁺ + rⱼ⁻
  bool r_sums_positive = false;
  double sum_gap = 0.0;                 // 2s/3 − 2λ₃⁺ − 2λ₃⁻
  bool top_plus_positive = false;       // s/3 − 2λ₃⁺ > τ
  bool top_minus_positive = false;      // s/3 − 2λ₃⁻ > τ
  PositivityVerdict plus;               // s/3 − 2W⁺
  PositivityVerdict minus;              // s/3 − 2W⁻

  /// Implications that must hold algebraically; non-empty means a numerical
  /// or logic fault, not a verdict.
  std::vector<std::string> consistency_errors;
};

struct HypothesisReport {
  std::vector<PointHypotheses> points;
  std::size_t errored_points = 0;

  bool all_kperp_positive = false;
  bool all_kperp_below_quarter_s = false;
  bool all_scalar_positive = false;
  bool all_r_sums_positive = false;
  bool plus_positive_everywhere = false;
  bool minus_positive_everywhere = false;
  Dichotomy dichotomy = Dichotomy::none;
  std::size_t consistency_failures = 0;

  /// K⊥ > 0 everywhere or K⊥ < s/4 everywhere on the sample.
  bool hypothesis_holds() const { return all_kperp_positive || all_kperp_below_quarter_s; }
};

PointHypotheses point_hypotheses(const SpectralData& sd, const KperpExtremes& kx,
                                 std::optional<double> margin = std::nullopt);

/// Throws EmptySample when there are neither points nor errored points.
/// Errored points (domain errors) count as failures of every aggregate.
HypothesisReport hypothesis_report(std::span<const std::pair<SpectralData, KperpExtremes>> points,
                                   std::optional<double> margin = std::nullopt,
                                   std::size_t errored_points = 0);

/// Aggregates already-evaluated points.
HypothesisReport aggregate_hypotheses(std::vector<PointHypotheses> points,
                                      std::size_t errored_points = 0);

}  // namespace curv4
