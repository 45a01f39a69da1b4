#pragma once

// Built-in chart geometries with known curvature, and the positivity
// persistence experiment for perturbations of Fubini–Study.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curv4/biortho.hpp"
#include "curv4/hodgeops.hpp"

namespace curv4 {

enum class Relation { equals, at_least, at_most };
enum class FactOrigin { quoted, derived, elementary };

const char* relation_name(Relation r);
const char* origin_name(FactOrigin o);

/// Quantities: scalar, einstein (max |Ric − c·g| against c = value),
/// lambda_plus_{1,2,3}, lambda_minus_{1,2,3}, weyl_plus_norm,
/// weyl_minus_norm, kperp1, kperp3, kperp3_minus_quarter_s, sectional,
/// form_length, form_closed, volume.
struct Fact {
  std::string quantity;
  Relation relation = Relation::equals;
  double value = 0.0;
  double tolerance = 0.0;
  FactOrigin origin = FactOrigin::derived;
  bool verifiable = true;  // false: recorded only (global quantities)
};

using Params = std::map<std::string, double>;

struct ModelGeometry {
  std::string name;
  Params params;
  MetricField metric;
  std::optional<TwoFormField> form;
  std::vector<Fact> facts;
};

/// flat4, sphere4 (r), fubini_study, s2xs2 (r1, r2), fs_perturbed (t).
/// Every model also accepts `orientation` (±1). Throws UnknownModel or
/// BadParams.
ModelGeometry builtin(const std::string& name, const Params& params = {});
std::vector<std::string> builtin_names();

/// Fubini–Study chart metric with holomorphic sectional curvature 4.
ExprMat4 fubini_study_components();
/// Kähler form of the chart, J∂1 = ∂2, J∂3 = ∂4.
ExprMat4 fubini_study_kahler_components();
/// Symmetric perturbation used by the fs_perturbed builtin.
ExprMat4 reference_bump();
/// g = fubini_study + t·h. Throws BadParams for |t| ≥ fs_perturbation_t_max.
ModelGeometry fs_perturbed(const ExprMat4& h, double t);
inline constexpr double fs_perturbation_t_max = 1.0;

/// Cell-centred grid with n points per axis.
std::vector<Point> grid_points(const Box& box, int n);
std::vector<Point> random_points(const Box& box, std::size_t count, std::uint64_t seed);
Box bounding_box(const Domain& d);

struct FactResult {
  Fact fact;
  bool checked = false;
  bool passed = false;
  double observed = 0.0;         // at the worst point
  double worst_deviation = 0.0;  // 0 when the relation holds exactly
  Point worst_point{};
};

struct FactReport {
  std::vector<FactResult> results;
  bool all_passed = true;
};

/// Evaluates every verifiable fact at every point; sectional bounds are
/// checked on `planes_per_point` seeded random planes per point.
FactReport verify_facts(const ModelGeometry& m, std::span<const Point> points,
                        std::uint64_t seed = 7, int planes_per_point = 256);

struct PerturbationRow {
  double t = 0.0;
  double min_plus = 0.0;   // min K⊥ over the pairs at +t
  double min_minus = 0.0;  // at −t
  bool passed = false;     // both ≥ ½·unperturbed minimum
};

struct PerturbationReport {
  double unperturbed_min = 0.0;
  double threshold = 0.0;  // t₀: largest tested dyadic t with every |t'| ≤ t₀ passing
  double min_at_half_threshold = 0.0;
  std::size_t pairs = 0;
  std::uint64_t seed = 0;
  std::vector<PerturbationRow> rows;  // descending t
};

/// Minimum of K⊥ over `n_points`·`planes_per_point` seeded (point, plane)
/// pairs for g_t = fubini_study + t·h, t = ±2⁻¹ … ±2⁻ᵏ.
PerturbationReport perturbation_threshold(const ExprMat4& h, std::uint64_t seed,
                                          int n_points = 100, int planes_per_point = 5,
                                          int dyadic_levels = 12);

}  // namespace curv4
