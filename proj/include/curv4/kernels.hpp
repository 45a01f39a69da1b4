#pragma once

// Batched quadratic forms on plane bivectors.
//
// For planes P_n = span(u_n, v_n) given in structure-of-arrays layout, the
// kernel computes out[n] = x_nᵀ Q x_n with x_n = u_n ∧ v_n in the Λ²
// coefficient basis of lambda2. With Q = ℛ this is the sectional curvature of
// orthonormal planes; with Q = ½(ℛ + ⋆ℛ⋆) it is the biorthogonal curvature.
//
// A scalar reference and an AVX2/FMA variant are provided; the variant is
// chosen once at runtime from CPUID and can be overridden for testing.

#include <array>
#include <cstddef>
#include <span>

namespace curv4::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);

/// ISA used by the dispatching entry point.
Isa active_isa();
/// Overrides dispatch. Returns false (and changes nothing) if `isa` is not
/// supported by this CPU or build.
bool set_active_isa(Isa isa);

struct PlaneBatch {
  std::array<std::span<const double>, 4> u;
  std::array<std::span<const double>, 4> v;
  std::size_t size() const { return u[0].size(); }
};

using Quadric6 = std::array<double, 36>;  // row-major

void plane_quadratic_forms(const Quadric6& q, const PlaneBatch& planes, std::span<double> out);

namespace scalar {
void plane_quadratic_forms(const Quadric6& q, const PlaneBatch& planes, std::span<double> out);
}
namespace avx2 {
void plane_quadratic_forms(const Quadric6& q, const PlaneBatch& planes, std::span<double> out);
}

}  // namespace curv4::kernels
