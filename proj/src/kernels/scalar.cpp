#include "curv4/kernels.hpp"

namespace curv4::kernels::scalar {

void plane_quadratic_forms(const Quadric6& q, const PlaneBatch& planes, std::span<double> out) {
  const std::size_t n = planes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double u0 = planes.u[0][i], u1 = planes.u[1][i], u2 = planes.u[2][i], u3 = planes.u[3][i];
    const double v0 = planes.v[0][i], v1 = planes.v[1][i], v2 = planes.v[2][i], v3 = planes.v[3][i];
    const double x[6] = {u0 * v1 - u1 * v0, u0 * v2 - u2 * v0, u0 * v3 - u3 * v0,
                         u2 * v3 - u3 * v2, u3 * v1 - u1 * v3, u1 * v2 - u2 * v1};
    double acc = 0.0;
    for (int a = 0; a < 6; ++a) {
      double row = 0.0;
      for (int b = 0; b < 6; ++b) row += q[a * 6 + b] * x[b];
      acc += x[a] * row;
    }
    out[i] = acc;
  }
}

}  // namespace curv4::kernels::scalar
