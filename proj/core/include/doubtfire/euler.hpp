#pragma once

#include <cmath>
#include <span>

// Ideal-gas compressible Euler pointwise physics. A node state is laid out as
// (rho, rho*u_1, ..., rho*u_dim, rho*E).
namespace doubtfire::euler {

inline double kinetic_energy(std::span<const double> q, int dim) {
  double m2 = 0.0;
  for (int d = 0; d < dim; ++d) m2 += q[1 + d] * q[1 + d];
  return 0.5 * m2 / q[0];
}

inline double pressure(std::span<const double> q, int dim, double gamma) {
  return (gamma - 1.0) * (q[dim + 1] - kinetic_energy(q, dim));
}

/// Admissible iff density and pressure are strictly positive (NaN is not).
inline bool admissible(std::span<const double> q, int dim, double gamma) {
  return q[0] > 0.0 && pressure(q, dim, gamma) > 0.0;
}

inline double sound_speed(std::span<const double> q, int dim, double gamma) {
  return std::sqrt(gamma * pressure(q, dim, gamma) / q[0]);
}

/// |u_dir| + c
inline double wave_speed(std::span<const double> q, int dim, int dir, double gamma) {
  return std::abs(q[1 + dir] / q[0]) + sound_speed(q, dim, gamma);
}

/// Physical flux in direction `dir`; `out` has dim + 2 entries.
inline void flux(std::span<const double> q, int dim, int dir, double gamma, std::span<double> out) {
  const double rho = q[0];
  const double un = q[1 + dir] / rho;
  const double p = pressure(q, dim, gamma);
  out[0] = q[1 + dir];
  for (int d = 0; d < dim; ++d) out[1 + d] = q[1 + d] * un;
  out[1 + dir] += p;
  out[dim + 1] = (q[dim + 1] + p) * un;
}

}  // namespace doubtfire::euler
