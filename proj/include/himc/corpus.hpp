#pragma once

// Closed-form test surfaces.

#include <cmath>

#include "himc/conformal.hpp"
#include "himc/revolution.hpp"

namespace himc::corpus {

/// Square grid [x0, x0 + (n−1)h] × [y0, y0 + (n−1)h].
inline GridSpec square_grid(double x0, double y0, double side, double h) {
  const int n = static_cast<int>(std::lround(side / h)) + 1;
  return {n, n, x0, y0, h, h};
}

/// f = x i + y j; H ≡ 0.
inline SurfaceGrid plane(const GridSpec& g) {
  return sample_surface(g, [](double x, double y) { return Quaternion(0, x, y, 0); });
}

/// Unit cylinder f = cos y i + sin y j + x k; |H| = 1/2.
inline SurfaceGrid cylinder(const GridSpec& g) {
  return sample_surface(
      g, [](double x, double y) { return Quaternion(0, std::cos(y), std::sin(y), x); });
}

/// Inverse stereographic projection onto the unit sphere in Im ℍ.
inline SurfaceGrid sphere(const GridSpec& g) {
  return sample_surface(g, [](double x, double y) {
    const double r2 = x * x + y * y;
    const double s = 1.0 / (1.0 + r2);
    return Quaternion(0, 2 * x * s, 2 * y * s, (r2 - 1) * s);
  });
}

/// Conformal cone f = e^{bx}(cos y i + sin y j + c k), c = √(1/b² − 1).
/// H⁻¹ ∝ e^{bx} is not harmonic, so this is not GHIMC.
inline SurfaceGrid cone(const GridSpec& g, double b = 0.6) {
  const double c = std::sqrt(1.0 / (b * b) - 1.0);
  return sample_surface(g, [b, c](double x, double y) {
    const double e = std::exp(b * x);
    return Quaternion(0, e * std::cos(y), e * std::sin(y), e * c);
  });
}

/// Clifford torus cos x + sin x i + cos y j + sin y k; full 4D image,
/// quaternionic H, not GHIMC.
inline SurfaceGrid clifford_torus(const GridSpec& g) {
  return sample_surface(g, [](double x, double y) {
    return Quaternion(std::cos(x), std::sin(x), std::cos(y), std::sin(y));
  });
}

/// Cylinder with the a = 2 rotation speed of the revolution family:
/// e^{u/2} = 1, c = 2x, the degenerate φ ≡ π/2 case.
inline SurfaceGrid cylinder_a2(const GridSpec& g) {
  return sample_surface(g, [](double x, double y) {
    return Quaternion(0, 0.5 * std::cos(2 * y), 0.5 * std::sin(2 * y), x);
  });
}

/// HIMC surface of revolution generated by a Painlevé III solution, with
/// x spacing grid_h (a multiple of the ODE step).
inline SurfaceGrid piii_surface(const PhiSolution& sol, double grid_h, int ny, double y0 = 0.0) {
  const auto pr = profile_from_phi(sol);
  const int stride = std::max(1, static_cast<int>(std::lround(grid_h / sol.step())));
  return surface_from_profile(pr, y0, grid_h, ny, stride);
}

/// The three reference Painlevé III solutions on [0.5, 2.5].
inline PhiSolution reference_phi(int which, double h_ode = 1e-3, double x_end = 2.5) {
  static constexpr double data[3][2] = {{0.3, 0.5}, {1.0, 0.2}, {-0.4, 1.5}};
  return piii_integrate(0.5, data[which][0], data[which][1], x_end, h_ode);
}

/// Applies a ↦ r a s⁻¹ + t to every sample.
inline SurfaceGrid moved(const SurfaceGrid& s, const Motion& m) {
  return SurfaceGrid(map_field(s.f, [&m](const Quaternion& q) { return m(q); }));
}

}  // namespace himc::corpus
