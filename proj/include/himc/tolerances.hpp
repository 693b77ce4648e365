#pragma once

namespace himc {

/// Every threshold used by a certificate or gate. Defaults are tuned for
/// the reference spacing h = 0.01; all of them are overridable from the CLI.
struct Tolerances {
  /// Unit / imaginary / complex-structure predicates.
  double unit = 1e-9;
  /// Gate for integrating a potential (max |dω| over the interior).
  double closed = 2e-2;
  /// O(h²) certificates (identities, wedge residuals, two-path spread).
  double certificate = 5e-3;
  /// GHIMC residual gate for generated and transformed surfaces.
  double ghimc = 1e-2;
  /// H_min = hmin_scale / (grid diameter).
  double hmin_scale = 1e-6;
  /// Branch points: |f_x| < branch · median |f_x|.
  double branch = 1e-9;
  /// Denominators (h̄, λL, Eh) below this are masked.
  double denominator = 1e-9;
  /// Analytic ODE identities (u′ = 4cos φ, conformality of the profile).
  double identity = 1e-6;
  /// Rotational symmetry check for surfaces of revolution.
  double revolution = 1e-6;
  /// sin²φ + cos²φ = 1 certificate in phi_from_surface.
  double trig = 1e-3;
  /// RK4 self-residual of a Painlevé III solution.
  double solver = 1e-8;
  /// Pointwise Painlevé III residual of a transformed solution.
  double piii = 1e-3;
};

}  // namespace himc
