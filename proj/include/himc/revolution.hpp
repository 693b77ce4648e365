#pragma once

// Painlevé III in trigonometric form and HIMC surfaces of revolution about
// the k-axis, f = (e^{u/2}/2)(cos 2y i + sin 2y j) + (c/2) k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "himc/conformal.hpp"
#include "himc/error.hpp"
#include "himc/quaternion.hpp"
#include "himc/tolerances.hpp"
#include "himc/transforms.hpp"

namespace himc {

/// Rotation speed in f(x, y); forced by conformality of the profile.
inline constexpr double kRevolutionA = 2.0;

struct PhiSolution {
  std::vector<double> xs;
  std::vector<double> phi;
  std::vector<double> dphi;
  /// 1 where |φ′ + 2 sin φ| is below the degeneracy threshold.
  std::vector<std::uint8_t> degenerate;

  std::size_t size() const { return xs.size(); }
  double step() const { return xs.size() > 1 ? xs[1] - xs[0] : 0.0; }
  bool any_degenerate() const {
    return std::any_of(degenerate.begin(), degenerate.end(), [](auto v) { return v != 0; });
  }
};

/// x φ″ − 2x sin 2φ + φ′ + 2 sin φ.
inline double piii_residual(double phi, double dphi, double ddphi, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "Painleve III needs x > 0");
  return x * ddphi - 2.0 * x * std::sin(2.0 * phi) + dphi + 2.0 * std::sin(phi);
}

/// φ″ from the equation.
inline double piii_ddphi(double x, double phi, double dphi) {
  return 2.0 * std::sin(2.0 * phi) - (dphi + 2.0 * std::sin(phi)) / x;
}

/// Classic RK4 from x_start to x_end (either direction) with |step| ≤ h.
inline PhiSolution piii_integrate(double x_start, double phi0, double dphi0, double x_end,
                                  double h, double degenerate_tol = 1e-8) {
  if (!(x_start > 0.0) || !(x_end > 0.0)) {
    throw Error(ErrorCode::DomainError, "integration range must stay in x > 0 (x_start = " +
                                            fmt_num(x_start) + ", x_end = " + fmt_num(x_end) +
                                            ")");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidConfig, "ODE step must be positive");
  if (!std::isfinite(phi0) || !std::isfinite(dphi0) || !std::isfinite(x_end)) {
    throw Error(ErrorCode::InvalidConfig, "ODE initial data must be finite");
  }
  const long n = std::max(1L, std::lround(std::abs(x_end - x_start) / h));
  const double dx = (x_end - x_start) / static_cast<double>(n);
  PhiSolution sol;
  sol.xs.resize(n + 1);
  sol.phi.resize(n + 1);
  sol.dphi.resize(n + 1);
  sol.degenerate.assign(n + 1, 0);
  double p = phi0, q = dphi0;
  for (long m = 0; m <= n; ++m) {
    const double x = x_start + dx * static_cast<double>(m);
    sol.xs[m] = x;
    sol.phi[m] = p;
    sol.dphi[m] = q;
    sol.degenerate[m] = std::abs(q + 2.0 * std::sin(p)) < degenerate_tol;
    if (m == n) break;
    const double k1p = q, k1q = piii_ddphi(x, p, q);
    const double k2p = q + 0.5 * dx * k1q, k2q = piii_ddphi(x + 0.5 * dx, p + 0.5 * dx * k1p, k2p);
    const double k3p = q + 0.5 * dx * k2q, k3q = piii_ddphi(x + 0.5 * dx, p + 0.5 * dx * k2p, k3p);
    const double k4p = q + dx * k3q, k4q = piii_ddphi(x + dx, p + dx * k3p, k4p);
    p += dx / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    q += dx / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
    if (!std::isfinite(p) || !std::isfinite(q) || std::abs(q) > 1e8) {
      throw Error(ErrorCode::Blowup, "solution blows up near x = " + fmt_num(x + dx));
    }
  }
  return sol;
}

/// Fourth-order first derivative of uniformly spaced samples.
inline std::vector<double> derivative4(const std::vector<double>& v, double h) {
  const std::size_t n = v.size();
  if (n < 5) throw Error(ErrorCode::InvalidGrid, "need at least 5 samples");
  std::vector<double> d(n);
  const double s = 1.0 / (12.0 * h);
  d[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) * s;
  d[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) * s;
  for (std::size_t m = 2; m + 2 < n; ++m) d[m] = (v[m - 2] - 8 * v[m - 1] + 8 * v[m + 1] - v[m + 2]) * s;
  d[n - 2] = (3 * v[n - 1] + 10 * v[n - 2] - 18 * v[n - 3] + 6 * v[n - 4] - v[n - 5]) * s;
  d[n - 1] = (25 * v[n - 1] - 48 * v[n - 2] + 36 * v[n - 3] - 16 * v[n - 4] + 3 * v[n - 5]) * s;
  return d;
}

/// PIII residual at every sample, with φ″ differentiated from the φ′ samples.
inline std::vector<double> piii_residuals(const PhiSolution& sol) {
  const auto dd = derivative4(sol.dphi, sol.step());
  std::vector<double> r(sol.size());
  for (std::size_t m = 0; m < sol.size(); ++m)
    r[m] = piii_residual(sol.phi[m], sol.dphi[m], dd[m], sol.xs[m]);
  return r;
}

/// Max |residual| over samples at least `skip` away from both ends.
inline double max_abs(const std::vector<double>& v, std::size_t skip = 0) {
  double m = 0.0;
  for (std::size_t k = skip; k + skip < v.size(); ++k) m = std::max(m, std::abs(v[k]));
  return m;
}

struct RevolutionProfile {
  std::vector<double> xs;
  std::vector<double> u;
  std::vector<double> c;
  /// u′ = 4 cos(σφ) and c′ = 2e^{u/2} sin(σφ), exact along the ODE.
  std::vector<double> du;
  std::vector<double> dc;
  double a = kRevolutionA;
  /// Sign of φ′ + 2 sin φ; the profile's angle is σφ.
  int sigma = 1;

  double step() const { return xs.size() > 1 ? xs[1] - xs[0] : 0.0; }
  double eu2(std::size_t m) const { return std::exp(0.5 * u[m]); }
};

struct ProfileCertificate {
  double du_identity = 0.0;   ///< max |u′ − 4 cos σφ|, u′ by finite differences
  double dc_identity = 0.0;   ///< max |c′ − 2e^{u/2} sin σφ|
  double conformality = 0.0;  ///< max |e^u u′²/4 + c′² − 4e^u| / (4e^u)
};

inline RevolutionProfile profile_from_phi(const PhiSolution& sol, ProfileCertificate* cert = nullptr) {
  if (sol.size() < 5) throw Error(ErrorCode::InvalidGrid, "need at least 5 samples");
  if (sol.any_degenerate()) {
    throw Error(ErrorCode::Degenerate, "phi' + 2 sin(phi) vanishes on the range");
  }
  RevolutionProfile pr;
  pr.xs = sol.xs;
  const std::size_t n = sol.size();
  pr.u.resize(n);
  pr.c.resize(n);
  pr.du.resize(n);
  pr.dc.resize(n);
  const double a0 = sol.dphi[0] + 2.0 * std::sin(sol.phi[0]);
  pr.sigma = a0 > 0 ? 1 : -1;
  for (std::size_t m = 0; m < n; ++m) {
    const double x = sol.xs[m], p = sol.phi[m], q = sol.dphi[m];
    const double big_a = q + 2.0 * std::sin(p);
    if (big_a * pr.sigma <= 0.0) {
      throw Error(ErrorCode::Degenerate, "phi' + 2 sin(phi) changes sign near x = " + fmt_num(x));
    }
    const double e = pr.sigma * x * big_a / 2.0;
    pr.u[m] = 2.0 * std::log(e);
    pr.c[m] = -(x * x / 4.0) * (q * q - 4.0 * std::sin(p) * std::sin(p));
    pr.du[m] = 4.0 * std::cos(p);
    pr.dc[m] = 2.0 * e * std::sin(pr.sigma * p);
  }
  if (cert) {
    const double h = pr.step();
    const auto du = derivative4(pr.u, h);
    const auto dc = derivative4(pr.c, h);
    *cert = {};
    for (std::size_t m = 0; m < n; ++m) {
      const double e = pr.eu2(m);
      cert->du_identity = std::max(cert->du_identity, std::abs(du[m] - pr.du[m]));
      cert->dc_identity = std::max(cert->dc_identity, std::abs(dc[m] - pr.dc[m]));
      const double eu = e * e;
      cert->conformality = std::max(
          cert->conformality, std::abs(eu * du[m] * du[m] / 4.0 + dc[m] * dc[m] - 4.0 * eu) / (4.0 * eu));
    }
  }
  return pr;
}

/// Rotation by angle α about the k-axis: q ↦ e^{kα/2} q e^{−kα/2}.
inline Quaternion rotate_k(const Quaternion& q, double alpha) {
  const Quaternion r(std::cos(alpha / 2), 0, 0, std::sin(alpha / 2));
  return r * q * conj(r);
}

/// Samples the profile every `stride` nodes in x and on ny nodes from y0
/// with spacing hy.
inline SurfaceGrid surface_from_profile(const RevolutionProfile& pr, double y0, double hy, int ny,
                                        int stride = 1) {
  if (stride < 1) throw Error(ErrorCode::InvalidGrid, "stride must be >= 1");
  const int nx = static_cast<int>((pr.xs.size() - 1) / stride) + 1;
  GridSpec g{nx, ny, pr.xs.front(), y0, pr.step() * stride, hy};
  g.validate();
  ScalarField f(g);
  for (int i = 0; i < nx; ++i) {
    const std::size_t m = static_cast<std::size_t>(i) * stride;
    const Quaternion base(0, pr.eu2(m) / pr.a, 0, pr.c[m] / pr.a);
    for (int j = 0; j < ny; ++j) f(i, j) = rotate_k(base, pr.a * g.y(j));
  }
  return SurfaceGrid(std::move(f));
}

struct PhiExtraction {
  PhiSolution phi;
  RevolutionProfile profile;
  /// Max deviation from rotational symmetry, relative to max |f|.
  double revolution_deviation = 0.0;
  /// Max |sin²φ + cos²φ − 1| from the recovered sin and cos.
  double trig_deviation = 0.0;
};

/// Recovers u, c from the y = y0 row and φ from sin φ = ½c′e^{−u/2},
/// cos φ = ¼u′, continued without jumps in x.
inline PhiExtraction phi_from_surface(const SurfaceGrid& s, const Tolerances& tol = {}) {
  const auto& g = s.grid();
  double scale = 0.0, dev = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) scale = std::max(scale, norm(s.f[k]));
  for (int j = 0; j < g.ny; ++j) {
    const double alpha = kRevolutionA * (g.y(j) - g.y0);
    for (int i = 0; i < g.nx; ++i) {
      dev = std::max(dev, norm(s.f(i, j) - rotate_k(s.f(i, 0), alpha)));
      dev = std::max(dev, std::abs(s.f(i, j).w));
    }
  }
  PhiExtraction out;
  out.revolution_deviation = scale > 0 ? dev / scale : 0.0;
  if (!(out.revolution_deviation <= tol.revolution)) {
    throw Error(ErrorCode::NotRevolution,
                "surface deviates from rotation about the k-axis (a = 2) by " +
                    fmt_num(out.revolution_deviation));
  }
  auto& pr = out.profile;
  const std::size_t n = static_cast<std::size_t>(g.nx);
  pr.xs.resize(n);
  pr.u.resize(n);
  pr.c.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const auto& q = s.f(static_cast<int>(m), 0);
    const double e = kRevolutionA * std::hypot(q.x, q.y);
    if (!(e > 0.0)) throw Error(ErrorCode::Degenerate, "surface meets the rotation axis");
    pr.xs[m] = g.x(static_cast<int>(m));
    pr.u[m] = 2.0 * std::log(e);
    pr.c[m] = kRevolutionA * q.z;
  }
  pr.du = derivative4(pr.u, g.hx);
  pr.dc = derivative4(pr.c, g.hx);
  auto& ph = out.phi;
  ph.xs = pr.xs;
  ph.phi.resize(n);
  ph.degenerate.assign(n, 0);
  for (std::size_t m = 0; m < n; ++m) {
    const double sn = 0.5 * pr.dc[m] / pr.eu2(m);
    const double cs = 0.25 * pr.du[m];
    out.trig_deviation = std::max(out.trig_deviation, std::abs(sn * sn + cs * cs - 1.0));
    double a = std::atan2(sn, cs);
    if (m > 0) {
      const double prev = ph.phi[m - 1];
      a += 2.0 * M_PI * std::round((prev - a) / (2.0 * M_PI));
    }
    ph.phi[m] = a;
  }
  if (!(out.trig_deviation <= tol.trig)) {
    throw Error(ErrorCode::NotConformal,
                "sin^2 + cos^2 of the recovered angle misses 1 by " + fmt_num(out.trig_deviation));
  }
  ph.dphi = derivative4(ph.phi, g.hx);
  for (std::size_t m = 0; m < n; ++m)
    ph.degenerate[m] = std::abs(ph.dphi[m] + 2.0 * std::sin(ph.phi[m])) < 1e-8;
  return out;
}

// ---------------------------------------------------------------------------
// Rotation-equivariant classical Darboux transform.

struct EquivariantSeed {
  Quaternion lambda0;
  Quaternion m0 = kOne;
};

/// C(τ) = kτ − τk + e^{u/2} j − ρ e^{−u/2} τ j τ, the y-equation of the
/// reduced Riccati equation for τ = ΛM⁻¹.
inline Quaternion equivariant_constraint(const Quaternion& tau, double eu2, double rho) {
  return kK * tau - tau * kK + eu2 * kJ - (rho / eu2) * (tau * kJ * tau);
}

/// τ0 = p i + q k on the constraint, taking the root with the larger
/// |e^{u/2} + 2p| so that f̂ stays away from the axis.
inline EquivariantSeed default_equivariant_seed(double eu2, double rho, double q = 0.0) {
  if (rho == 0.0) {
    throw Error(ErrorCode::SeedConstraintViolated,
                "rho = 0 admits only the seed on the rotation axis");
  }
  // ρ e^{−u/2}(p² + q²) − 2p − e^{u/2} = 0
  const double qa = rho / eu2, qb = -2.0, qc = qa * q * q - eu2;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) {
    throw Error(ErrorCode::SeedConstraintViolated, "no admissible seed for rho = " + fmt_num(rho) +
                                                       ", q = " + fmt_num(q));
  }
  const double p1 = (-qb + std::sqrt(disc)) / (2.0 * qa);
  const double p2 = (-qb - std::sqrt(disc)) / (2.0 * qa);
  const double p = std::abs(eu2 + 2.0 * p1) >= std::abs(eu2 + 2.0 * p2) ? p1 : p2;
  return {Quaternion(0, p, 0, q), kOne};
}

struct EquivariantResult {
  std::vector<double> xs;
  std::vector<Quaternion> lambda;
  std::vector<Quaternion> m;
  std::vector<Quaternion> tau;
  EquivariantSeed seed;
  double initial_violation = 0.0;
  double max_violation = 0.0;
  /// Profile of f̂(x, 0) = F + τ.
  RevolutionProfile profile_hat;
};

/// Integrates Λ′ = −F′M, M′ = −ρF′⁻¹Λ together with the PIII equation
/// (so F′ is exact at RK4 half steps), where F(x) = f(x, 0).
inline EquivariantResult equivariant_darboux_revolution(const PhiSolution& sol, double rho,
                                                        std::optional<EquivariantSeed> seed = {},
                                                        double seed_tol = 1e-8) {
  const auto pr = profile_from_phi(sol);
  const std::size_t n = sol.size();
  const int sg = pr.sigma;
  auto fprime = [sg](double x, double p, double q) {
    const double e = sg * x * (q + 2.0 * std::sin(p)) / 2.0;
    return Quaternion(0, e * std::cos(p), 0, e * std::sin(sg * p));
  };
  EquivariantResult out;
  out.xs = sol.xs;
  out.seed = seed.value_or(default_equivariant_seed(pr.eu2(0), rho));
  if (!(norm(out.seed.m0) > 0.0)) throw Error(ErrorCode::ZeroDenominator, "M0 = 0");
  const double e0 = pr.eu2(0);
  const Quaternion tau0 = out.seed.lambda0 * inverse(out.seed.m0);
  out.initial_violation = norm(equivariant_constraint(tau0, e0, rho));
  if (!(out.initial_violation <= seed_tol * std::max(1.0, e0 + norm(tau0)))) {
    throw Error(ErrorCode::SeedConstraintViolated,
                "seed violates the equivariance constraint by " + fmt_num(out.initial_violation));
  }

  struct State {
    double p, q;
    Quaternion l, m;
  };
  auto rhs = [&](double x, const State& s) {
    const Quaternion fp = fprime(x, s.p, s.q);
    return State{s.q, piii_ddphi(x, s.p, s.q), -(fp * s.m), -rho * (inverse(fp) * s.l)};
  };
  auto add = [](const State& s, double t, const State& k) {
    return State{s.p + t * k.p, s.q + t * k.q, s.l + t * k.l, s.m + t * k.m};
  };
  out.lambda.resize(n);
  out.m.resize(n);
  out.tau.resize(n);
  State s{sol.phi[0], sol.dphi[0], out.seed.lambda0, out.seed.m0};
  const double h = sol.step();
  for (std::size_t k = 0; k < n; ++k) {
    out.lambda[k] = s.l;
    out.m[k] = s.m;
    if (!(norm(s.m) > 1e-12)) {
      throw Error(ErrorCode::ZeroDenominator, "M vanishes near x = " + fmt_num(sol.xs[k]));
    }
    out.tau[k] = s.l * inverse(s.m);
    out.max_violation =
        std::max(out.max_violation, norm(equivariant_constraint(out.tau[k], pr.eu2(k), rho)));
    if (k + 1 == n) break;
    const double x = sol.xs[k];
    const auto k1 = rhs(x, s);
    const auto k2 = rhs(x + 0.5 * h, add(s, 0.5 * h, k1));
    const auto k3 = rhs(x + 0.5 * h, add(s, 0.5 * h, k2));
    const auto k4 = rhs(x + h, add(s, h, k3));
    s = add(s, h / 6.0, State{k1.p + 2 * k2.p + 2 * k3.p + k4.p, k1.q + 2 * k2.q + 2 * k3.q + k4.q,
                              k1.l + 2.0 * k2.l + 2.0 * k3.l + k4.l,
                              k1.m + 2.0 * k2.m + 2.0 * k3.m + k4.m});
  }

  auto& ph = out.profile_hat;
  ph.xs = sol.xs;
  ph.u.resize(n);
  ph.c.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Quaternion fh = Quaternion(0, pr.eu2(k) / kRevolutionA, 0, pr.c[k] / kRevolutionA) + out.tau[k];
    const double e = kRevolutionA * std::hypot(fh.x, fh.y);
    if (!(e > 0.0)) throw Error(ErrorCode::Degenerate, "transform meets the rotation axis");
    ph.u[k] = 2.0 * std::log(e);
    ph.c[k] = kRevolutionA * fh.z;
  }
  ph.du = derivative4(ph.u, h);
  ph.dc = derivative4(ph.c, h);
  return out;
}

/// f̂(x, y) = e^{ky}(F + τ)e^{−ky} on the (stride-subsampled) x nodes.
inline SurfaceGrid equivariant_surface(const RevolutionProfile& pr, const EquivariantResult& er,
                                       double y0, double hy, int ny, int stride = 1) {
  const int nx = static_cast<int>((pr.xs.size() - 1) / stride) + 1;
  GridSpec g{nx, ny, pr.xs.front(), y0, pr.step() * stride, hy};
  g.validate();
  ScalarField f(g);
  for (int i = 0; i < nx; ++i) {
    const std::size_t m = static_cast<std::size_t>(i) * stride;
    const Quaternion base =
        Quaternion(0, pr.eu2(m) / pr.a, 0, pr.c[m] / pr.a) + er.tau[m];
    for (int j = 0; j < ny; ++j) f(i, j) = rotate_k(base, pr.a * g.y(j));
  }
  return SurfaceGrid(std::move(f));
}

/// max |f̂_reduced − f̂_2D| between the equivariant transform and the
/// full 2D Darboux solve seeded identically at the (x0, y0) corner.
inline double equivariant_agreement(const RevolutionProfile& pr, const EquivariantResult& er,
                                    double rho, double h, int ny, int stride) {
  const auto f = surface_from_profile(pr, 0.0, h, ny, stride);
  const auto fr = equivariant_surface(pr, er, 0.0, h, ny, stride);
  const Node corner{0, 0};
  const auto cp = christoffel(f, std::numeric_limits<double>::infinity(), corner);
  DarbouxSeeds seeds;
  seeds.lambda_inf0 = er.seed.lambda0;
  seeds.lambda_L0 = er.seed.m0;
  seeds.base = corner;
  DarbouxOptions opt;
  opt.enforce_path = false;
  const auto ds = darboux_solve(f, cp, rho, seeds, opt);
  double out = 0.0;
  for (std::size_t k = 0; k < f.grid().size(); ++k) {
    if (!ds.mask_f[k]) out = std::max(out, norm(ds.f_hat.f[k] - fr.f[k]));
  }
  return out;
}

struct PiiiTransformOptions {
  std::optional<EquivariantSeed> seed;
  /// Grid used for the 2D classicality and GHIMC checks.
  double check_h = 0.01;
  int check_ny = 41;
  /// Samples dropped at each end of the residual scan.
  std::size_t skip = 4;
  Tolerances tol;
};

struct PiiiTransformResult {
  PhiSolution phi_hat;
  std::vector<double> residual;
  double residual_max = 0.0;
  EquivariantResult equivariant;
  TransformReport dtnr;
  double trig_deviation = 0.0;
  /// Reduced vs full 2D solver on the check grid.
  double agreement_2d = 0.0;
  double ghimc_hat = 0.0;
  double normal_gap_hat = 0.0;
  LinearFit inverse_h_fit_hat;
};

/// φ → profile → surface → equivariant Darboux transform → φ̂, with a
/// classicality gate on the 2D transform.
inline PiiiTransformResult piii_transform(const PhiSolution& sol, double rho,
                                          const PiiiTransformOptions& opt = {}) {
  PiiiTransformResult out;
  const auto pr = profile_from_phi(sol);
  out.equivariant = equivariant_darboux_revolution(sol, rho, opt.seed);

  const int stride = std::max(1, static_cast<int>(std::lround(opt.check_h / sol.step())));
  const auto f2 = surface_from_profile(pr, 0.0, opt.check_h, opt.check_ny, stride);
  const auto fh2 = equivariant_surface(pr, out.equivariant, 0.0, opt.check_h, opt.check_ny, stride);
  const auto sd = mean_curvature(f2);
  out.dtnr = dtnr_check(f2, sd, fh2, {}, opt.tol.certificate);
  if (!out.dtnr.is_classical) {
    throw Error(ErrorCode::NotClassical, "classicality residual " +
                                             fmt_num(out.dtnr.classical.max) + " > tol " +
                                             fmt_num(opt.tol.certificate));
  }
  out.agreement_2d = equivariant_agreement(pr, out.equivariant, rho, opt.check_h, opt.check_ny, stride);
  const auto sdh = mean_curvature(fh2);
  try {
    out.ghimc_hat = ghimc_residual(fh2, sdh).max;
    out.inverse_h_fit_hat = inverse_h_linear_fit(sdh, default_hmin(fh2.grid()));
  } catch (const Error&) {
    out.ghimc_hat = std::numeric_limits<double>::infinity();
  }
  out.normal_gap_hat = detect_real_h(sdh).normal_gap;

  const auto fh1 = equivariant_surface(pr, out.equivariant, 0.0, opt.check_h, 5, 1);
  const auto ex = phi_from_surface(fh1, opt.tol);
  out.trig_deviation = ex.trig_deviation;
  out.phi_hat = ex.phi;
  out.residual = piii_residuals(out.phi_hat);
  out.residual_max = max_abs(out.residual, opt.skip);
  return out;
}

}  // namespace himc
