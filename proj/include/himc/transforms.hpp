#pragma once

// Backward Bäcklund and Darboux transforms, Christoffel pairs, and the
// identity and equivariance checks attached to them.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "himc/conformal.hpp"
#include "himc/error.hpp"
#include "himc/grid.hpp"
#include "himc/quaternion.hpp"
#include "himc/tolerances.hpp"

namespace himc {

inline constexpr int kMarginTransform = 5;

namespace detail {

inline double median_norm(const ScalarField& a, const Mask& mask) {
  std::vector<double> v;
  v.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    if (mask.empty() || !mask[k]) v.push_back(norm(a[k]));
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

inline Node checked_base(const GridSpec& g, std::optional<Node> base) {
  const Node b = base.value_or(center_node(g));
  if (b.i < 0 || b.j < 0 || b.i >= g.nx || b.j >= g.ny) {
    throw Error(ErrorCode::InvalidConfig, "base node outside the grid");
  }
  return b;
}

/// Relative change |a − b| / max(|a|, |b|); 0 when both vanish.
inline double relative_change(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Backward Bäcklund transform.

struct BackwardOptions {
  std::optional<Node> base;
  Quaternion mu0{};
  std::optional<double> hmin;
  double ghimc_tol = 1e-2;
};

struct BackwardResult {
  ScalarField h_bar;
  ScalarField mu;
  Mask mask;
  Node base;
  /// Typical size of the two terms whose difference gives h; used to
  /// decide when h̄ is numerically zero.
  double scale = 0.0;
  Residual ghimc;
  /// ½(dh̄ − R∗dh̄).
  Residual dhbar_R;
};

/// μ with dμ = ∗dH⁻¹, h = ½(−μ + f − NH⁻¹), returns h̄.
inline BackwardResult backward_baecklund(const SurfaceGrid& s, const SphereData& sd,
                                         const BackwardOptions& opt = {}) {
  const auto& g = s.grid();
  const double hmin = opt.hmin.value_or(default_hmin(g));
  BackwardResult out;
  out.base = detail::checked_base(g, opt.base);
  out.ghimc = ghimc_residual(s, sd, hmin);
  if (!(out.ghimc.max <= opt.ghimc_tol)) {
    throw Error(ErrorCode::NotGHIMC, "max |d*dH^-1| = " + fmt_num(out.ghimc.max) +
                                         " > tol " + fmt_num(opt.ghimc_tol));
  }
  const auto hi = inverse_h(sd, hmin);
  const auto sdhi = hodge_star(differential(hi.value));
  const Mask dm = dilate(hi.mask, g, 1);
  auto mu = path_integral(sdhi, out.base, opt.mu0, PathOrder::RowFirst, dm);
  out.mask = mask_union(mu.mask, dm);
  out.mu = std::move(mu.value);
  const auto nhi = sd.N * hi.value;
  const auto fm = s.f - out.mu;
  out.h_bar = conj(0.5 * (fm - nhi));
  out.scale = detail::median_norm(fm, out.mask) + detail::median_norm(nhi, out.mask);

  const auto dh = differential(out.h_bar);
  const auto part = 0.5 * (dh - sd.R * hodge_star(dh));
  const Mask rm = dilate(out.mask, g, 1);
  out.dhbar_R =
      make_residual("backward_dhbar_R", interior_stats(part, kMarginGhimc, &rm), kMarginGhimc);
  return out;
}

/// Solutions T of N T + T H T + T R = 0 at a node: T⁻¹ = ½HN + ½(Z + RZN).
/// Z = 0 gives the antipode −2NH⁻¹ on the mean curvature sphere.
inline Quaternion central_sphere_seed(const SphereData& sd, Node p, const Quaternion& z = {}) {
  const auto k = sd.H.grid.index(p.i, p.j);
  const auto& N = sd.N[k];
  const auto& R = sd.R[k];
  const Quaternion x = 0.5 * (sd.H[k] * N) + 0.5 * (z + R * z * N);
  return inverse(x);
}

struct BackwardDarbouxOptions {
  std::optional<Quaternion> lambda_inf0;
  double closed_tol = 2e-2;
  double path_tol = 5e-3;
  /// h̄ is treated as zero below degenerate · scale.
  double degenerate = 1e-3;
};

struct BackwardDarboux {
  ScalarField lambda_inf;
  SurfaceGrid f_hat;
  Mask mask;
  Quaternion lambda_inf0;
  Residual closed;     ///< d(−df h̄)
  Residual lambda_eq;  ///< dλ∞ + df h̄
  Residual path;       ///< row-first vs column-first λ∞
  Residual dual;       ///< d(conj h̄⁻¹) − d(conj f̂) conj(λ∞⁻¹)
};

/// λ∞ with dλ∞ = −df h̄ and f̂ = λ∞ h̄⁻¹ + f.
inline BackwardDarboux darboux_from_backward(const SurfaceGrid& s, const SphereData& sd,
                                             const BackwardResult& bb,
                                             const BackwardDarbouxOptions& opt = {}) {
  const auto& g = s.grid();
  BackwardDarboux out;
  const auto kb = g.index(bb.base.i, bb.base.j);
  if (opt.lambda_inf0) {
    out.lambda_inf0 = *opt.lambda_inf0;
  } else {
    out.lambda_inf0 = central_sphere_seed(sd, bb.base) * bb.h_bar[kb];
  }
  const OneForm omega = -1.0 * (sd.df * bb.h_bar);
  Mask in = dilate(bb.mask, g, 1);
  const auto cl = closedness_stats(omega, kMarginGhimc, &in);
  out.closed = make_residual("backward_closed", cl, kMarginGhimc);
  if (!(cl.max <= opt.closed_tol)) {
    throw Error(ErrorCode::NotClosed, "max |d(df h_bar)| = " + fmt_num(cl.max) + " > tol " +
                                          fmt_num(opt.closed_tol));
  }
  auto lam = path_integral(omega, bb.base, out.lambda_inf0, PathOrder::RowFirst, in);
  const auto lam_c = path_integral(omega, bb.base, out.lambda_inf0, PathOrder::ColumnFirst, in);
  Mask both = mask_union(lam.mask, lam_c.mask);
  out.path = make_residual("backward_path",
                           interior_stats(lam.value - lam_c.value, kMarginGhimc, &both),
                           kMarginGhimc);

  out.mask = mask_union(lam.mask, in);
  const double thr = opt.degenerate * bb.scale;
  const auto hbi = invert(bb.h_bar, out.mask, thr);
  std::size_t live = 0;
  for (int j = kMarginTransform; j < g.ny - kMarginTransform; ++j)
    for (int i = kMarginTransform; i < g.nx - kMarginTransform; ++i)
      if (!out.mask[g.index(i, j)]) ++live;
  if (live == 0) {
    throw Error(ErrorCode::ZeroDenominator,
                "h_bar vanishes (|h_bar| < " + fmt_num(thr) + ") on the whole working region");
  }
  out.lambda_inf = std::move(lam.value);
  ScalarField fh = out.lambda_inf * hbi + s.f;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (out.mask[k]) fh[k] = Quaternion{};
  out.f_hat = SurfaceGrid(std::move(fh));

  const Mask m1 = dilate(out.mask, g, 1);
  const auto eq = differential(out.lambda_inf) + sd.df * bb.h_bar;
  out.lambda_eq = make_residual("backward_lambda_eq", interior_stats(eq, kMarginGhimc, &m1),
                                kMarginGhimc);

  Mask lm = out.mask;
  const auto li = invert(out.lambda_inf, lm, 0.0);
  const Mask m2 = dilate(lm, g, 1);
  const auto dual = differential(conj(hbi)) - differential(conj(out.f_hat.f)) * conj(li);
  out.dual = make_residual("backward_dual", interior_stats(dual, kMarginGhimc, &m2),
                           kMarginGhimc);
  return out;
}

// ---------------------------------------------------------------------------
// Christoffel pairs and classical Darboux transforms.

struct ChristoffelPair {
  ScalarField g;
  /// dg = f_x⁻¹ dx − f_y⁻¹ dy, sampled from f.
  OneForm dg;
  Mask mask;
  Residual closed;
  Residual df_dg;
  Residual dg_df;
  Residual dfbar_dg;
  Residual dg_dfbar;
};

inline ChristoffelPair christoffel(const SurfaceGrid& s, double closed_tol = 2e-2,
                                   std::optional<Node> base = std::nullopt,
                                   const Quaternion& g0 = {}) {
  const auto& gr = s.grid();
  const auto df = differential(s.f);
  ChristoffelPair out;
  out.mask = empty_mask(gr);
  const double med = detail::median_norm(df.cx, {});
  const auto fxi = invert(df.cx, out.mask, 1e-9 * med);
  const auto fyi = invert(df.cy, out.mask, 1e-9 * med);
  out.dg = {fxi, -1.0 * fyi};
  const int margin = 2;
  const auto cl = closedness_stats(out.dg, margin, &out.mask);
  out.closed = make_residual("christoffel_closed", cl, margin);
  if (!(cl.max <= closed_tol)) {
    throw Error(ErrorCode::NotClosed,
                "dg = f_x^-1 dx - f_y^-1 dy is not closed (max |d(dg)| = " + fmt_num(cl.max) +
                    " > tol " + fmt_num(closed_tol) +
                    "); the grid coordinates are not isothermic");
  }
  const Node b = detail::checked_base(gr, base);
  auto p = path_integral(out.dg, b, g0, PathOrder::RowFirst, out.mask);
  out.g = std::move(p.value);
  out.mask = mask_union(out.mask, p.mask);
  const OneForm dfb = conj(df);
  const Mask* m = &out.mask;
  out.df_dg = make_residual("christoffel_df_dg", interior_stats(wedge(df, out.dg).density, 1, m), 1);
  out.dg_df = make_residual("christoffel_dg_df", interior_stats(wedge(out.dg, df).density, 1, m), 1);
  out.dfbar_dg =
      make_residual("christoffel_dfbar_dg", interior_stats(wedge(dfb, out.dg).density, 1, m), 1);
  out.dg_dfbar =
      make_residual("christoffel_dg_dfbar", interior_stats(wedge(out.dg, dfb).density, 1, m), 1);
  return out;
}

struct DarbouxSeeds {
  /// Defaults to the central-sphere seed −2NH⁻¹ at the base node (or −f
  /// there when H vanishes).
  std::optional<Quaternion> lambda_inf0;
  Quaternion lambda_L0 = kOne;
  std::optional<Node> base;
};

struct DarbouxOptions {
  double path_tol = 5e-3;
  double denominator = 1e-9;
  std::optional<double> hmin;
  /// Throw PathInconsistent when the two sweeps disagree beyond path_tol.
  bool enforce_path = true;
};

struct DarbouxData {
  ScalarField lambda_inf;
  ScalarField lambda_L;
  double rho = 0.0;
  Node base;
  Quaternion lambda_inf0;
  Quaternion lambda_L0;
};

struct DarbouxSolution {
  DarbouxData data;
  SurfaceGrid f_hat;
  /// ĝ = λL λ∞⁻¹ + ρ g, the transform of the partner ρ g.
  ScalarField g_hat;
  Mask mask_f;
  Mask mask_g;
  Residual path;
  Residual eq_inf;       ///< dλ∞ + df λL
  Residual eq_L;         ///< dλL + ρ dg λ∞
  Residual dlambdaL_R;   ///< ½(dλL − R∗dλL)
  Residual wedge_fhat_ghat;
  Residual wedge_ghat_fhat;
};

namespace detail {

struct LambdaPair {
  Quaternion inf;
  Quaternion L;
};

/// One RK4 step of λ∞′ = −A λL, λL′ = −B λ∞ with A, B linear in the
/// path parameter between the end values.
inline LambdaPair rk4_edge(const LambdaPair& s, double h, const Quaternion& a0,
                           const Quaternion& a1, const Quaternion& b0, const Quaternion& b1) {
  const Quaternion am = 0.5 * (a0 + a1);
  const Quaternion bm = 0.5 * (b0 + b1);
  auto rhs = [](const Quaternion& a, const Quaternion& b, const LambdaPair& v) {
    return LambdaPair{-(a * v.L), -(b * v.inf)};
  };
  auto add = [](const LambdaPair& v, double t, const LambdaPair& k) {
    return LambdaPair{v.inf + t * k.inf, v.L + t * k.L};
  };
  const auto k1 = rhs(a0, b0, s);
  const auto k2 = rhs(am, bm, add(s, 0.5 * h, k1));
  const auto k3 = rhs(am, bm, add(s, 0.5 * h, k2));
  const auto k4 = rhs(a1, b1, add(s, h, k3));
  return {s.inf + (h / 6.0) * (k1.inf + 2.0 * k2.inf + 2.0 * k3.inf + k4.inf),
          s.L + (h / 6.0) * (k1.L + 2.0 * k2.L + 2.0 * k3.L + k4.L)};
}

struct LambdaFields {
  ScalarField inf;
  ScalarField L;
};

inline LambdaFields sweep(const OneForm& df, const OneForm& dg, double rho, Node base,
                          const LambdaPair& seed, PathOrder order) {
  const auto& g = df.grid();
  LambdaFields out{ScalarField(g), ScalarField(g)};
  auto set = [&](std::size_t k, const LambdaPair& v) {
    out.inf[k] = v.inf;
    out.L[k] = v.L;
  };
  auto get = [&](std::size_t k) { return LambdaPair{out.inf[k], out.L[k]}; };
  auto line_x = [&](int j) {
    for (int dir : {+1, -1}) {
      for (int i = base.i + dir; i >= 0 && i < g.nx; i += dir) {
        const auto k0 = g.index(i - dir, j);
        const auto k1 = g.index(i, j);
        set(k1, rk4_edge(get(k0), dir * g.hx, df.cx[k0], df.cx[k1], rho * dg.cx[k0],
                         rho * dg.cx[k1]));
      }
    }
  };
  auto line_y = [&](int i) {
    for (int dir : {+1, -1}) {
      for (int j = base.j + dir; j >= 0 && j < g.ny; j += dir) {
        const auto k0 = g.index(i, j - dir);
        const auto k1 = g.index(i, j);
        set(k1, rk4_edge(get(k0), dir * g.hy, df.cy[k0], df.cy[k1], rho * dg.cy[k0],
                         rho * dg.cy[k1]));
      }
    }
  };
  set(g.index(base.i, base.j), seed);
  if (order == PathOrder::RowFirst) {
    line_x(base.j);
    for (int i = 0; i < g.nx; ++i) line_y(i);
  } else {
    // Column through the base, then every row from it.
    for (int dir : {+1, -1}) {
      for (int j = base.j + dir; j >= 0 && j < g.ny; j += dir) {
        const auto k0 = g.index(base.i, j - dir);
        const auto k1 = g.index(base.i, j);
        set(k1, rk4_edge(get(k0), dir * g.hy, df.cy[k0], df.cy[k1], rho * dg.cy[k0],
                         rho * dg.cy[k1]));
      }
    }
    for (int j = 0; j < g.ny; ++j) line_x(j);
  }
  return out;
}

}  // namespace detail

/// Default λ∞ seed at the base node.
inline Quaternion default_lambda_inf0(const SurfaceGrid& s, const SphereData& sd, Node base,
                                      double hmin) {
  const auto k = s.grid().index(base.i, base.j);
  if (!sd.mask[k] && norm(sd.H[k]) >= hmin) return central_sphere_seed(sd, base);
  return -s.f[k];
}

/// Integrates dλ∞ = −df λL, dλL = −ρ dg λ∞ and forms f̂ = λ∞λL⁻¹ + f.
inline DarbouxSolution darboux_solve(const SurfaceGrid& s, const ChristoffelPair& cp, double rho,
                                     const DarbouxSeeds& seeds = {},
                                     const DarbouxOptions& opt = {}) {
  const auto& g = s.grid();
  require_same_grid(g, cp.g.grid);
  const Node base = detail::checked_base(g, seeds.base);
  const auto sd = mean_curvature(s);
  DarbouxSolution out;
  out.data.rho = rho;
  out.data.base = base;
  out.data.lambda_L0 = seeds.lambda_L0;
  out.data.lambda_inf0 =
      seeds.lambda_inf0.value_or(default_lambda_inf0(s, sd, base, opt.hmin.value_or(default_hmin(g))));

  const detail::LambdaPair seed{out.data.lambda_inf0, out.data.lambda_L0};
  auto a = detail::sweep(sd.df, cp.dg, rho, base, seed, PathOrder::RowFirst);
  const auto b = detail::sweep(sd.df, cp.dg, rho, base, seed, PathOrder::ColumnFirst);
  const auto diff = zip_field(a.inf - b.inf, a.L - b.L, [](const Quaternion& p, const Quaternion& q) {
    return std::max(norm(p), norm(q));
  });
  out.path = make_residual("darboux_path", interior_stats(diff, 1, &cp.mask), 1);
  if (opt.enforce_path && !(out.path.max <= opt.path_tol)) {
    throw Error(ErrorCode::PathInconsistent, "row-first and column-first solutions differ by " +
                                                 fmt_num(out.path.max) + " > tol " +
                                                 fmt_num(opt.path_tol));
  }
  out.data.lambda_inf = std::move(a.inf);
  out.data.lambda_L = std::move(a.L);

  out.mask_f = cp.mask;
  const auto li = invert(out.data.lambda_L, out.mask_f,
                         opt.denominator * detail::median_norm(out.data.lambda_L, {}));
  out.mask_g = cp.mask;
  const auto ii = invert(out.data.lambda_inf, out.mask_g,
                         opt.denominator * detail::median_norm(out.data.lambda_inf, {}));
  ScalarField fh = out.data.lambda_inf * li + s.f;
  ScalarField gh = out.data.lambda_L * ii + rho * cp.g;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (out.mask_f[k]) fh[k] = Quaternion{};
    if (out.mask_g[k]) gh[k] = Quaternion{};
  }
  out.f_hat = SurfaceGrid(std::move(fh));
  out.g_hat = std::move(gh);

  const Mask m1 = dilate(cp.mask, g, 1);
  const auto dli = differential(out.data.lambda_inf);
  const auto dlL = differential(out.data.lambda_L);
  out.eq_inf = make_residual("darboux_eq_inf",
                             interior_stats(dli + sd.df * out.data.lambda_L, 1, &m1), 1);
  out.eq_L = make_residual("darboux_eq_L",
                           interior_stats(dlL + rho * (cp.dg * out.data.lambda_inf), 1, &m1), 1);
  out.dlambdaL_R = make_residual(
      "darboux_dlambdaL_R", interior_stats(0.5 * (dlL - sd.R * hodge_star(dlL)), 1, &m1), 1);
  const Mask mw = dilate(mask_union(out.mask_f, out.mask_g), g, 1);
  const auto dfh = differential(out.f_hat.f);
  const auto dgh = differential(out.g_hat);
  out.wedge_fhat_ghat =
      make_residual("darboux_wedge_fhat_ghat", interior_stats(wedge(dfh, dgh).density, 1, &mw), 1);
  out.wedge_ghat_fhat =
      make_residual("darboux_wedge_ghat_fhat", interior_stats(wedge(dgh, dfh).density, 1, &mw), 1);
  return out;
}

// ---------------------------------------------------------------------------
// Identity suite for a Darboux pair (f, f̂).

struct TransformReport {
  Residual sphere;     ///< (i)   N T + T H T + T R
  Residual left;       ///< (ii)  N̂ − N − T H
  Residual right;      ///< (iii) R̂ − R − Ĥ T
  Residual classical;  ///< (iv)  R̂ + T⁻¹ N T
  Residual h_change;   ///< (v)   Ĥ − H
  double h_scale = 0.0;  ///< max |H| over the same region
  bool is_classical = false;
};

inline TransformReport dtnr_check(const SurfaceGrid& s, const SphereData& sd,
                                  const SurfaceGrid& f_hat, const Mask& mask_hat,
                                  double classical_tol = 5e-3, int margin = kMarginTransform) {
  const auto& g = s.grid();
  require_same_grid(g, f_hat.grid());
  const auto sh = mean_curvature(f_hat);
  Mask m = mask_union(dilate(mask_union(mask_hat, sh.branch), g, 2), sd.mask);
  ScalarField r1(g), r2(g), r3(g), r4(g), r5(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (m[k]) continue;
    const Quaternion t = f_hat.f[k] - s.f[k];
    const auto& N = sd.N[k];
    const auto& R = sd.R[k];
    const auto& H = sd.H[k];
    r1[k] = N * t + t * H * t + t * R;
    r2[k] = sh.N[k] - N - t * H;
    r3[k] = sh.R[k] - R - sh.H[k] * t;
    if (norm(t) > 0.0) {
      r4[k] = sh.R[k] + inverse(t) * N * t;
    } else {
      m[k] = 1;
    }
    r5[k] = sh.H[k] - H;
  }
  TransformReport rep;
  rep.sphere = make_residual("dtnr_i_sphere", interior_stats(r1, margin, &m), margin);
  rep.left = make_residual("dtnr_ii_left_normal", interior_stats(r2, margin, &m), margin);
  rep.right = make_residual("dtnr_iii_right_normal", interior_stats(r3, margin, &m), margin);
  rep.classical = make_residual("dtnr_iv_classical", interior_stats(r4, margin, &m), margin);
  rep.h_change = make_residual("dtnr_v_h_change", interior_stats(r5, margin, &m), margin);
  rep.h_scale = interior_stats(sd.H, margin, &m).max;
  rep.is_classical = rep.classical.max <= classical_tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Euclidean motions.

struct InvarianceEntry {
  std::string name;
  double before = 0.0;
  double after = 0.0;
  double relative = 0.0;
};

/// Residual functionals of f and of B∘f side by side.
inline std::vector<InvarianceEntry> motion_invariance(const SurfaceGrid& s, const Motion& m) {
  auto eval = [](const SurfaceGrid& x) {
    std::vector<std::pair<std::string, double>> v;
    const auto sd = mean_curvature(x);
    v.emplace_back("conformality", conformality_residual(x).max());
    v.emplace_back("eta", eta_residual(x, sd).max);
    v.emplace_back("willmore_dw", willmore_diagnostics(x, sd).dw.max);
    try {
      v.emplace_back("ghimc", ghimc_residual(x, sd).max);
      const auto c = cond_characterization(x, sd, Quaternion{});
      v.emplace_back("cond_identity", c.identity.max);
      v.emplace_back("cond_closed", c.closed.max);
    } catch (const Error&) {
    }
    return v;
  };
  const auto a = eval(s);
  const auto b = eval(SurfaceGrid(map_field(s.f, [&m](const Quaternion& q) { return m(q); })));
  std::vector<InvarianceEntry> out;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
    out.push_back({a[k].first, a[k].second, b[k].second,
                   detail::relative_change(a[k].second, b[k].second)});
  }
  return out;
}

struct EquivarianceReport {
  std::string transform;
  /// Max |T(B f) − B T(f)| over unmasked interior nodes.
  double deviation = 0.0;
  /// Backward only: H of B∘f against +sHr⁻¹ and −sHr⁻¹.
  double h_plus = 0.0;
  double h_minus = 0.0;
  std::string h_sign;
};

/// Darboux transform of B∘f (seeds λ∞0 ↦ rλ∞0 s⁻¹, λL0 ↦ sλL0 s⁻¹, g0 ↦ s g0 r⁻¹)
/// against B applied to the Darboux transform of f.
inline EquivarianceReport equivariance_darboux(const SurfaceGrid& s, double rho, const Motion& m,
                                               const DarbouxSeeds& seeds = {},
                                               const Tolerances& tol = {}) {
  const auto& g = s.grid();
  const Node base = detail::checked_base(g, seeds.base);
  const auto cp = christoffel(s, tol.closed, base);
  DarbouxOptions opt;
  opt.enforce_path = false;
  DarbouxSeeds sa = seeds;
  sa.base = base;
  if (!sa.lambda_inf0) {
    sa.lambda_inf0 = default_lambda_inf0(s, mean_curvature(s), base, default_hmin(g));
  }
  const auto da = darboux_solve(s, cp, rho, sa, opt);

  const auto moved = SurfaceGrid(map_field(s.f, [&m](const Quaternion& q) { return m(q); }));
  const auto cpb = christoffel(moved, tol.closed, base);
  DarbouxSeeds sb;
  sb.base = base;
  sb.lambda_inf0 = m.r() * (*sa.lambda_inf0) * conj(m.s());
  sb.lambda_L0 = m.s() * sa.lambda_L0 * conj(m.s());
  const auto db = darboux_solve(moved, cpb, rho, sb, opt);

  const Mask mk = mask_union(da.mask_f, db.mask_f);
  const auto dev = zip_field(da.f_hat.f, db.f_hat.f,
                             [&m](const Quaternion& p, const Quaternion& q) { return m(p) - q; });
  EquivarianceReport rep;
  rep.transform = "darboux";
  rep.deviation = interior_stats(dev, 0, &mk).max;
  return rep;
}

/// Backward Bäcklund transform of B∘f (μ0 ↦ rμ0 s⁻¹) against s h̄ r⁻¹ + t̄/2,
/// and resolution of the sign in H ↦ ±sHr⁻¹.
inline EquivarianceReport equivariance_backward(const SurfaceGrid& s, const Motion& m,
                                                const BackwardOptions& opt = {}) {
  const auto sa = mean_curvature(s);
  const auto ba = backward_baecklund(s, sa, opt);
  const auto moved = SurfaceGrid(map_field(s.f, [&m](const Quaternion& q) { return m(q); }));
  const auto sb = mean_curvature(moved);
  BackwardOptions ob = opt;
  ob.base = ba.base;
  ob.mu0 = m.r() * opt.mu0 * conj(m.s());
  const auto bb = backward_baecklund(moved, sb, ob);

  EquivarianceReport rep;
  rep.transform = "backward";
  const Mask mk = mask_union(ba.mask, bb.mask);
  const Quaternion tb = 0.5 * conj(m.t());
  const auto dev = zip_field(ba.h_bar, bb.h_bar, [&](const Quaternion& p, const Quaternion& q) {
    return m.s() * p * conj(m.r()) + tb - q;
  });
  rep.deviation = interior_stats(dev, kMarginW, &mk).max;
  const auto hp = zip_field(sa.H, sb.H, [&](const Quaternion& p, const Quaternion& q) {
    return q - m.s() * p * conj(m.r());
  });
  const auto hm = zip_field(sa.H, sb.H, [&](const Quaternion& p, const Quaternion& q) {
    return q + m.s() * p * conj(m.r());
  });
  const Mask hmk = mask_union(sa.mask, sb.mask);
  rep.h_plus = interior_stats(hp, kMarginH, &hmk).max;
  rep.h_minus = interior_stats(hm, kMarginH, &hmk).max;
  rep.h_sign = rep.h_plus <= rep.h_minus ? "+" : "-";
  return rep;
}

}  // namespace himc
