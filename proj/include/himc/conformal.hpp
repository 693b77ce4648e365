#pragma once

// Mean curvature sphere data (N, R, H) of a sampled conformal map, the Hopf
// one-form w and the residual functionals built from them.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "himc/error.hpp"
#include "himc/grid.hpp"
#include "himc/quaternion.hpp"
#include "himc/tolerances.hpp"

namespace himc {

struct SurfaceGrid {
  ScalarField f;

  SurfaceGrid() = default;
  explicit SurfaceGrid(ScalarField field) : f(std::move(field)) { f.grid.validate(); }
  const GridSpec& grid() const { return f.grid; }
};

/// Samples fn(x, y) on the grid.
template <class Fn>
SurfaceGrid sample_surface(const GridSpec& g, Fn&& fn) {
  g.validate();
  ScalarField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f(i, j) = fn(g.x(i), g.y(j));
  return SurfaceGrid(std::move(f));
}

/// Named max/mean pair over interior nodes.
struct Residual {
  std::string name;
  double max = 0.0;
  double mean = 0.0;
  double masked_fraction = 0.0;
  int margin = 0;
  Node argmax{};
};

inline Residual make_residual(std::string name, const NormStats& st, int margin) {
  return {std::move(name), st.max, st.mean, st.excluded_fraction(), margin, st.argmax};
}

/// Stencil depths: each derivative level spoils one more boundary ring.
inline constexpr int kMarginH = 2;
inline constexpr int kMarginW = 3;
inline constexpr int kMarginGhimc = 4;

struct NormalData {
  ScalarField N;
  ScalarField R;
  /// Raw quotients f_y f_x⁻¹ and −f_x⁻¹ f_y before projection to S².
  ScalarField N_raw;
  ScalarField R_raw;
  Mask branch;
  OneForm df;
};

inline Quaternion project_to_sphere(const Quaternion& q) {
  const Quaternion v = im(q);
  const double n = norm(v);
  return n > 0.0 ? v / n : Quaternion{};
}

/// N = f_y f_x⁻¹ and R = −f_x⁻¹ f_y, projected onto the unit imaginary
/// sphere. Branch nodes (|f_x| tiny) are masked.
inline NormalData normals(const SurfaceGrid& s, double branch_rel = 1e-9) {
  const auto& g = s.grid();
  NormalData out;
  out.df = differential(s.f);
  std::vector<double> mags(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) mags[k] = norm(out.df.cx[k]);
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  out.branch.assign(g.size(), 0);
  out.N = ScalarField(g);
  out.R = ScalarField(g);
  out.N_raw = ScalarField(g);
  out.R_raw = ScalarField(g);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!(mags[k] > branch_rel * median) || !std::isfinite(mags[k])) {
      out.branch[k] = 1;
      ++bad;
      continue;
    }
    const Quaternion fxi = inverse(out.df.cx[k]);
    out.N_raw[k] = out.df.cy[k] * fxi;
    out.R_raw[k] = -(fxi * out.df.cy[k]);
    out.N[k] = project_to_sphere(out.N_raw[k]);
    out.R[k] = project_to_sphere(out.R_raw[k]);
  }
  if (bad == g.size()) throw Error(ErrorCode::AllBranch, "f_x vanishes on the whole grid");
  return out;
}

struct SphereData {
  ScalarField N;
  ScalarField R;
  ScalarField H;
  Mask branch;
  /// Nodes where H is not defined (branch mask grown by the N stencil).
  Mask mask;
  OneForm df;
};

/// H = ½ f_x⁻¹ (N_x − N N_y).
inline SphereData mean_curvature(const SurfaceGrid& s, double branch_rel = 1e-9) {
  auto nd = normals(s, branch_rel);
  const auto& g = s.grid();
  SphereData sd;
  sd.N = std::move(nd.N);
  sd.R = std::move(nd.R);
  sd.branch = std::move(nd.branch);
  sd.df = std::move(nd.df);
  sd.mask = dilate(sd.branch, g, 1);
  const auto dN = differential(sd.N);
  sd.H = ScalarField(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (sd.mask[k]) continue;
    sd.H[k] = 0.5 * inverse(sd.df.cx[k]) * (dN.cx[k] - sd.N[k] * dN.cy[k]);
  }
  return sd;
}

struct ConformalityReport {
  Residual metric;        ///< | |f_x|² − |f_y|² | / |f_x|²
  Residual orthogonality; ///< |⟨f_x, f_y⟩| / |f_x|²
  Residual n_square;      ///< |N² + 1| for the raw quotient
  Residual r_square;      ///< |R² + 1| for the raw quotient

  double max() const {
    return std::max({metric.max, orthogonality.max, n_square.max, r_square.max});
  }
};

inline ConformalityReport conformality_residual(const SurfaceGrid& s, int margin = 0,
                                                double branch_rel = 1e-9) {
  const auto nd = normals(s, branch_rel);
  const auto& g = s.grid();
  RealField metric(g), orth(g), n2(g), r2(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (nd.branch[k]) continue;
    const auto& fx = nd.df.cx[k];
    const auto& fy = nd.df.cy[k];
    const double scale = std::max(norm2(fx), 1e-30);
    metric[k] = std::abs(norm2(fx) - norm2(fy)) / scale;
    orth[k] = std::abs(inner(fx, fy)) / scale;
    n2[k] = norm(nd.N_raw[k] * nd.N_raw[k] + kOne);
    r2[k] = norm(nd.R_raw[k] * nd.R_raw[k] + kOne);
  }
  const Mask* m = &nd.branch;
  return {make_residual("conformality_metric", interior_stats(metric, margin, m), margin),
          make_residual("conformality_orthogonality", interior_stats(orth, margin, m), margin),
          make_residual("normal_left_square", interior_stats(n2, margin, m), margin),
          make_residual("normal_right_square", interior_stats(r2, margin, m), margin)};
}

/// Frame consistency checks: RH = HN, ∗df = N df = −df R, the ∂y formula
/// for H, H df = (dR)^{−R}, and −N H̄ = −H̄ R.
inline std::vector<Residual> sphere_invariants(const SurfaceGrid& s, const SphereData& sd) {
  const auto& g = s.grid();
  const auto dN = differential(sd.N);
  const auto dR = differential(sd.R);
  const auto sdf = hodge_star(sd.df);
  ScalarField rh(g), left(g), right(g), hy(g), hdr(g), mcv(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (sd.mask[k]) continue;
    const auto& N = sd.N[k];
    const auto& R = sd.R[k];
    const auto& H = sd.H[k];
    rh[k] = R * H - H * N;
    left[k] = Quaternion(std::max(norm(sdf.cx[k] - N * sd.df.cx[k]),
                                  norm(sdf.cy[k] - N * sd.df.cy[k])));
    right[k] = Quaternion(std::max(norm(sdf.cx[k] + sd.df.cx[k] * R),
                                   norm(sdf.cy[k] + sd.df.cy[k] * R)));
    hy[k] = 0.5 * inverse(sd.df.cy[k]) * (dN.cy[k] + N * dN.cx[k]) - H;
    // (dR)^{−R} = ½(dR + ∗dR R); ∗dR(∂x) = R_y, ∗dR(∂y) = −R_x.
    const Quaternion ax = 0.5 * (dR.cx[k] + dR.cy[k] * R);
    const Quaternion ay = 0.5 * (dR.cy[k] - dR.cx[k] * R);
    hdr[k] = Quaternion(std::max(norm(H * sd.df.cx[k] - ax), norm(H * sd.df.cy[k] - ay)));
    mcv[k] = -(N * conj(H)) + conj(H) * R;
  }
  const Mask m = dilate(sd.mask, g, 1);
  return {make_residual("rh_equals_hn", interior_stats(rh, 0, &sd.mask), 0),
          make_residual("star_df_left", interior_stats(left, 0, &sd.mask), 0),
          make_residual("star_df_right", interior_stats(right, 0, &sd.mask), 0),
          make_residual("h_from_y_component", interior_stats(hy, kMarginH, &m), kMarginH),
          make_residual("h_df_equals_dr", interior_stats(hdr, kMarginH, &m), kMarginH),
          make_residual("mean_curvature_vector", interior_stats(mcv, 0, &sd.mask), 0)};
}

/// w = dH + H ∗df H + R ∗dH − H ∗dN.
inline OneForm hopf_w(const SurfaceGrid& s, const SphereData& sd) {
  (void)s;
  const auto dH = differential(sd.H);
  const auto sdf = hodge_star(sd.df);
  const auto sdH = hodge_star(dH);
  const auto sdN = hodge_star(differential(sd.N));
  return dH + sd.H * sdf * sd.H + sd.R * sdH - sd.H * sdN;
}

/// Mask for quantities built from w (one derivative beyond H).
inline Mask w_mask(const SphereData& sd) { return dilate(sd.mask, sd.H.grid, 1); }

/// ‖(2dH − w)^{−N}‖.
inline Residual eta_residual(const SurfaceGrid& s, const SphereData& sd, int margin = kMarginW) {
  const auto w = hopf_w(s, sd);
  const auto eta = 2.0 * differential(sd.H) - w;
  const Mask m = w_mask(sd);
  const auto parts = decompose_right(eta, sd.N, &sd.mask);
  return make_residual("eta", interior_stats(parts.minus, margin, &m), margin);
}

inline double default_hmin(const GridSpec& g, double scale = 1e-6) { return scale / g.diameter(); }

struct InverseH {
  ScalarField value;
  Mask mask;
};

/// H⁻¹ with minimal points (|H| < hmin) masked. MinimalPoint if nothing is left.
inline InverseH inverse_h(const SphereData& sd, double hmin) {
  InverseH out;
  out.mask = sd.mask;
  out.value = invert(sd.H, out.mask, hmin);
  const auto& g = sd.H.grid;
  if (static_cast<std::size_t>(std::count(out.mask.begin(), out.mask.end(), 1)) == g.size()) {
    throw Error(ErrorCode::MinimalPoint, "|H| < H_min = " + fmt_num(hmin) +
                                             " on the whole grid");
  }
  std::size_t interior_ok = 0;
  for (int j = kMarginGhimc; j < g.ny - kMarginGhimc; ++j)
    for (int i = kMarginGhimc; i < g.nx - kMarginGhimc; ++i)
      if (!out.mask[g.index(i, j)]) ++interior_ok;
  if (interior_ok == 0) {
    throw Error(ErrorCode::MinimalPoint, "|H| < H_min = " + fmt_num(hmin) +
                                             " on the whole working region");
  }
  return out;
}

/// ‖d∗d H⁻¹‖.
inline Residual ghimc_residual(const SurfaceGrid& s, const SphereData& sd,
                               std::optional<double> hmin = std::nullopt,
                               int margin = kMarginGhimc) {
  const auto& g = s.grid();
  const auto hi = inverse_h(sd, hmin.value_or(default_hmin(g)));
  const auto lap = d_star_d(hi.value);
  const Mask m = dilate(hi.mask, g, 2);
  return make_residual("ghimc", interior_stats(lap.density, margin, &m), margin);
}

struct WillmoreReport {
  Residual dw;
  double energy = 0.0;
};

/// dw closedness and W = (1/π)∫⟨A∧∗A⟩ with ⟨A∧∗A⟩ = −½ Re(b_x² + b_y²),
/// b = ½ R (dR)_{−R}.
inline WillmoreReport willmore_diagnostics(const SurfaceGrid& s, const SphereData& sd) {
  const auto& g = s.grid();
  const auto w = hopf_w(s, sd);
  WillmoreReport rep;
  const Mask wm = w_mask(sd);
  rep.dw = make_residual("willmore_dw", closedness_stats(w, kMarginGhimc, &wm), kMarginGhimc);

  const auto dR = differential(sd.R);
  const Mask m = dilate(sd.mask, g, 1);
  const int margin = kMarginH;
  double total = 0.0;
  for (int j = margin; j < g.ny - margin; ++j) {
    const double wy = (j == margin || j == g.ny - 1 - margin) ? 0.5 : 1.0;
    for (int i = margin; i < g.nx - margin; ++i) {
      const auto k = g.index(i, j);
      if (m[k]) continue;
      const double wx = (i == margin || i == g.nx - 1 - margin) ? 0.5 : 1.0;
      const auto& R = sd.R[k];
      const Quaternion bx = 0.5 * R * (0.5 * (dR.cx[k] + R * dR.cy[k]));
      const Quaternion by = 0.5 * R * (0.5 * (dR.cy[k] - R * dR.cx[k]));
      const double density = -0.5 * re(bx * bx + by * by);
      total += wx * wy * density;
    }
  }
  rep.energy = total * g.hx * g.hy / M_PI;
  return rep;
}

struct CondReport {
  /// −H⁻¹(∗w)H⁻¹ − ∗dH⁻¹ − d(f − NH⁻¹), pointwise.
  Residual identity;
  /// d(H⁻¹ ∗w H⁻¹ + n ∗dH⁻¹).
  Residual closed;
};

inline CondReport cond_characterization(const SurfaceGrid& s, const SphereData& sd,
                                        const Quaternion& n,
                                        std::optional<double> hmin = std::nullopt,
                                        int margin = kMarginW) {
  const auto& g = s.grid();
  const auto hi = inverse_h(sd, hmin.value_or(default_hmin(g)));
  const auto sw = hodge_star(hopf_w(s, sd));
  const auto lhs = -1.0 * (hi.value * sw * hi.value);
  const auto sdhi = hodge_star(differential(hi.value));
  const auto rhs = sdhi + differential(s.f - sd.N * hi.value);
  const Mask m1 = dilate(hi.mask, g, 1);
  const auto comb = hi.value * sw * hi.value + n * sdhi;
  return {make_residual("cond_identity", interior_stats(lhs - rhs, margin, &m1), margin),
          make_residual("cond_closed", closedness_stats(comb, margin + 1, &m1), margin + 1)};
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Max |Re H⁻¹ − (slope·x + intercept)| over fitted nodes.
  double max_deviation = 0.0;
  /// Max |Im H⁻¹| relative to max |H⁻¹|.
  double imaginary_part = 0.0;
};

/// Least-squares line through Re H⁻¹ against x over the interior.
inline LinearFit inverse_h_linear_fit(const SphereData& sd, double hmin, int margin = kMarginH) {
  const auto& g = sd.H.grid;
  Mask mask = sd.mask;
  const auto hi = invert(sd.H, mask, hmin);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0, maxabs = 0, maxim = 0;
  for (int j = margin; j < g.ny - margin; ++j) {
    for (int i = margin; i < g.nx - margin; ++i) {
      const auto k = g.index(i, j);
      if (mask[k]) continue;
      const double x = g.x(i);
      const double v = re(hi[k]);
      sx += x;
      sy += v;
      sxx += x * x;
      sxy += x * v;
      n += 1;
      maxabs = std::max(maxabs, norm(hi[k]));
      maxim = std::max(maxim, norm(im(hi[k])));
    }
  }
  LinearFit fit;
  if (n < 2) return fit;
  const double den = n * sxx - sx * sx;
  fit.slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (int j = margin; j < g.ny - margin; ++j) {
    for (int i = margin; i < g.nx - margin; ++i) {
      const auto k = g.index(i, j);
      if (mask[k]) continue;
      fit.max_deviation =
          std::max(fit.max_deviation, std::abs(re(hi[k]) - fit.slope * g.x(i) - fit.intercept));
    }
  }
  fit.imaginary_part = maxabs > 0 ? maxim / maxabs : 0.0;
  return fit;
}

struct RealHReport {
  /// Max |Im H| / max |H|.
  double imaginary_part = 0.0;
  /// Max |N − R|; zero iff the image lies in Im ℍ up to translation.
  double normal_gap = 0.0;
  bool real_valued = false;
};

inline RealHReport detect_real_h(const SphereData& sd, double tol = 1e-3, int margin = kMarginH) {
  RealHReport r;
  const auto hst = interior_stats(sd.H, margin, &sd.mask);
  const auto ist = interior_stats(map_field(sd.H, [](const Quaternion& q) { return im(q); }),
                                  margin, &sd.mask);
  r.imaginary_part = hst.max > 0 ? ist.max / hst.max : 0.0;
  r.normal_gap = interior_stats(sd.N - sd.R, 0, &sd.mask).max;
  r.real_valued = r.imaginary_part <= tol;
  return r;
}

}  // namespace himc
