#pragma once

// Discrete exterior calculus for ℍ-valued fields on a uniform rectangular
// grid carrying the conformal coordinate z = x + iy (J∂x = ∂y).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "himc/error.hpp"
#include "himc/quaternion.hpp"

namespace himc {

struct GridSpec {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double hx = 0.0;
  double hy = 0.0;

  void validate() const {
    if (nx < 5 || ny < 5) {
      throw Error(ErrorCode::InvalidGrid, "grid needs nx, ny >= 5, got " +
                                              std::to_string(nx) + "x" +
                                              std::to_string(ny));
    }
    if (!(hx > 0.0) || !(hy > 0.0) || !std::isfinite(hx) || !std::isfinite(hy)) {
      throw Error(ErrorCode::InvalidGrid, "grid spacings must be positive");
    }
    if (!std::isfinite(x0) || !std::isfinite(y0)) {
      throw Error(ErrorCode::InvalidGrid, "grid origin must be finite");
    }
  }

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  /// Row-major, x fastest.
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx + i;
  }
  double x(int i) const { return x0 + hx * i; }
  double y(int j) const { return y0 + hy * j; }
  double diameter() const { return std::hypot(hx * (nx - 1), hy * (ny - 1)); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Node index pair (i along x, j along y).
struct Node {
  int i = 0;
  int j = 0;
};

inline Node center_node(const GridSpec& g) { return {g.nx / 2, g.ny / 2}; }

/// 1 marks an excluded node (branch point, minimal point, singular
/// denominator, ...).
using Mask = std::vector<std::uint8_t>;

template <class T>
struct Field {
  GridSpec grid;
  std::vector<T> values;

  Field() = default;
  explicit Field(const GridSpec& g, const T& fill = T{})
      : grid(g), values(g.size(), fill) {}

  T& operator()(int i, int j) { return values[grid.index(i, j)]; }
  const T& operator()(int i, int j) const { return values[grid.index(i, j)]; }
  T& operator[](std::size_t k) { return values[k]; }
  const T& operator[](std::size_t k) const { return values[k]; }
  std::size_t size() const { return values.size(); }
};

using ScalarField = Field<Quaternion>;
using RealField = Field<double>;

/// ω = cx dx + cy dy, i.e. cx = ω(∂x), cy = ω(∂y).
struct OneForm {
  ScalarField cx;
  ScalarField cy;

  const GridSpec& grid() const { return cx.grid; }
};

/// Coefficient of dx∧dy.
struct TwoForm {
  ScalarField density;

  const GridSpec& grid() const { return density.grid; }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw Error(ErrorCode::GridMismatch, "fields live on different grids");
}

// ---------------------------------------------------------------------------
// Pointwise helpers.

template <class T, class Fn>
auto map_field(const Field<T>& a, Fn&& fn) {
  using R = std::invoke_result_t<Fn, const T&>;
  Field<R> out(a.grid);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = fn(a[k]);
  return out;
}

template <class A, class B, class Fn>
auto zip_field(const Field<A>& a, const Field<B>& b, Fn&& fn) {
  require_same_grid(a.grid, b.grid);
  using R = std::invoke_result_t<Fn, const A&, const B&>;
  Field<R> out(a.grid);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = fn(a[k], b[k]);
  return out;
}

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip_field(a, b, [](const Quaternion& p, const Quaternion& q) { return p + q; });
}
inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip_field(a, b, [](const Quaternion& p, const Quaternion& q) { return p - q; });
}
/// Pointwise Hamilton product.
inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return zip_field(a, b, [](const Quaternion& p, const Quaternion& q) { return p * q; });
}
inline ScalarField operator*(double s, const ScalarField& a) {
  return map_field(a, [s](const Quaternion& p) { return s * p; });
}
inline ScalarField operator*(const Quaternion& c, const ScalarField& a) {
  return map_field(a, [&c](const Quaternion& p) { return c * p; });
}
inline ScalarField operator*(const ScalarField& a, const Quaternion& c) {
  return map_field(a, [&c](const Quaternion& p) { return p * c; });
}
inline ScalarField conj(const ScalarField& a) {
  return map_field(a, [](const Quaternion& p) { return conj(p); });
}

inline OneForm operator+(const OneForm& a, const OneForm& b) { return {a.cx + b.cx, a.cy + b.cy}; }
inline OneForm operator-(const OneForm& a, const OneForm& b) { return {a.cx - b.cx, a.cy - b.cy}; }
inline OneForm operator*(double s, const OneForm& a) { return {s * a.cx, s * a.cy}; }
/// Left multiplication of a one-form by a function.
inline OneForm operator*(const ScalarField& f, const OneForm& a) { return {f * a.cx, f * a.cy}; }
/// Right multiplication of a one-form by a function.
inline OneForm operator*(const OneForm& a, const ScalarField& f) { return {a.cx * f, a.cy * f}; }
inline OneForm operator*(const Quaternion& c, const OneForm& a) { return {c * a.cx, c * a.cy}; }
inline OneForm operator*(const OneForm& a, const Quaternion& c) { return {a.cx * c, a.cy * c}; }
inline OneForm conj(const OneForm& a) { return {conj(a.cx), conj(a.cy)}; }

/// Pointwise inverse; nodes with |q| <= threshold are flagged in `mask`
/// and set to zero rather than extrapolated.
inline ScalarField invert(const ScalarField& a, Mask& mask, double threshold) {
  if (mask.size() != a.size()) mask.assign(a.size(), 0);
  ScalarField out(a.grid);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (mask[k] || !(norm(a[k]) > threshold) || !std::isfinite(norm2(a[k]))) {
      mask[k] = 1;
      out[k] = Quaternion{};
    } else {
      out[k] = inverse(a[k]);
    }
  }
  return out;
}

inline Mask empty_mask(const GridSpec& g) { return Mask(g.size(), 0); }

inline Mask mask_union(const Mask& a, const Mask& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Mask out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] | b[k];
  return out;
}

/// Grows the mask by `radius` nodes in the max-norm (stencil footprint).
inline Mask dilate(const Mask& m, const GridSpec& g, int radius) {
  if (m.empty() || radius <= 0) return m;
  Mask out(m.size(), 0);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!m[g.index(i, j)]) continue;
      for (int b = std::max(0, j - radius); b <= std::min(g.ny - 1, j + radius); ++b) {
        for (int a = std::max(0, i - radius); a <= std::min(g.nx - 1, i + radius); ++a) {
          out[g.index(a, b)] = 1;
        }
      }
    }
  }
  return out;
}

inline double masked_fraction(const Mask& m) {
  if (m.empty()) return 0.0;
  return static_cast<double>(std::count(m.begin(), m.end(), std::uint8_t{1})) /
         static_cast<double>(m.size());
}

// ---------------------------------------------------------------------------
// Norms over the interior.

struct NormStats {
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
  std::size_t excluded = 0;
  /// Node where the max is attained.
  Node argmax{};

  double excluded_fraction() const {
    const auto total = count + excluded;
    return total == 0 ? 1.0 : static_cast<double>(excluded) / static_cast<double>(total);
  }
};

/// Max and mean of |value| over nodes at least `margin` away from the
/// boundary that are not masked. Non-finite values count as +inf.
template <class T, class NormFn>
NormStats interior_stats(const Field<T>& a, int margin, const Mask* mask, NormFn&& nrm) {
  NormStats st;
  double sum = 0.0;
  const auto& g = a.grid;
  for (int j = margin; j < g.ny - margin; ++j) {
    for (int i = margin; i < g.nx - margin; ++i) {
      const auto k = g.index(i, j);
      if (mask && !mask->empty() && (*mask)[k]) {
        ++st.excluded;
        continue;
      }
      double v = nrm(a[k]);
      if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
      if (st.count == 0 || v > st.max) {
        st.max = v;
        st.argmax = {i, j};
      }
      sum += v;
      ++st.count;
    }
  }
  st.mean = st.count ? sum / static_cast<double>(st.count) : 0.0;
  return st;
}

inline NormStats interior_stats(const ScalarField& a, int margin, const Mask* mask = nullptr) {
  return interior_stats(a, margin, mask, [](const Quaternion& q) { return norm(q); });
}
inline NormStats interior_stats(const RealField& a, int margin, const Mask* mask = nullptr) {
  return interior_stats(a, margin, mask, [](double v) { return std::abs(v); });
}
/// Componentwise max of the two coefficient fields.
inline NormStats interior_stats(const OneForm& w, int margin, const Mask* mask = nullptr) {
  auto both = zip_field(w.cx, w.cy, [](const Quaternion& a, const Quaternion& b) {
    return std::max(norm(a), norm(b));
  });
  return interior_stats(both, margin, mask);
}

// ---------------------------------------------------------------------------
// Derivatives: central differences inside, one-sided 3-point at the
// boundary; second order everywhere.

template <class T>
Field<T> d_dx(const Field<T>& f) {
  const auto& g = f.grid;
  Field<T> out(g);
  const double inv2h = 1.0 / (2.0 * g.hx);
  for (int j = 0; j < g.ny; ++j) {
    out(0, j) = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) * inv2h;
    for (int i = 1; i < g.nx - 1; ++i) out(i, j) = (f(i + 1, j) - f(i - 1, j)) * inv2h;
    const int n = g.nx - 1;
    out(n, j) = (3.0 * f(n, j) - 4.0 * f(n - 1, j) + f(n - 2, j)) * inv2h;
  }
  return out;
}

template <class T>
Field<T> d_dy(const Field<T>& f) {
  const auto& g = f.grid;
  Field<T> out(g);
  const double inv2h = 1.0 / (2.0 * g.hy);
  const int n = g.ny - 1;
  for (int i = 0; i < g.nx; ++i) {
    out(i, 0) = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) * inv2h;
    for (int j = 1; j < n; ++j) out(i, j) = (f(i, j + 1) - f(i, j - 1)) * inv2h;
    out(i, n) = (3.0 * f(i, n) - 4.0 * f(i, n - 1) + f(i, n - 2)) * inv2h;
  }
  return out;
}

inline OneForm differential(const ScalarField& f) { return {d_dx(f), d_dy(f)}; }

/// (∗ω)(∂x) = ω(∂y), (∗ω)(∂y) = −ω(∂x).
inline OneForm hodge_star(const OneForm& w) { return {w.cy, -1.0 * w.cx}; }

/// dω = (∂x ω_y − ∂y ω_x) dx∧dy.
inline TwoForm exterior_derivative(const OneForm& w) { return {d_dx(w.cy) - d_dy(w.cx)}; }

/// (ω∧η)(∂x,∂y) = ω_x η_y − ω_y η_x with the product order kept.
inline TwoForm wedge(const OneForm& w, const OneForm& e) {
  require_same_grid(w.grid(), e.grid());
  return {w.cx * e.cy - w.cy * e.cx};
}

/// d∗d f, the (negative) Laplacian density.
inline TwoForm d_star_d(const ScalarField& f) {
  return exterior_derivative(hodge_star(differential(f)));
}

inline void require_complex_structure(const ScalarField& n, const Mask* mask, double tol) {
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (mask && !mask->empty() && (*mask)[k]) continue;
    if (!is_complex_structure(n[k], tol)) {
      const int i = static_cast<int>(k % n.grid.nx);
      const int j = static_cast<int>(k / n.grid.nx);
      throw Error(ErrorCode::NotComplexStructure,
                  "|N^2+1| = " + fmt_num(norm(n[k] * n[k] + kOne)) + " at node (" +
                      std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

struct Decomposition {
  OneForm plus;   ///< ω_N (left) or ω^N (right)
  OneForm minus;  ///< ω_{−N} or ω^{−N}
};

/// ω_N = ½(ω − N∗ω), ω_{−N} = ½(ω + N∗ω); ∗ω_N = Nω_N.
inline Decomposition decompose_left(const OneForm& w, const ScalarField& n,
                                    const Mask* mask = nullptr, double tol = kUnitTol) {
  require_same_grid(w.grid(), n.grid);
  require_complex_structure(n, mask, tol);
  const OneForm nsw = n * hodge_star(w);
  return {0.5 * (w - nsw), 0.5 * (w + nsw)};
}

/// ω^N = ½(ω − ∗ω N), ω^{−N} = ½(ω + ∗ω N); ∗ω^N = ω^N N.
inline Decomposition decompose_right(const OneForm& w, const ScalarField& n,
                                     const Mask* mask = nullptr, double tol = kUnitTol) {
  require_same_grid(w.grid(), n.grid);
  require_complex_structure(n, mask, tol);
  const OneForm swn = hodge_star(w) * n;
  return {0.5 * (w - swn), 0.5 * (w + swn)};
}

/// Max |dω| over interior nodes (margin 1 by default: the stencil of d).
inline NormStats closedness_stats(const OneForm& w, int margin = 1, const Mask* mask = nullptr) {
  const auto dw = exterior_derivative(w);
  Mask dm;
  if (mask && !mask->empty()) dm = dilate(*mask, w.grid(), 1);
  return interior_stats(dw.density, margin, dm.empty() ? nullptr : &dm);
}

inline double closedness_residual(const OneForm& w, int margin = 1, const Mask* mask = nullptr) {
  return closedness_stats(w, margin, mask).max;
}

// ---------------------------------------------------------------------------
// Potentials of closed one-forms on the (simply connected) grid.

enum class PathOrder { RowFirst, ColumnFirst };

struct Potential {
  ScalarField value;
  /// Nodes whose path from the base node crosses a masked node.
  Mask mask;
};

namespace detail {

/// Walks along one axis from the base index outward in both directions,
/// accumulating trapezoid sums. `at(n)` returns the node flat index.
template <class At, class Coef>
void trapezoid_line(int n, int start, double h, At&& at, Coef&& coef, ScalarField& out,
                    Mask& mask, const Mask& in_mask) {
  auto bad = [&](std::size_t k) { return !in_mask.empty() && in_mask[k]; };
  for (int dir : {+1, -1}) {
    bool broken = mask[at(start)] != 0;
    for (int m = start + dir; m >= 0 && m < n; m += dir) {
      const auto k0 = at(m - dir);
      const auto k1 = at(m);
      if (broken || bad(k0) || bad(k1)) {
        broken = true;
        mask[k1] = 1;
        out[k1] = Quaternion{};
        continue;
      }
      out[k1] = out[k0] + (0.5 * dir * h) * (coef(k0) + coef(k1));
    }
  }
}

}  // namespace detail

/// Trapezoid path sums from `base` along grid rows then columns (or the
/// reverse). No closedness check; see integrate_potential.
inline Potential path_integral(const OneForm& w, Node base, const Quaternion& v0,
                               PathOrder order = PathOrder::RowFirst,
                               const Mask& in_mask = {}) {
  const auto& g = w.grid();
  Potential p{ScalarField(g), Mask(g.size(), 0)};
  const auto kb = g.index(base.i, base.j);
  p.value[kb] = v0;
  if (!in_mask.empty() && in_mask[kb]) p.mask[kb] = 1;
  auto cx = [&](std::size_t k) { return w.cx[k]; };
  auto cy = [&](std::size_t k) { return w.cy[k]; };
  auto row = [&](int j) {
    detail::trapezoid_line(g.nx, base.i, g.hx, [&](int i) { return g.index(i, j); }, cx,
                           p.value, p.mask, in_mask);
  };
  auto col = [&](int i, int start) {
    detail::trapezoid_line(g.ny, start, g.hy, [&](int j) { return g.index(i, j); }, cy,
                           p.value, p.mask, in_mask);
  };
  if (order == PathOrder::RowFirst) {
    row(base.j);
    for (int i = 0; i < g.nx; ++i) col(i, base.j);
  } else {
    col(base.i, base.j);
    for (int j = 0; j < g.ny; ++j) {
      detail::trapezoid_line(g.nx, base.i, g.hx, [&](int i) { return g.index(i, j); }, cx,
                             p.value, p.mask, in_mask);
    }
  }
  return p;
}

/// F with F(base) = v0 and dF ≈ ω. Throws NotClosed when the interior
/// closedness residual exceeds `tol`.
inline Potential integrate_potential(const OneForm& w, Node base, const Quaternion& v0,
                                     double tol, PathOrder order = PathOrder::RowFirst,
                                     const Mask& in_mask = {}, int margin = 1) {
  const auto res = closedness_residual(w, margin, in_mask.empty() ? nullptr : &in_mask);
  if (!(res <= tol)) {
    throw Error(ErrorCode::NotClosed,
                "max |d omega| = " + fmt_num(res) + " > tol " + fmt_num(tol));
  }
  return path_integral(w, base, v0, order, in_mask);
}

/// Max |F_row − F_col| between the two axis-path potentials.
inline NormStats path_disagreement(const OneForm& w, Node base, const Quaternion& v0,
                                   const Mask& in_mask = {}, int margin = 0) {
  const auto a = path_integral(w, base, v0, PathOrder::RowFirst, in_mask);
  const auto b = path_integral(w, base, v0, PathOrder::ColumnFirst, in_mask);
  const auto m = mask_union(a.mask, b.mask);
  return interior_stats(a.value - b.value, margin, &m);
}

}  // namespace himc
