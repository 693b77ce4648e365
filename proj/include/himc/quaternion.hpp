#pragma once

#include <array>
#include <cmath>
#include <ostream>

#include "himc/error.hpp"

namespace himc {

/// Absolute tolerance for the unit and imaginary predicates.
inline constexpr double kUnitTol = 1e-9;

/// q = w + x i + y j + z k in double precision. Algebra ops never
/// renormalize; callers that need unit quaternions normalize explicitly.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0,
                       double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion from_array(const std::array<double, 4>& a) {
    return {a[0], a[1], a[2], a[3]};
  }
  constexpr std::array<double, 4> to_array() const { return {w, x, y, z}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&,
                                   const Quaternion&) = default;
};

inline constexpr Quaternion kOne{1.0, 0.0, 0.0, 0.0};
inline constexpr Quaternion kI{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion kJ{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion kK{0.0, 0.0, 0.0, 1.0};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

/// Hamilton product.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion conj(const Quaternion& a) { return {a.w, -a.x, -a.y, -a.z}; }
constexpr double re(const Quaternion& a) { return a.w; }
constexpr Quaternion im(const Quaternion& a) { return {0.0, a.x, a.y, a.z}; }
constexpr double norm2(const Quaternion& a) {
  return a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z;
}
inline double norm(const Quaternion& a) { return std::sqrt(norm2(a)); }

/// ⟨a,b⟩ = Re(ā b).
constexpr double inner(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Quaternion inverse(const Quaternion& a) {
  const double n2 = norm2(a);
  if (n2 == 0.0) throw Error(ErrorCode::ZeroDivision, "inverse of zero quaternion");
  return conj(a) / n2;
}

inline bool is_imaginary(const Quaternion& a, double tol = kUnitTol) {
  return std::abs(a.w) <= tol;
}
inline bool is_unit(const Quaternion& a, double tol = kUnitTol) {
  return std::abs(norm(a) - 1.0) <= tol;
}
/// Elements of S² ⊂ Im ℍ, the square roots of −1.
inline bool is_complex_structure(const Quaternion& a, double tol = kUnitTol) {
  return norm(a * a + kOne) <= tol;
}

/// exp(v) = cos|v| + (v/|v|) sin|v| for imaginary v.
inline Quaternion exp_imaginary(const Quaternion& v, double tol = kUnitTol) {
  if (!is_imaginary(v, tol)) {
    throw Error(ErrorCode::NotImaginary, "exp_imaginary needs Re v = 0");
  }
  const Quaternion iv = im(v);
  const double t = norm(iv);
  if (t == 0.0) return kOne;
  const double s = std::sin(t) / t;
  return {std::cos(t), iv.x * s, iv.y * s, iv.z * s};
}

/// Euclidean motion a ↦ r a s⁻¹ + t of ℍ with |r| = |s| = 1.
class Motion {
 public:
  Motion() = default;
  Motion(const Quaternion& r, const Quaternion& s, const Quaternion& t,
         double tol = kUnitTol)
      : r_(r), s_(s), t_(t) {
    if (!is_unit(r, tol) || !is_unit(s, tol)) {
      throw Error(ErrorCode::NotUnit, "motion needs |r| = |s| = 1");
    }
  }

  static Motion translation(const Quaternion& t) { return {kOne, kOne, t}; }

  const Quaternion& r() const { return r_; }
  const Quaternion& s() const { return s_; }
  const Quaternion& t() const { return t_; }

  /// Linear part a ↦ r a s⁻¹; s⁻¹ = s̄ for unit s.
  Quaternion linear(const Quaternion& a) const { return r_ * a * conj(s_); }
  Quaternion operator()(const Quaternion& a) const { return linear(a) + t_; }

 private:
  Quaternion r_ = kOne;
  Quaternion s_ = kOne;
  Quaternion t_{};
};

inline Quaternion apply_motion(const Quaternion& r, const Quaternion& s,
                               const Quaternion& t, const Quaternion& a) {
  return Motion(r, s, t)(a);
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '[' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ']';
}

}  // namespace himc
