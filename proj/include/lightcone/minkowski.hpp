#pragma once

#include <cmath>
#include <ostream>

namespace lightcone {

/// A point or displacement of 4-dimensional Lorentz-Minkowski space.
/// Signature (-,+,+,+); x0 is the time coordinate.
struct Vec4 {
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  Vec4& operator+=(const Vec4& o) {
    x0 += o.x0; x1 += o.x1; x2 += o.x2; x3 += o.x3;
    return *this;
  }
  Vec4& operator-=(const Vec4& o) {
    x0 -= o.x0; x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
    return *this;
  }
  Vec4& operator*=(double s) {
    x0 *= s; x1 *= s; x2 *= s; x3 *= s;
    return *this;
  }

  friend Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
  friend Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
  friend Vec4 operator*(Vec4 a, double s) { return a *= s; }
  friend Vec4 operator*(double s, Vec4 a) { return a *= s; }
  friend Vec4 operator-(const Vec4& a) { return {-a.x0, -a.x1, -a.x2, -a.x3}; }

  double operator[](int i) const { return i == 0 ? x0 : i == 1 ? x1 : i == 2 ? x2 : x3; }

  friend std::ostream& operator<<(std::ostream& os, const Vec4& v) {
    return os << "(" << v.x0 << ", " << v.x1 << ", " << v.x2 << ", " << v.x3 << ")";
  }
};

/// Minkowski inner product <a,b> = -a0 b0 + a1 b1 + a2 b2 + a3 b3.
inline double inner(const Vec4& a, const Vec4& b) {
  return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

inline double euclid_sq(const Vec4& v) {
  return v.x0 * v.x0 + v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3;
}

inline double euclid_norm(const Vec4& v) { return std::sqrt(euclid_sq(v)); }

enum class CausalClass { spacelike, timelike, lightlike_future, lightlike_past, zero };

inline const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::spacelike: return "spacelike";
    case CausalClass::timelike: return "timelike";
    case CausalClass::lightlike_future: return "lightlike_future";
    case CausalClass::lightlike_past: return "lightlike_past";
    case CausalClass::zero: return "zero";
  }
  return "?";
}

/// Classify v against the null cone. |<v,v>| <= tol counts as lightlike;
/// a vector with every component within tol of zero classifies as zero.
inline CausalClass causal_character(const Vec4& v, double tol) {
  const double q = inner(v, v);
  if (q > tol) return CausalClass::spacelike;
  if (q < -tol) return CausalClass::timelike;
  if (std::abs(v.x0) <= tol && std::abs(v.x1) <= tol && std::abs(v.x2) <= tol &&
      std::abs(v.x3) <= tol)
    return CausalClass::zero;
  return v.x0 > 0 ? CausalClass::lightlike_future : CausalClass::lightlike_past;
}

/// Membership in the future lightcone: <v,v> = 0 up to a tolerance scaled
/// by the squared Euclidean norm (so large-radius points are not rejected
/// by absolute roundoff), and v0 > 0.
inline bool on_future_lightcone(const Vec4& v, double tol = 1e-9) {
  return std::abs(inner(v, v)) <= tol * std::max(1.0, euclid_sq(v)) && v.x0 > 0;
}

}  // namespace lightcone
