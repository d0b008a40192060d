#pragma once

#include <array>
#include <cmath>

#include "lightcone/errors.hpp"
#include "lightcone/minkowski.hpp"

namespace lightcone {

/// Truncated second-order Taylor coefficients of a scalar function of N
/// parameters: value, gradient and (symmetric) Hessian. Arithmetic on jets
/// propagates derivatives exactly through the chain and Leibniz rules, so
/// every first and second partial derivative of a composite expression is
/// correct to machine precision.
template <int N>
struct Jet {
  double value = 0.0;
  std::array<double, N> grad{};
  std::array<std::array<double, N>, N> hess{};

  static Jet constant(double c) {
    Jet j;
    j.value = c;
    return j;
  }

  /// The coordinate function of parameter k lifted at x: value x, unit
  /// gradient in slot k, zero Hessian.
  static Jet variable(double x, int k) {
    Jet j;
    j.value = x;
    j.grad[k] = 1.0;
    return j;
  }

  Jet operator-() const {
    Jet r;
    r.value = -value;
    for (int i = 0; i < N; ++i) {
      r.grad[i] = -grad[i];
      for (int j = 0; j < N; ++j) r.hess[i][j] = -hess[i][j];
    }
    return r;
  }
};

using Jet2 = Jet<2>;
using Jet3 = Jet<3>;

template <int N>
Jet<N> operator+(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  r.value = a.value + b.value;
  for (int i = 0; i < N; ++i) {
    r.grad[i] = a.grad[i] + b.grad[i];
    for (int j = 0; j < N; ++j) r.hess[i][j] = a.hess[i][j] + b.hess[i][j];
  }
  return r;
}

template <int N>
Jet<N> operator-(const Jet<N>& a, const Jet<N>& b) {
  return a + (-b);
}

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  r.value = a.value * b.value;
  for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
  // fill the upper triangle and mirror so the Hessian stays bitwise symmetric
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const double h = a.hess[i][j] * b.value + a.grad[i] * b.grad[j] +
                       a.grad[j] * b.grad[i] + a.value * b.hess[i][j];
      r.hess[i][j] = r.hess[j][i] = h;
    }
  return r;
}

template <int N>
Jet<N> operator+(const Jet<N>& a, double c) {
  Jet<N> r = a;
  r.value += c;
  return r;
}
template <int N>
Jet<N> operator+(double c, const Jet<N>& a) {
  return a + c;
}
template <int N>
Jet<N> operator-(const Jet<N>& a, double c) {
  return a + (-c);
}
template <int N>
Jet<N> operator-(double c, const Jet<N>& a) {
  return (-a) + c;
}
template <int N>
Jet<N> operator*(const Jet<N>& a, double c) {
  Jet<N> r;
  r.value = a.value * c;
  for (int i = 0; i < N; ++i) {
    r.grad[i] = a.grad[i] * c;
    for (int j = 0; j < N; ++j) r.hess[i][j] = a.hess[i][j] * c;
  }
  return r;
}
template <int N>
Jet<N> operator*(double c, const Jet<N>& a) {
  return a * c;
}

namespace detail {

/// Composition with a scalar function given value and first two
/// derivatives at x.value: (f o x)'' = f'' dx dx + f' d2x.
template <int N>
Jet<N> chain(const Jet<N>& x, double f0, double f1, double f2) {
  Jet<N> r;
  r.value = f0;
  for (int i = 0; i < N; ++i) r.grad[i] = f1 * x.grad[i];
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const double h = f2 * x.grad[i] * x.grad[j] + f1 * x.hess[i][j];
      r.hess[i][j] = r.hess[j][i] = h;
    }
  return r;
}

}  // namespace detail

template <int N>
Jet<N> recip(const Jet<N>& x) {
  if (x.value == 0.0) throw DomainError("recip", x.value);
  const double inv = 1.0 / x.value;
  return detail::chain(x, inv, -inv * inv, 2.0 * inv * inv * inv);
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  return a * recip(b);
}
template <int N>
Jet<N> operator/(const Jet<N>& a, double c) {
  return a * (1.0 / c);
}
template <int N>
Jet<N> operator/(double c, const Jet<N>& b) {
  return recip(b) * c;
}

template <int N>
Jet<N> exp(const Jet<N>& x) {
  const double e = std::exp(x.value);
  return detail::chain(x, e, e, e);
}

template <int N>
Jet<N> log(const Jet<N>& x) {
  if (x.value <= 0.0) throw DomainError("log", x.value);
  const double inv = 1.0 / x.value;
  return detail::chain(x, std::log(x.value), inv, -inv * inv);
}

template <int N>
Jet<N> sin(const Jet<N>& x) {
  return detail::chain(x, std::sin(x.value), std::cos(x.value), -std::sin(x.value));
}

template <int N>
Jet<N> cos(const Jet<N>& x) {
  return detail::chain(x, std::cos(x.value), -std::sin(x.value), -std::cos(x.value));
}

template <int N>
Jet<N> sinh(const Jet<N>& x) {
  return detail::chain(x, std::sinh(x.value), std::cosh(x.value), std::sinh(x.value));
}

template <int N>
Jet<N> cosh(const Jet<N>& x) {
  return detail::chain(x, std::cosh(x.value), std::sinh(x.value), std::cosh(x.value));
}

template <int N>
Jet<N> tanh(const Jet<N>& x) {
  const double t = std::tanh(x.value);
  const double s = 1.0 - t * t;  // sech^2
  return detail::chain(x, t, s, -2.0 * t * s);
}

template <int N>
Jet<N> sech(const Jet<N>& x) {
  const double s = 1.0 / std::cosh(x.value);
  const double t = std::tanh(x.value);
  return detail::chain(x, s, -s * t, s * t * t - s * s * s);
}

template <int N>
Jet<N> csch(const Jet<N>& x) {
  if (std::sinh(x.value) == 0.0) throw DomainError("csch", x.value);
  const double c = 1.0 / std::sinh(x.value);
  const double ct = std::cosh(x.value) * c;  // coth
  return detail::chain(x, c, -c * ct, c * ct * ct + c * c * c);
}

template <int N>
Jet<N> sec(const Jet<N>& x) {
  if (std::cos(x.value) == 0.0) throw DomainError("sec", x.value);
  const double s = 1.0 / std::cos(x.value);
  const double t = std::tan(x.value);
  return detail::chain(x, s, s * t, s * t * t + s * s * s);
}

template <int N>
Jet<N> csc(const Jet<N>& x) {
  if (std::sin(x.value) == 0.0) throw DomainError("csc", x.value);
  const double c = 1.0 / std::sin(x.value);
  const double ct = std::cos(x.value) * c;  // cot
  return detail::chain(x, c, -c * ct, c * ct * ct + c * c * c);
}

template <int N>
Jet<N> sqrt(const Jet<N>& x) {
  if (x.value <= 0.0) throw DomainError("sqrt", x.value);
  const double s = std::sqrt(x.value);
  return detail::chain(x, s, 0.5 / s, -0.25 / (s * x.value));
}

/// x^p with constant exponent. Negative or fractional powers require a
/// positive base; nonnegative integer powers accept any base.
template <int N>
Jet<N> pow_const(const Jet<N>& x, double p) {
  const bool integral = p == std::floor(p);
  if (x.value <= 0.0 && !(integral && p >= 0.0)) throw DomainError("pow", x.value);
  if (p == 0.0) return Jet<N>::constant(1.0);
  const double f0 = std::pow(x.value, p);
  const double f1 = p * std::pow(x.value, p - 1.0);
  const double f2 = (p == 1.0) ? 0.0 : p * (p - 1.0) * std::pow(x.value, p - 2.0);
  return detail::chain(x, f0, f1, f2);
}

/// The four coordinate functions of an immersion into L^4 evaluated as
/// 2-parameter jets at one chart point.
struct ImmersionJet {
  std::array<Jet2, 4> coords;

  Vec4 position() const {
    return {coords[0].value, coords[1].value, coords[2].value, coords[3].value};
  }
  /// First-derivative column along chart direction i.
  Vec4 d(int i) const {
    return {coords[0].grad[i], coords[1].grad[i], coords[2].grad[i], coords[3].grad[i]};
  }
  /// Second-derivative column d_i d_j.
  Vec4 dd(int i, int j) const {
    return {coords[0].hess[i][j], coords[1].hess[i][j], coords[2].hess[i][j],
            coords[3].hess[i][j]};
  }
};

}  // namespace lightcone
