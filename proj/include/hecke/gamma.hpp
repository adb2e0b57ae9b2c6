#pragma once

// Complex log-gamma, gamma, the product Gamma_delta(s), and the upper
// incomplete gamma function Gamma(s, x) for real x > 0.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include "hecke/zeta.hpp"

namespace hecke {

namespace detail {

inline bool is_gamma_pole(std::complex<double> s) {
  return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

// B_{2k} / (2k (2k - 1)) for k = 1..10.
inline constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,     -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,     1.0 / 156.0,      -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0};

/// zeta(k) for k = 0..63 (entries 0 and 1 unused).
inline const std::array<double, 64>& zeta_integers() {
  static const std::array<double, 64> z = [] {
    std::array<double, 64> out{};
    for (int k = 2; k < 64; ++k) out[k] = zeta(std::complex<double>(k)).real();
    return out;
  }();
  return z;
}

/// (e^z - 1) / z, accurate near 0.
template <class T>
T exprel(T z) {
  if (std::abs(z) < 0.5) {
    T term = 1.0, sum = 1.0;
    for (int k = 2; k < 30; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
      if (std::abs(term) < 1e-17) break;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

}  // namespace detail

/// Principal branch of log Gamma(s): Stirling series after shifting to Re >= 10,
/// minus the logs of the shift factors.
inline std::complex<double> log_gamma(std::complex<double> s) {
  if (detail::is_gamma_pole(s)) throw std::domain_error("hecke: log_gamma at a pole");
  std::complex<double> shift = 0.0;
  std::complex<double> z = s;
  while (z.real() < 10.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> series = 0.0;
  for (int k = static_cast<int>(detail::kStirling.size()) - 1; k >= 0; --k) series = series * inv2 + detail::kStirling[k];
  series *= inv;
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series - shift;
}

inline std::complex<double> gamma(std::complex<double> s) { return std::exp(log_gamma(s)); }

/// Gamma_delta(s) = Gamma(1/2 + s + delta) Gamma(1/2 + s - delta).
inline std::complex<double> gamma_delta(std::complex<double> s, std::complex<double> delta) {
  return std::exp(log_gamma(0.5 + s + delta) + log_gamma(0.5 + s - delta));
}

namespace detail {

/// (Gamma(1 + s) - 1) / s for |s| < 1/2 from the Taylor series of log Gamma(1 + s).
template <class T>
T gamma1p_minus_one_over_s(T s) {
  const auto& z = zeta_integers();
  T sum = 0.0;
  for (int k = 63; k >= 2; --k) sum = sum * s + ((k & 1) ? -1.0 : 1.0) * z[k] / k;
  const T l_over_s = -std::numbers::egamma + s * sum;
  return l_over_s * exprel(s * l_over_s);
}

template <class T>
T gamma_full(T s) {
  if constexpr (std::is_same_v<T, double>) {
    return std::tgamma(s);
  } else {
    return gamma(s);
  }
}

}  // namespace detail

/// Gamma(s, x) = int_x^infinity t^{s-1} e^{-t} dt for x > 0. Continued fraction
/// for x >= 1.5; otherwise Gamma(s) minus the lower series, rearranged near
/// s = 0 so the limit Gamma(0, x) = E_1(x) is reached without cancellation.
template <class T>
T upper_incomplete_gamma(T s, double x) {
  if (!(x > 0.0)) throw std::domain_error("hecke: upper_incomplete_gamma needs x > 0");
  const double lx = std::log(x);
  if (x >= 1.5) {
    constexpr double tiny = 1e-300;
    T b = x + 1.0 - s;
    T f = b;
    if (std::abs(f) < tiny) f = tiny;
    T c = f;
    T d = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const T a = -static_cast<double>(k) * (static_cast<double>(k) - s);
      b += 2.0;
      d = b + a * d;
      if (std::abs(d) < tiny) d = tiny;
      c = b + a / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const T delta = c * d;
      f *= delta;
      if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(s * lx - x) / f;
  }
  if (std::real(s) < -0.5) {
    // Gamma(s, x) = (Gamma(s + 1, x) - x^s e^{-x}) / s steps over the poles of Gamma(s).
    return (upper_incomplete_gamma<T>(s + 1.0, x) - std::exp(s * lx - x)) / s;
  }
  // sum_{k>=1} (-x)^k / (k! (s + k))
  T tail = 0.0;
  double p = 1.0;
  for (int k = 1; k < 60; ++k) {
    p *= -x / k;
    const T term = p / (s + static_cast<double>(k));
    tail += term;
    if (std::abs(p) < 1e-18) break;
  }
  const T xs = std::exp(s * lx);
  if (std::abs(s) < 0.5) {
    return detail::gamma1p_minus_one_over_s(s) - lx * detail::exprel(s * lx) - xs * tail;
  }
  return detail::gamma_full(s) - xs * (1.0 / s + tail);
}

}  // namespace hecke
