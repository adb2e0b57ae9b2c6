#pragma once

// Riemann zeta, the Dirichlet beta function L(s, chi_4) and the Dedekind zeta
// function of Q(i), all through Cohen-Villegas-Zagier acceleration of
// alternating series.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace hecke {

namespace detail {

inline constexpr int kAlternatingTerms = 80;

/// Weights w_k with sum_k (-1)^k a_k ~ sum_{k<n} (-1)^k w_k a_k; error is
/// about (3 + sqrt 8)^{-n} e^{pi |t| / 2}.
inline const std::array<double, kAlternatingTerms>& alternating_weights() {
  static const std::array<double, kAlternatingTerms> w = [] {
    constexpr int n = kAlternatingTerms;
    std::array<double, n + 1> d{};
    double t = 1.0 / n;
    double acc = t;
    d[0] = n * acc;
    for (int i = 1; i <= n; ++i) {
      t *= 4.0 * (n + i - 1.0) * (n - i + 1.0) / ((2.0 * i) * (2.0 * i - 1.0));
      acc += t;
      d[i] = n * acc;
    }
    std::array<double, n> out{};
    for (int k = 0; k < n; ++k) out[k] = (d[n] - d[k]) / d[n];
    return out;
  }();
  return w;
}

/// sum_k (-1)^k (a k + b)^{-s} accelerated.
inline std::complex<double> alternating_power_sum(std::complex<double> s, double a, double b) {
  const auto& w = alternating_weights();
  std::complex<double> sum = 0.0;
  for (int k = 0; k < kAlternatingTerms; ++k) {
    const std::complex<double> term = w[k] * std::exp(-s * std::log(a * k + b));
    sum += (k & 1) ? -term : term;
  }
  return sum;
}

inline std::complex<double> expm1(std::complex<double> z) {
  if (std::abs(z) < 0.5) {
    std::complex<double> term = z, sum = z;
    for (int k = 2; k < 30; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::exp(z) - 1.0;
}

}  // namespace detail

/// Dirichlet eta function (1 - 2^{1-s}) zeta(s).
inline std::complex<double> dirichlet_eta(std::complex<double> s) { return detail::alternating_power_sum(s, 1.0, 1.0); }

inline std::complex<double> zeta(std::complex<double> s) {
  if (s == std::complex<double>{1.0}) throw std::domain_error("hecke: zeta has a pole at s = 1");
  const std::complex<double> denom = -detail::expm1((1.0 - s) * std::numbers::ln2);
  if (denom == 0.0) throw std::domain_error("hecke: zeta via eta is singular at this s");
  return dirichlet_eta(s) / denom;
}

/// beta(s) = sum_{k>=0} (-1)^k (2k+1)^{-s}, the L-function of the character mod 4.
inline std::complex<double> dirichlet_beta(std::complex<double> s) {
  return detail::alternating_power_sum(s, 2.0, 1.0);
}

/// zeta_K(s) = zeta(s) beta(s) for K = Q(i).
inline std::complex<double> zeta_K(std::complex<double> s) { return zeta(s) * dirichlet_beta(s); }

inline constexpr double kCatalan = 0.915965594177219015054603514932384110774;

}  // namespace hecke
