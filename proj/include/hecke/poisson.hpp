#pragma once

// Two-dimensional Poisson summation twisted by (./n): both sides of
//   sum_{m odd} (m/n) W(N(m)/X)
//     = X/(2N(n)) ((1+i)/n) sum_k (-1)^{N(k)} g(k, n) W~(sqrt(N(k) X / (2 N(n)))),
// with W~(t) = int int W(x^2 + y^2) e~(-t(x + yi)) dx dy.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <unordered_map>

#include <boost/math/quadrature/gauss.hpp>

#include "hecke/bump.hpp"
#include "hecke/characters.hpp"

namespace hecke {

/// W~(t) = pi int_1^2 W(u) J_0(2 pi t sqrt(u)) du for W supported in [1, 2].
template <class W>
double hankel_transform(const W& w, double t) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  // about five panels per period of J_0, with a floor for the steep bump flanks
  const int panels = 24 + static_cast<int>(2.0 * t);
  const double h = 1.0 / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = 1.0 + p * h;
    sum += GL::integrate([&](double u) { return w(u) * ::j0(2.0 * std::numbers::pi * t * std::sqrt(u)); }, a, a + h);
  }
  return std::numbers::pi * sum;
}

struct PoissonResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / max(1, |lhs|)
  long lhs_terms = 0;
  long rhs_terms = 0;
};

/// Both sides for primary n, scale X and a bump W on [1, 2]; the dual sum runs
/// over N(k) with sqrt(N(k) X / 2N(n)) <= t_max.
inline PoissonResult poisson_check(const GaussInt& n, double X, const SmoothBump& w, double t_max = 200.0) {
  if (!is_primary(n)) throw std::invalid_argument("hecke: Poisson summation needs a primary modulus");
  if (!(X > 0.0)) throw std::invalid_argument("hecke: X must be positive");
  const Factorization nf = factor(n);
  const i64 nn = norm(n);
  PoissonResult out;

  detail::CompensatedSum lhs;
  const auto mmax = static_cast<i64>(std::ceil(std::sqrt(2.0 * X)));
  for (i64 a = -mmax; a <= mmax; ++a) {
    for (i64 b = -mmax; b <= mmax; ++b) {
      const GaussInt m{a, b};
      const double u = static_cast<double>(norm(m)) / X;
      if (!is_odd(m) || u <= 1.0 || u >= 2.0) continue;
      const int s = residue_symbol(m, nf);
      if (s == 0) continue;
      lhs.add(s * w(u));
      ++out.lhs_terms;
    }
  }

  const SymbolTable table(n);
  std::map<GaussInt, double> gauss_cache;
  std::unordered_map<i64, double> hankel_cache;
  const double scale = X / (2.0 * static_cast<double>(nn));
  const auto kmax_norm = static_cast<i64>(std::floor(t_max * t_max / scale));
  const auto kmax = static_cast<i64>(std::floor(std::sqrt(static_cast<double>(kmax_norm))));
  detail::CompensatedSum rhs;
  for (i64 a = -kmax; a <= kmax; ++a) {
    for (i64 b = -kmax; b <= kmax; ++b) {
      const GaussInt k{a, b};
      const i64 nk = norm(k);
      if (nk > kmax_norm) continue;
      const GaussInt key = mod(k, n);
      auto g = gauss_cache.find(key);
      if (g == gauss_cache.end()) g = gauss_cache.emplace(key, gauss_sum_direct(key, table).numeric.real()).first;
      if (g->second == 0.0) continue;
      auto h = hankel_cache.find(nk);
      if (h == hankel_cache.end()) h = hankel_cache.emplace(nk, hankel_transform(w, std::sqrt(nk * scale))).first;
      rhs.add(((nk & 1) ? -1.0 : 1.0) * g->second * h->second);
      ++out.rhs_terms;
    }
  }
  out.lhs = lhs.value().real();
  out.rhs = scale * residue_symbol(kOnePlusI, nf) * rhs.value().real();
  out.residual = std::abs(out.lhs - out.rhs) / std::max(1.0, std::abs(out.lhs));
  return out;
}

}  // namespace hecke
