#pragma once

// L(s, chi_{(1+i)^5 d}) and its completions Lambda and xi: Dirichlet
// coefficients by norm, a smoothed approximate functional equation, the
// divisor weights r_s(n), and the kernel sum A_{delta,tau}(d).

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hecke/characters.hpp"
#include "hecke/gamma.hpp"
#include "hecke/kernel.hpp"

namespace hecke {

inline constexpr i64 kCoeffCutoffLimit = 100'000'000;

/// chi at the primary primes over each rational prime p <= limit:
/// split p = w w' gives (chi(w), chi(w')); inert p gives chi(-p) when p^2 <= limit.
class CharPrimeTable {
 public:
  CharPrimeTable(const CharacterSpec& spec, i64 limit)
      : limit_(limit), sieve_(static_cast<u64>(limit)), chi1_(limit + 1, 0), chi2_(limit + 1, 0) {
    for (i64 p = 3; p <= limit; p += 2) {
      if (sieve_.factor(static_cast<u64>(p)).front().first != static_cast<u64>(p)) continue;
      if (p % 4 == 1) {
        const GaussInt w = detail::split_prime_over(static_cast<u64>(p));
        chi1_[p] = static_cast<std::int8_t>(residue_symbol_prime(spec.modulus, w));
        chi2_[p] = static_cast<std::int8_t>(residue_symbol_prime(spec.modulus, primary_associate(w.conj())));
      } else if (p <= limit / p) {
        chi1_[p] = static_cast<std::int8_t>(residue_symbol_prime(spec.modulus, GaussInt{-p}));
      }
    }
  }

  i64 limit() const { return limit_; }
  const PrimeSieve& sieve() const { return sieve_; }
  int chi1(i64 p) const { return chi1_[p]; }
  int chi2(i64 p) const { return chi2_[p]; }

 private:
  i64 limit_;
  PrimeSieve sieve_;
  std::vector<std::int8_t> chi1_, chi2_;
};

/// a[n] = sum over primary m with N(m) = n of chi(m), for 1 <= n <= cutoff.
struct CoeffTable {
  CharacterSpec spec;
  i64 cutoff = 0;
  std::vector<int> a;  // a[0] unused

  int operator[](i64 n) const { return a[n]; }
};

namespace detail {

/// c^k for a symbol value c in {-1, 0, 1}.
inline int symbol_pow(int c, int k) { return k == 0 ? 1 : ((k % 2 != 0) ? c : c * c); }

inline void check_cutoff(i64 cutoff) {
  if (cutoff < 1) throw std::invalid_argument("hecke: coefficient cutoff must be >= 1");
  if (cutoff > kCoeffCutoffLimit) throw std::length_error("hecke: coefficient cutoff above 10^8");
}

}  // namespace detail

/// Multiplicative construction: the primary ideals of norm p^e are products of
/// the primes over p, so a_n is a product of local factors.
inline CoeffTable build_coeff_table(const CharacterSpec& spec, i64 cutoff) {
  detail::check_cutoff(cutoff);
  const CharPrimeTable primes(spec, cutoff);
  CoeffTable t{spec, cutoff, std::vector<int>(cutoff + 1, 0)};
  t.a[1] = 1;
  for (i64 n = 3; n <= cutoff; n += 2) {
    int v = 1;
    for (const auto& [pu, e] : primes.sieve().factor(static_cast<u64>(n))) {
      const auto p = static_cast<i64>(pu);
      if (p % 4 == 3) {
        v = (e % 2 != 0) ? 0 : v * detail::symbol_pow(primes.chi1(p), e / 2);
      } else {
        // sum_{j=0}^{e} chi1^j chi2^(e-j)
        const int c1 = primes.chi1(p), c2 = primes.chi2(p);
        int s = 0;
        for (int j = 0; j <= e; ++j) s += detail::symbol_pow(c1, j) * detail::symbol_pow(c2, e - j);
        v *= s;
      }
      if (v == 0) break;
    }
    t.a[n] = v;
  }
  return t;
}

/// Lattice walk over primary m with N(m) <= cutoff, accumulating chi_value.
inline CoeffTable build_coeff_table_by_lattice(const CharacterSpec& spec, i64 cutoff) {
  detail::check_cutoff(cutoff);
  CoeffTable t{spec, cutoff, std::vector<int>(cutoff + 1, 0)};
  const auto r = static_cast<i64>(std::floor(std::sqrt(static_cast<double>(cutoff))));
  const PrimeSieve sieve(static_cast<u64>(cutoff));
  for (i64 x = -r; x <= r; ++x) {
    for (i64 y = -(r - r % 2); y <= r; y += 2) {
      const GaussInt m{x, y};
      const i64 n = norm(m);
      if (n == 0 || n > cutoff || !is_primary(m)) continue;
      t.a[n] += residue_symbol(spec.modulus, factor(m, &sieve));
    }
  }
  return t;
}

/// r_s(n) = sum_{ab = n, a, b primary} (N(a)/N(b))^s for primary n.
inline std::complex<double> r_weight(std::complex<double> s, const Factorization& nf) {
  if (nf.dyadic_exponent != 0) throw std::domain_error("hecke: r_s needs an odd argument");
  std::complex<double> r = 1.0;
  for (const auto& [p, e] : nf.odd_factors) {
    const double lp = std::log(static_cast<double>(norm(p)));
    std::complex<double> local = 0.0;
    for (int j = 0; j <= e; ++j) local += std::exp(s * (lp * (2 * j - e)));
    r *= local;
  }
  return r;
}

struct AfeOptions {
  /// Split point of the Mellin integral (1 gives symmetric weights).
  double eta = 1.0;
  /// n_max = ceil(headroom sqrt(A) max(eta, 1/eta)).
  double headroom = 45.0;
};

inline i64 afe_cutoff(const CharacterSpec& spec, const AfeOptions& opt = {}) {
  return static_cast<i64>(std::ceil(opt.headroom * std::sqrt(spec.A) * std::max(opt.eta, 1.0 / opt.eta)));
}

struct LValueResult {
  std::complex<double> s;
  std::complex<double> L;
  std::complex<double> xi;
  std::complex<double> Lambda;
  double truncation_error_bound = 0.0;
};

namespace detail {

/// Upper bound for sum_{n > N} sqrt(n) (sqrt(A)/n)^sig Gamma(sig, n x0), using
/// |a_n| <= d(n) <= 2 sqrt(n) and Gamma(sig, x) <= 2 x^{sig-1} e^{-x} once x >= 2 sig.
inline double afe_tail(double sig, double sqrtA, double x0, i64 N) {
  const double n = static_cast<double>(N + 1);
  const double x = n * x0;
  const double head = 2.0 * std::sqrt(n) * std::pow(sqrtA / n, sig) * (sig > 1 ? 2.0 : 1.0) * std::pow(x, sig - 1) *
                      std::exp(-x);
  return head / (-std::expm1(-x0));
}

template <class T>
T afe_lambda(const CoeffTable& table, T s, const AfeOptions& opt, i64 nmax) {
  const double sqrtA = std::sqrt(table.spec.A);
  const double lsa = std::log(sqrtA);
  const double x1 = opt.eta / sqrtA, x2 = 1.0 / (opt.eta * sqrtA);
  T sum = 0.0;
  for (i64 n = 1; n <= nmax; n += 2) {
    const int a = table.a[n];
    if (a == 0) continue;
    const double l = lsa - std::log(static_cast<double>(n));
    const double dn = static_cast<double>(n);
    sum += static_cast<double>(a) * (std::exp(s * l) * upper_incomplete_gamma<T>(s, dn * x1) +
                                     std::exp((1.0 - s) * l) * upper_incomplete_gamma<T>(1.0 - s, dn * x2));
  }
  return sum;
}

}  // namespace detail

/// Lambda(s) = sum_n a_n [(sqrt A / n)^s Gamma(s, n eta / sqrt A)
///                        + (sqrt A / n)^{1-s} Gamma(1-s, n / (eta sqrt A))],
/// xi = A^{-1/4} Lambda, L = Lambda / (A^{s/2} Gamma(s)).
inline LValueResult lfunction_eval(const CoeffTable& table, std::complex<double> s, const AfeOptions& opt = {}) {
  const i64 nmax = afe_cutoff(table.spec, opt);
  if (nmax > table.cutoff) throw std::length_error("hecke: coefficient table shorter than the AFE cutoff");
  LValueResult r;
  r.s = s;
  // s = 0 sits on the Gamma pole; use xi(0) = xi(1).
  const std::complex<double> se = (s == 0.0) ? std::complex<double>{1.0} : s;
  if (se.imag() == 0.0) {
    r.Lambda = detail::afe_lambda<double>(table, se.real(), opt, nmax);
  } else {
    r.Lambda = detail::afe_lambda<std::complex<double>>(table, se, opt, nmax);
  }
  const double A = table.spec.A;
  r.xi = std::pow(A, -0.25) * r.Lambda;
  r.L = (s == 0.0) ? std::complex<double>{0.0} : r.Lambda / (std::exp(0.5 * s * std::log(A) + log_gamma(s)));
  const double sqrtA = std::sqrt(A);
  r.truncation_error_bound = detail::afe_tail(se.real(), sqrtA, opt.eta / sqrtA, nmax) +
                             detail::afe_tail(1.0 - se.real(), sqrtA, 1.0 / (opt.eta * sqrtA), nmax);
  return r;
}

inline LValueResult lfunction_eval(const CharacterSpec& spec, std::complex<double> s, const AfeOptions& opt = {}) {
  return lfunction_eval(build_coeff_table(spec, afe_cutoff(spec, opt)), s, opt);
}

/// xi(sigma) for real sigma, the fast path used by the zero scan.
inline double xi_real(const CoeffTable& table, double sigma, const AfeOptions& opt = {}) {
  const i64 nmax = afe_cutoff(table.spec, opt);
  if (nmax > table.cutoff) throw std::length_error("hecke: coefficient table shorter than the AFE cutoff");
  if (sigma == 0.0) sigma = 1.0;
  return std::pow(table.spec.A, -0.25) * detail::afe_lambda<double>(table, sigma, opt, nmax);
}

/// sum_{n <= cutoff} a_n n^{-s} for Re(s) > 1.
inline std::complex<double> dirichlet_series(const CoeffTable& table, std::complex<double> s) {
  if (!(s.real() > 1.0)) throw std::domain_error("hecke: Dirichlet series needs Re(s) > 1");
  detail::CompensatedSum sum;
  for (i64 n = table.cutoff - (table.cutoff % 2 == 0 ? 1 : 0); n >= 1; n -= 2) {
    if (table.a[n] != 0) sum.add(static_cast<double>(table.a[n]) * std::exp(-s * std::log(static_cast<double>(n))));
  }
  return sum.value();
}

struct KernelSumResult {
  std::complex<double> value;
  i64 norm_cutoff = 0;
  long terms = 0;
};

/// Largest x at which |W| still exceeds `floor` on the kernel grid.
inline double kernel_support_end(const WKernel& w, double floor = 1e-18) {
  double x = WKernel::kGridMax;
  while (x > 1.0 && std::abs(w(x)) < floor) x *= 0.98;
  return x;
}

/// A_{delta,tau}(d) = sum_{n primary} r_delta(n) N(n)^{-1/2} chi(n) W_{delta,tau}(pi^2 N(n) / (2^5 N(d))),
/// grouped by m = N(n): the inner sums over n of norm m are multiplicative in m.
inline KernelSumResult a_kernel_sum(const CharacterSpec& spec, std::complex<double> delta1, std::complex<double> delta2,
                                    const WKernel& w) {
  const std::complex<double> delta = 0.5 * (delta1 - delta2), tau = 0.5 * (delta1 + delta2);
  if (std::abs(w.delta() - delta) > 1e-15 || std::abs(w.tau() - tau) > 1e-15) {
    throw std::invalid_argument("hecke: kernel built for different (delta, tau)");
  }
  const double scale = std::numbers::pi * std::numbers::pi / static_cast<double>(spec.conductor_norm);
  const i64 cutoff = static_cast<i64>(std::ceil(kernel_support_end(w) / scale));
  detail::check_cutoff(cutoff);
  const CharPrimeTable primes(spec, cutoff);
  KernelSumResult out;
  out.norm_cutoff = cutoff;
  detail::CompensatedSum sum;
  for (i64 m = 1; m <= cutoff; m += 2) {
    std::complex<double> b = 1.0;
    if (m > 1) {
      for (const auto& [pu, e] : primes.sieve().factor(static_cast<u64>(m))) {
        const auto p = static_cast<i64>(pu);
        const double lp = std::log(static_cast<double>(p));
        // r_delta on a prime power of norm p^k: sum_{i=0}^{k'} N^{delta (2i - k')}
        auto r_local = [&](int k, double log_norm) {
          std::complex<double> r = 0.0;
          for (int i = 0; i <= k; ++i) r += std::exp(delta * (log_norm * (2 * i - k)));
          return r;
        };
        std::complex<double> local = 0.0;
        if (p % 4 == 3) {
          if (e % 2 == 0) local = static_cast<double>(detail::symbol_pow(primes.chi1(p), e / 2)) * r_local(e / 2, 2 * lp);
        } else {
          const int c1 = primes.chi1(p), c2 = primes.chi2(p);
          for (int j = 0; j <= e; ++j) {
            const int x = detail::symbol_pow(c1, j) * detail::symbol_pow(c2, e - j);
            if (x != 0) local += static_cast<double>(x) * r_local(j, lp) * r_local(e - j, lp);
          }
        }
        b *= local;
        if (b == 0.0) break;
      }
    }
    if (b == 0.0) continue;
    const double dm = static_cast<double>(m);
    sum.add(b / std::sqrt(dm) * w(scale * dm));
    ++out.terms;
  }
  out.value = sum.value();
  return out;
}

inline KernelSumResult a_kernel_sum(const CharacterSpec& spec, std::complex<double> delta1,
                                    std::complex<double> delta2) {
  const std::complex<double> tau = 0.5 * (delta1 + delta2);
  const WKernel w(0.5 * (delta1 - delta2), tau, default_kernel_config(tau));
  return a_kernel_sum(spec, delta1, delta2, w);
}

}  // namespace hecke
