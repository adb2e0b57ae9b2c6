#pragma once

// Quadratic residue symbols over Z[i], the characters chi_{(1+i)^5 d}, and
// quadratic Gauss sums g(r, n) by direct summation and by closed form.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hecke/gaussian.hpp"

namespace hecke {

using cplx = std::complex<double>;

/// exp(2 pi i (z/2i - conj(z)/2i)) = exp(2 pi i Im z).
inline cplx e_tilde(cplx z) { return std::polar(1.0, 2.0 * std::numbers::pi * z.imag()); }

/// Im(a / n) reduced to [0, 1) as the exact fraction t / N(n); returns t.
inline i64 e_tilde_phase(const GaussInt& a, const GaussInt& n) {
  using i128 = __int128;
  const i128 t = static_cast<i128>(a.im) * n.re - static_cast<i128>(a.re) * n.im;  // Im(a * conj(n))
  const i128 nn = static_cast<i128>(norm(n));
  i128 r = t % nn;
  if (r < 0) r += nn;
  return static_cast<i64>(r);
}

inline GaussInt powmod(GaussInt base, u64 exp, const GaussInt& m) {
  GaussInt r = mod(GaussInt{1}, m);
  base = mod(base, m);
  while (exp > 0) {
    if (exp & 1U) r = mod(r * base, m);
    exp >>= 1U;
    if (exp > 0) base = mod(base * base, m);
  }
  return r;
}

/// (a / p) for an odd prime p via Euler's criterion a^((N(p)-1)/2) = +-1 mod p.
inline int residue_symbol_prime(const GaussInt& a, const GaussInt& p) {
  const GaussInt ar = mod(a, p);
  if (ar.is_zero()) return 0;
  const GaussInt e = powmod(ar, static_cast<u64>((norm(p) - 1) / 2), p);
  if (divides(p, e - GaussInt{1})) return 1;
  if (divides(p, e + GaussInt{1})) return -1;
  throw std::logic_error("hecke: Euler criterion did not return +-1 (modulus not prime?)");
}

/// (a / n) for odd n given the factorization of n; units contribute 1.
inline int residue_symbol(const GaussInt& a, const Factorization& nf) {
  if (nf.dyadic_exponent != 0) throw std::domain_error("hecke: residue symbol needs an odd modulus");
  int s = 1;
  for (const auto& [p, e] : nf.odd_factors) {
    const int v = residue_symbol_prime(a, p);
    if (v == 0) return 0;
    if ((e & 1) != 0) s *= v;
  }
  return s;
}

inline int residue_symbol(const GaussInt& a, const GaussInt& n) {
  if (n.is_zero() || !is_odd(n)) throw std::domain_error("hecke: residue symbol needs an odd modulus");
  return residue_symbol(a, factor(n));
}

/// The character chi_c = (c / .) with c = (1+i)^5 d for odd square-free d.
struct CharacterSpec {
  GaussInt d;
  GaussInt modulus;
  i64 conductor_norm = 0;
  double A = 0.0;  // 2^5 N(d) / pi^2

  explicit CharacterSpec(const GaussInt& dd) : d(dd) {
    if (d.is_zero() || !is_odd(d)) throw std::invalid_argument("hecke: d must be odd and nonzero");
    if (!factor(d).odd_squarefree()) throw std::invalid_argument("hecke: d must be square-free");
    modulus = pow(kOnePlusI, 5) * d;
    conductor_norm = checked::mul(32, norm(d));
    A = static_cast<double>(conductor_norm) / (std::numbers::pi * std::numbers::pi);
  }
};

/// chi_{(1+i)^5 d}(a). Vanishes on even a since c = (1+i)^5 d is never a unit.
inline int chi_value(const CharacterSpec& spec, const GaussInt& a) {
  if (a.is_zero() || !is_odd(a)) return 0;
  return residue_symbol(spec.modulus, a);
}

/// a + b sqrt(radicand) with integers a, b.
struct SurdValue {
  i64 rational = 0;
  i64 surd_coefficient = 0;
  i64 radicand = 1;

  double value() const {
    return static_cast<double>(rational) +
           static_cast<double>(surd_coefficient) * std::sqrt(static_cast<double>(radicand));
  }
  friend bool operator==(const SurdValue&, const SurdValue&) = default;
};

struct GaussSumValue {
  cplx numeric;
  std::optional<SurdValue> exact;
};

inline constexpr i64 kGaussSumDirectLimit = 1'000'000;

namespace detail {

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(cplx v) {
    add_part(re_, re_c_, v.real());
    add_part(im_, im_c_, v.imag());
  }
  cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& s, double& c, double v) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

}  // namespace detail

/// Symbol table x -> (x / n) over residue_system(n), for repeated Gauss sums
/// against one modulus.
struct SymbolTable {
  GaussInt modulus;
  std::vector<GaussInt> residues;
  std::vector<int> symbols;

  explicit SymbolTable(const GaussInt& n) : modulus(n), residues(residue_system(n)) {
    const Factorization nf = factor(n);
    symbols.reserve(residues.size());
    for (const GaussInt& x : residues) symbols.push_back(residue_symbol(x, nf));
  }
};

/// g(r, n) = sum_{x mod n} (x/n) e~(r x / n) by direct summation.
inline GaussSumValue gauss_sum_direct(const GaussInt& r, const SymbolTable& table) {
  const GaussInt& n = table.modulus;
  const i64 nn = norm(n);
  detail::CompensatedSum sum;
  const double scale = 2.0 * std::numbers::pi / static_cast<double>(nn);
  for (std::size_t j = 0; j < table.residues.size(); ++j) {
    if (table.symbols[j] == 0) continue;
    const i64 t = e_tilde_phase(r * table.residues[j], n);
    sum.add(static_cast<double>(table.symbols[j]) * std::polar(1.0, scale * static_cast<double>(t)));
  }
  return {sum.value(), std::nullopt};
}

inline GaussSumValue gauss_sum_direct(const GaussInt& r, const GaussInt& n) {
  if (n.is_zero() || !is_odd(n)) throw std::domain_error("hecke: Gauss sum needs an odd modulus");
  if (norm(n) > kGaussSumDirectLimit) throw std::length_error("hecke: direct Gauss sum modulus above 10^6");
  return gauss_sum_direct(r, SymbolTable(n));
}

/// g(k, p^l) for a primary prime p from the five-case prime-power table.
inline SurdValue gauss_sum_prime_power(const GaussInt& k, const GaussInt& p, int l) {
  const i64 np = norm(p);
  auto npow = [np](int e) {
    i64 v = 1;
    for (int j = 0; j < e; ++j) v = checked::mul(v, np);
    return v;
  };
  // h = v_p(k), with h = infinity for k = 0.
  int h = 0;
  GaussInt unit_part = k;
  const bool infinite = k.is_zero();
  if (!infinite) h = detail::strip_prime(unit_part, p);
  if (infinite || l <= h) {
    if ((l & 1) != 0) return {0, 0, np};
    return {npow(l) - npow(l - 1), 0, np};
  }
  if (l == h + 1) {
    if ((l & 1) == 0) return {-npow(l - 1), 0, np};
    const int s = residue_symbol_prime(kI * unit_part, p);
    return {0, s * npow(l - 1), np};
  }
  return {0, 0, np};
}

/// g(k, n) from the prime-power table, multiplicativity over coprime primary
/// moduli, and g(k, u n') = g(k conj(u), n') for a unit u.
inline GaussSumValue gauss_sum_closed(const GaussInt& k, const GaussInt& n) {
  if (n.is_zero() || !is_odd(n)) throw std::domain_error("hecke: Gauss sum needs an odd modulus");
  const Factorization nf = factor(n);
  const GaussInt kk = k * nf.unit.conj();
  if (nf.odd_factors.empty()) return {cplx{1.0}, SurdValue{1, 0, 1}};
  if (nf.odd_factors.size() == 1) {
    const SurdValue v = gauss_sum_prime_power(kk, nf.odd_factors[0].prime, nf.odd_factors[0].exponent);
    return {cplx{v.value()}, v};
  }
  double value = 1.0;
  for (const auto& [p, e] : nf.odd_factors) value *= gauss_sum_prime_power(kk, p, e).value();
  return {cplx{value}, std::nullopt};
}

}  // namespace hecke
