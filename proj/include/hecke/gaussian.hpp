#pragma once

// Exact arithmetic in Z[i]: Euclidean division, canonical generators,
// factorization, Mobius/Euler functions and norm-ordered enumeration.

#include <algorithm>
#include <compare>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hecke/integer.hpp"

namespace hecke {

/// A Gaussian integer re + im*i with overflow-checked 64-bit components.
struct GaussInt {
  i64 re = 0;
  i64 im = 0;

  constexpr GaussInt() = default;
  constexpr GaussInt(i64 r) : re(r) {}  // NOLINT: rational integers embed implicitly
  constexpr GaussInt(i64 r, i64 i) : re(r), im(i) {}

  friend constexpr bool operator==(const GaussInt&, const GaussInt&) = default;
  /// Lexicographic on (re, im); used only as a deterministic tie-break.
  friend constexpr auto operator<=>(const GaussInt&, const GaussInt&) = default;

  constexpr bool is_zero() const { return re == 0 && im == 0; }

  GaussInt operator-() const { return {checked::sub(0, re), checked::sub(0, im)}; }
  GaussInt conj() const { return {re, checked::sub(0, im)}; }

  friend GaussInt operator+(const GaussInt& a, const GaussInt& b) {
    return {checked::add(a.re, b.re), checked::add(a.im, b.im)};
  }
  friend GaussInt operator-(const GaussInt& a, const GaussInt& b) {
    return {checked::sub(a.re, b.re), checked::sub(a.im, b.im)};
  }
  friend GaussInt operator*(const GaussInt& a, const GaussInt& b) {
    return {checked::sub(checked::mul(a.re, b.re), checked::mul(a.im, b.im)),
            checked::add(checked::mul(a.re, b.im), checked::mul(a.im, b.re))};
  }
  GaussInt& operator+=(const GaussInt& o) { return *this = *this + o; }
  GaussInt& operator-=(const GaussInt& o) { return *this = *this - o; }
  GaussInt& operator*=(const GaussInt& o) { return *this = *this * o; }

  std::complex<double> to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  std::string str() const {
    if (im == 0) return std::to_string(re);
    std::string s = re == 0 ? std::string{} : std::to_string(re);
    if (im < 0) {
      s += "-";
    } else if (re != 0) {
      s += "+";
    }
    const i64 a = im < 0 ? -im : im;
    if (a != 1) s += std::to_string(a);
    return s + "i";
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussInt& z) { return os << z.str(); }
};

inline constexpr GaussInt kI{0, 1};
inline constexpr GaussInt kOnePlusI{1, 1};
inline constexpr GaussInt kUnits[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

inline i64 norm(const GaussInt& z) {
  return checked::add(checked::mul(z.re, z.re), checked::mul(z.im, z.im));
}

inline bool is_unit(const GaussInt& z) { return norm(z) == 1; }

/// Odd means coprime to 1+i, equivalently odd norm.
inline bool is_odd(const GaussInt& z) { return ((z.re + z.im) & 1) != 0; }

inline GaussInt pow(GaussInt base, unsigned exp) {
  GaussInt r{1};
  while (exp > 0) {
    if (exp & 1U) r *= base;
    exp >>= 1U;
    if (exp > 0) base *= base;
  }
  return r;
}

struct DivMod {
  GaussInt quotient;
  GaussInt remainder;
};

/// a = q*b + r with each component of a/b rounded to the nearest integer, so
/// that N(r) <= N(b)/2.
inline DivMod euclid_divmod(const GaussInt& a, const GaussInt& b) {
  if (b.is_zero()) throw std::domain_error("hecke: Gaussian division by zero");
  using i128 = __int128;
  const i128 n = static_cast<i128>(b.re) * b.re + static_cast<i128>(b.im) * b.im;
  const i128 x = static_cast<i128>(a.re) * b.re + static_cast<i128>(a.im) * b.im;
  const i128 y = static_cast<i128>(a.im) * b.re - static_cast<i128>(a.re) * b.im;
  auto round_div = [n](i128 v) {
    // floor((2v + n) / 2n)
    const i128 num = 2 * v + n;
    const i128 den = 2 * n;
    i128 q = num / den;
    if ((num % den != 0) && (num < 0)) --q;
    return static_cast<i64>(q);
  };
  const GaussInt q{round_div(x), round_div(y)};
  return {q, a - q * b};
}

inline GaussInt mod(const GaussInt& a, const GaussInt& b) { return euclid_divmod(a, b).remainder; }

inline bool divides(const GaussInt& d, const GaussInt& z) {
  if (d.is_zero()) return z.is_zero();
  return mod(z, d).is_zero();
}

/// z / d, requiring exact divisibility.
inline GaussInt exact_div(const GaussInt& z, const GaussInt& d) {
  const auto [q, r] = euclid_divmod(z, d);
  if (!r.is_zero()) throw std::domain_error("hecke: inexact Gaussian division");
  return q;
}

/// True iff z = 1 mod (1+i)^3, i.e. im even and re + im = 1 mod 4.
inline bool is_primary(const GaussInt& z) {
  return (z.im & 1) == 0 && ((z.re + z.im) & 3) == 1;
}

/// The unique associate u*z with u*z = 1 mod (1+i)^3.
inline GaussInt primary_associate(const GaussInt& z) {
  if (z.is_zero() || !is_odd(z)) throw std::domain_error("hecke: primary associate needs an odd element");
  for (const GaussInt& u : kUnits) {
    const GaussInt w = u * z;
    if (is_primary(w)) return w;
  }
  throw std::logic_error("hecke: no primary associate found");
}

/// Divide out the largest power of 1+i; returns the exponent.
inline int strip_dyadic(GaussInt& z) {
  int m = 0;
  while (!z.is_zero() && !is_odd(z)) {
    // z / (1+i) = z (1-i) / 2
    z = GaussInt{(z.re + z.im) / 2, (z.im - z.re) / 2};
    ++m;
  }
  return m;
}

/// A generator of an ideal in the normal form (1+i)^m n' with m >= 0 and n'
/// primary. Exactly one associate of any nonzero element has this form.
struct CanonicalGenerator {
  GaussInt value;

  int dyadic_exponent() const {
    GaussInt z = value;
    return strip_dyadic(z);
  }
  GaussInt odd_part() const {
    GaussInt z = value;
    strip_dyadic(z);
    return z;
  }
  friend bool operator==(const CanonicalGenerator&, const CanonicalGenerator&) = default;
};

inline CanonicalGenerator canonical_generator(const GaussInt& z) {
  if (z.is_zero()) throw std::domain_error("hecke: zero has no canonical generator");
  GaussInt odd = z;
  const int m = strip_dyadic(odd);
  return {pow(kOnePlusI, static_cast<unsigned>(m)) * primary_associate(odd)};
}

inline bool is_canonical(const GaussInt& z) {
  return !z.is_zero() && canonical_generator(z).value == z;
}

inline CanonicalGenerator gcd(GaussInt a, GaussInt b) {
  if (a.is_zero() && b.is_zero()) throw std::domain_error("hecke: gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    GaussInt r = mod(a, b);
    a = b;
    b = r;
  }
  return canonical_generator(a);
}

struct PrimePower {
  GaussInt prime;  // primary
  int exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// unit * (1+i)^dyadic_exponent * prod prime^exponent, primes primary and
/// pairwise non-associate, ordered by (norm, re, im).
struct Factorization {
  GaussInt unit{1};
  int dyadic_exponent = 0;
  std::vector<PrimePower> odd_factors;

  GaussInt reassemble() const {
    GaussInt z = unit * pow(kOnePlusI, static_cast<unsigned>(dyadic_exponent));
    for (const auto& [p, e] : odd_factors) z *= pow(p, static_cast<unsigned>(e));
    return z;
  }

  /// Product of the odd prime powers (the primary odd part).
  GaussInt odd_part() const {
    GaussInt z{1};
    for (const auto& [p, e] : odd_factors) z *= pow(p, static_cast<unsigned>(e));
    return z;
  }

  bool odd_squarefree() const {
    return std::all_of(odd_factors.begin(), odd_factors.end(),
                       [](const PrimePower& f) { return f.exponent == 1; });
  }
};

namespace detail {

/// The primary prime of norm p lying over a split rational prime p = 1 mod 4.
inline GaussInt split_prime_over(u64 p) {
  const u64 r = sqrt_minus_one(p);
  GaussInt a{static_cast<i64>(p)};
  GaussInt b{static_cast<i64>(r), 1};
  while (!b.is_zero()) {
    GaussInt t = mod(a, b);
    a = b;
    b = t;
  }
  return primary_associate(a);
}

inline int strip_prime(GaussInt& z, const GaussInt& p) {
  int e = 0;
  for (;;) {
    const auto [q, r] = euclid_divmod(z, p);
    if (!r.is_zero()) return e;
    z = q;
    ++e;
  }
}

inline bool norm_order(const GaussInt& a, const GaussInt& b) {
  const i64 na = norm(a);
  const i64 nb = norm(b);
  if (na != nb) return na < nb;
  return a < b;
}

}  // namespace detail

/// Factor z by factoring its norm over Z and lifting each rational prime.
inline Factorization factor(const GaussInt& z, const PrimeSieve* sieve = nullptr) {
  if (z.is_zero()) throw std::domain_error("hecke: cannot factor 0");
  Factorization f;
  GaussInt rest = z;
  const u64 n = static_cast<u64>(norm(z));
  const auto rational = sieve != nullptr ? sieve->factor(n) : factor_integer(n);
  for (const auto& [p, e] : rational) {
    if (p == 2) {
      f.dyadic_exponent = strip_dyadic(rest);
    } else if (p % 4 == 3) {
      const GaussInt q{-static_cast<i64>(p)};
      const int k = detail::strip_prime(rest, q);
      f.odd_factors.push_back({q, k});
    } else {
      const GaussInt w = detail::split_prime_over(p);
      const GaussInt wbar = primary_associate(w.conj());
      const int a = detail::strip_prime(rest, w);
      const int b = detail::strip_prime(rest, wbar);
      if (a > 0) f.odd_factors.push_back({w, a});
      if (b > 0) f.odd_factors.push_back({wbar, b});
    }
  }
  if (!is_unit(rest)) throw std::logic_error("hecke: factorization left a non-unit cofactor");
  f.unit = rest;
  std::sort(f.odd_factors.begin(), f.odd_factors.end(),
            [](const PrimePower& x, const PrimePower& y) { return detail::norm_order(x.prime, y.prime); });
  return f;
}

struct MultiplicativeInvariants {
  int mu = 1;
  i64 phi = 1;
  bool is_squarefree = true;
};

/// Mobius function, Euler function |(Z[i]/(z))^*| and square-freeness of an
/// odd nonzero z.
inline MultiplicativeInvariants multiplicative_invariants(const Factorization& f) {
  MultiplicativeInvariants out;
  for (const auto& [p, e] : f.odd_factors) {
    const i64 np = norm(p);
    i64 pk = 1;
    for (int j = 1; j < e; ++j) pk = checked::mul(pk, np);
    out.phi = checked::mul(out.phi, checked::mul(pk, np - 1));
    if (e >= 2) {
      out.is_squarefree = false;
      out.mu = 0;
    } else if (out.mu != 0) {
      out.mu = -out.mu;
    }
  }
  return out;
}

inline MultiplicativeInvariants multiplicative_invariants(const GaussInt& z) {
  if (z.is_zero() || !is_odd(z)) throw std::domain_error("hecke: invariants need an odd nonzero element");
  return multiplicative_invariants(factor(z));
}

/// Square-freeness of an odd z from the rational factorization of its norm:
/// an inert q must appear to exponent exactly 2, and a split p to exponent 1,
/// or to exponent 2 with p | z (the product of the two conjugate primes).
inline bool odd_squarefree_by_norm(const GaussInt& z, const PrimeSieve& sieve) {
  for (const auto& [p, e] : sieve.factor(static_cast<u64>(norm(z)))) {
    const auto ip = static_cast<i64>(p);
    if (p % 4 == 3) {
      if (e != 2) return false;
    } else if (e >= 3) {
      return false;
    } else if (e == 2 && (z.re % ip != 0 || z.im % ip != 0)) {
      return false;
    }
  }
  return true;
}

enum class EnumerationMode { primary, all_associates };

/// Every odd square-free d with N(d) <= max_norm, ordered by norm, then (re, im).
inline std::vector<GaussInt> enumerate_odd_squarefree(i64 max_norm, EnumerationMode mode) {
  if (max_norm < 1) throw std::invalid_argument("hecke: max_norm must be >= 1");
  const PrimeSieve sieve(static_cast<u64>(max_norm));
  std::vector<GaussInt> out;
  i64 r = 0;
  while ((r + 1) * (r + 1) <= max_norm) ++r;
  for (i64 a = -r; a <= r; ++a) {
    for (i64 b = -r; b <= r; ++b) {
      const GaussInt z{a, b};
      if (((a + b) & 1) == 0 || a * a + b * b > max_norm) continue;
      if (mode == EnumerationMode::primary && !is_primary(z)) continue;
      if (odd_squarefree_by_norm(z, sieve)) out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end(), detail::norm_order);
  return out;
}

/// N(n) pairwise incongruent representatives of Z[i]/(n), each reduced by
/// euclid_divmod.
inline std::vector<GaussInt> residue_system(const GaussInt& n) {
  if (n.is_zero()) throw std::domain_error("hecke: residue system of 0");
  const i64 g = std::gcd(n.re < 0 ? -n.re : n.re, n.im < 0 ? -n.im : n.im);
  const i64 nn = norm(n);
  // With n = g*n1 and n1 primitive, Z[i]/(n) is represented by x + y*i,
  // 0 <= x < N(n)/g, 0 <= y < g.
  std::vector<GaussInt> out;
  out.reserve(static_cast<std::size_t>(nn));
  for (i64 y = 0; y < g; ++y) {
    for (i64 x = 0; x < nn / g; ++x) out.push_back(mod(GaussInt{x, y}, n));
  }
  return out;
}

}  // namespace hecke
