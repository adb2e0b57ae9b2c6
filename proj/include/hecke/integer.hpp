#pragma once

// Rational-integer helpers: overflow-checked 64-bit arithmetic, modular
// exponentiation, deterministic Miller-Rabin and trial-division factoring.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hecke {

using i64 = std::int64_t;
using u64 = std::uint64_t;

namespace checked {

inline i64 add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("hecke: 64-bit addition overflow");
  return r;
}

inline i64 sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("hecke: 64-bit subtraction overflow");
  return r;
}

inline i64 mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("hecke: 64-bit multiplication overflow");
  return r;
}

}  // namespace checked

/// Floor division for signed integers (rounds toward -infinity).
inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

/// Deterministic for all 64-bit inputs (bases are the first twelve primes).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : small) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Prime-power factorization of n >= 1 as (p, e) pairs with p increasing.
/// Trial division runs to 10^6; the remaining cofactor must be 1 or prime.
inline std::vector<std::pair<u64, int>> factor_integer(u64 n) {
  if (n == 0) throw std::domain_error("hecke: cannot factor 0");
  std::vector<std::pair<u64, int>> out;
  auto strip = [&](u64 p) {
    if (n % p != 0) return;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  constexpr u64 kTrialLimit = 1'000'000;
  for (u64 p = 5; p <= kTrialLimit && p * p <= n; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) {
    if (n > kTrialLimit * kTrialLimit && !is_prime(n)) {
      // Norms of inert primes q > 10^6 arrive as q^2.
      auto r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
      while (r * r > n) --r;
      while ((r + 1) * (r + 1) <= n) ++r;
      if (r * r != n || !is_prime(r)) throw std::domain_error("hecke: integer has two prime factors above 10^6");
      out.emplace_back(r, 2);
      return out;
    }
    out.emplace_back(n, 1);
  }
  return out;
}

/// Smallest-prime-factor table for fast bulk factoring of norms.
class PrimeSieve {
 public:
  explicit PrimeSieve(u64 limit) : spf_(limit + 1, 0) {
    for (u64 i = 2; i <= limit; ++i) {
      if (spf_[i] != 0) continue;
      for (u64 j = i; j <= limit; j += i) {
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
      }
    }
  }

  u64 limit() const { return spf_.size() - 1; }

  std::vector<std::pair<u64, int>> factor(u64 n) const {
    if (n == 0) throw std::domain_error("hecke: cannot factor 0");
    if (n > limit()) return factor_integer(n);
    std::vector<std::pair<u64, int>> out;
    while (n > 1) {
      const u64 p = spf_[n];
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> spf_;
};

/// A square root of -1 modulo a prime p = 1 (mod 4).
inline u64 sqrt_minus_one(u64 p) {
  if (p % 4 != 1) throw std::domain_error("hecke: -1 is a square only modulo primes p = 1 mod 4");
  for (u64 a = 2; a < p; ++a) {
    // a is a non-residue iff a^((p-1)/2) = -1, and then a^((p-1)/4) squares to -1.
    if (powmod(a, (p - 1) / 2, p) == p - 1) return powmod(a, (p - 1) / 4, p);
  }
  throw std::logic_error("hecke: no quadratic non-residue found");
}

}  // namespace hecke
