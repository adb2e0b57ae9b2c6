#pragma once

// The mollifier lambda(n), M(s, d), weighted family sums over odd d with the
// square-free sieve split, the empirical mollified second moment, the
// integrand V(u, v) and the constant C bounding the proportion of d with a
// real zero.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hecke/bump.hpp"
#include "hecke/lfunction.hpp"
#include "hecke/parallel.hpp"
#include "hecke/quadrature.hpp"

namespace hecke {

/// lambda(n) = mu(n) Q(log(M / N(n)) / log M) on primary n with N(n) <= M,
/// where Q = 1 on [b, 1] and Q = P on [0, b].
class MollifierSpec {
 public:
  static constexpr double kMaxLength = 1e7;

  /// P(x) = 3 (x/b)^2 - 2 (x/b)^3.
  static std::vector<double> default_polynomial(double b) { return {0.0, 0.0, 3.0 / (b * b), -2.0 / (b * b * b)}; }

  explicit MollifierSpec(double M_length, double b = 0.64) : MollifierSpec(M_length, b, default_polynomial(b)) {}

  /// P given by ascending coefficients.
  MollifierSpec(double M_length, double b, std::vector<double> P) : M_(M_length), b_(b), P_(std::move(P)) {
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("hecke: mollifier b must lie in (0, 1)");
    if (!(M_length >= 1.0 && M_length <= kMaxLength)) throw std::invalid_argument("hecke: mollifier length out of range");
    const double tol = 1e-12;
    if (std::abs(poly(0.0, 0)) > tol || std::abs(poly(0.0, 1)) > tol || std::abs(poly(b, 0) - 1.0) > tol ||
        std::abs(poly(b, 1)) > tol * std::max(1.0, 1.0 / b)) {
      throw std::invalid_argument("hecke: P must satisfy P(0) = P'(0) = 0, P(b) = 1, P'(b) = 0");
    }
    build_cache();
  }

  double M_length() const { return M_; }
  double b() const { return b_; }
  const std::vector<double>& P() const { return P_; }
  const std::map<GaussInt, double>& lambda_cache() const { return cache_; }

  /// P^{(order)}(x), order <= 2.
  double poly(double x, int order = 0) const {
    double r = 0.0;
    for (int k = static_cast<int>(P_.size()) - 1; k >= order; --k) {
      double c = P_[k];
      for (int j = 0; j < order; ++j) c *= (k - j);
      r = r * x + c;
    }
    return r;
  }
  double Q(double x) const { return x >= b_ ? 1.0 : poly(x, 0); }
  double Q1(double x) const { return x >= b_ ? 0.0 : poly(x, 1); }
  double Q2(double x) const { return x >= b_ ? 0.0 : poly(x, 2); }

  double lambda(const GaussInt& n) const {
    const auto it = cache_.find(n);
    return it == cache_.end() ? 0.0 : it->second;
  }

  /// Support points with their norms and factorizations, ordered by norm.
  struct Term {
    GaussInt n;
    i64 norm;
    double lambda;
    Factorization factors;
  };
  const std::vector<Term>& terms() const { return terms_; }

 private:
  void build_cache() {
    const auto nmax = static_cast<i64>(std::floor(M_));
    const double logM = std::log(M_);
    for (const GaussInt& n : enumerate_odd_squarefree(nmax, EnumerationMode::primary)) {
      const Factorization f = factor(n);
      const double mu = (f.odd_factors.size() % 2 == 0) ? 1.0 : -1.0;
      const i64 nn = norm(n);
      const double q = nn == 1 ? 1.0 : Q(std::log(M_ / static_cast<double>(nn)) / logM);
      cache_[n] = mu * q;
      terms_.push_back({n, nn, mu * q, f});
    }
  }

  double M_, b_;
  std::vector<double> P_;
  std::map<GaussInt, double> cache_;
  std::vector<Term> terms_;
};

inline double lambda_coeff(const MollifierSpec& spec, const GaussInt& n) { return spec.lambda(n); }

/// M(s, d) = sum_{N(n) <= M} lambda(n) N(n)^{-s} chi(n).
inline std::complex<double> mollifier_value(const MollifierSpec& spec, const CharacterSpec& chr, std::complex<double> s) {
  std::complex<double> sum = 0.0;
  for (const auto& t : spec.terms()) {
    if (t.lambda == 0.0) continue;
    const int c = t.norm == 1 ? 1 : residue_symbol(chr.modulus, t.factors);
    if (c == 0) continue;
    sum += t.lambda * static_cast<double>(c) * std::exp(-s * std::log(static_cast<double>(t.norm)));
  }
  return sum;
}

struct MomentConfig {
  double X = 5000.0;
  double Y = 0.0;  // 0 selects X^{1/4}
  SmoothBump Phi{0.05};
  double phi_scale = 1.0;
  double kappa = 1e-10;
  double R = 6.8;
  double S = 0.0;  // 0 selects pi / (2 (1 - b)(1 - 20 kappa)) with b = 0.64
  EnumerationMode mode = EnumerationMode::all_associates;
  int jobs = 1;

  double M_length() const { return std::pow(X, 0.5 - 5.0 * kappa); }
  double sieve_cutoff() const { return Y > 0.0 ? Y : std::max(1.5, std::pow(X, 0.25)); }
  double sigma0() const {
    const double lm = std::log(M_length());
    return 1.0 + 3.0 * std::log(lm) / lm;
  }
  double S_value(double b = 0.64) const { return S > 0.0 ? S : std::numbers::pi / (2.0 * (1.0 - b) * (1.0 - 20.0 * kappa)); }

  void validate() const {
    if (!(X > 1.0)) throw std::invalid_argument("hecke: X must exceed 1");
    const double y = sieve_cutoff();
    if (!(y > 1.0 && y <= std::sqrt(2.0 * X))) throw std::invalid_argument("hecke: need 1 < Y <= sqrt(2X)");
    if (!(R > 0.0) || !(S_value() > 0.0)) throw std::invalid_argument("hecke: R and S must be positive");
    if (!(phi_scale > 0.0)) throw std::invalid_argument("hecke: Phi scale must be positive");
  }
};

/// (M_Y(d), R_Y(d)): sums of mu(l) over primary l with l^2 | d and N(l) <= Y,
/// resp. N(l) > Y. Their sum is mu^2(d).
inline std::pair<int, int> sieve_split(const Factorization& f, double Y) {
  std::vector<i64> squares;
  for (const auto& pp : f.odd_factors) {
    if (pp.exponent >= 2) squares.push_back(norm(pp.prime));
  }
  int m = 0, r = 0;
  const std::size_t k = squares.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    double nl = 1.0;
    int sign = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (std::size_t{1} << j)) {
        nl *= static_cast<double>(squares[j]);
        sign = -sign;
      }
    }
    (nl <= Y ? m : r) += sign;
  }
  return {m, r};
}

enum class FamilyVariant { full, M_part, R_part, R_part_abs };

/// Odd d with X < N(d) < 2X in (norm, re, im) order, restricted to primary d in primary mode.
inline std::vector<GaussInt> family_members(double X, EnumerationMode mode) {
  const auto hi = static_cast<i64>(std::ceil(2.0 * X));
  i64 r = 0;
  while ((r + 1) * (r + 1) <= hi) ++r;
  std::vector<GaussInt> out;
  for (i64 a = -r; a <= r; ++a) {
    for (i64 b = -r; b <= r; ++b) {
      const GaussInt z{a, b};
      const auto n = static_cast<double>(norm(z));
      if (!is_odd(z) || n <= X || n >= 2.0 * X) continue;
      if (mode == EnumerationMode::primary && !is_primary(z)) continue;
      out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end(), detail::norm_order);
  return out;
}

/// (1/X) sum_{d odd} w(d) a(d) Phi(N(d)/X) with w = mu^2, M_Y, R_Y or |R_Y|
/// (the last also takes |a|). Terms are reduced in enumeration order.
template <class F>
auto family_sum(F a, const MomentConfig& cfg, FamilyVariant variant = FamilyVariant::full) -> decltype(a(GaussInt{})) {
  using T = decltype(a(GaussInt{}));
  cfg.validate();
  const std::vector<GaussInt> ds = family_members(cfg.X, cfg.mode);
  const PrimeSieve sieve(static_cast<u64>(std::ceil(2.0 * cfg.X)));
  const double Y = cfg.sieve_cutoff();
  const auto terms = parallel_map<T>(ds.size(), cfg.jobs, [&](std::size_t i) -> T {
    const GaussInt& d = ds[i];
    const Factorization f = factor(d, &sieve);
    double w = 0.0;
    switch (variant) {
      case FamilyVariant::full: w = f.odd_squarefree() ? 1.0 : 0.0; break;
      case FamilyVariant::M_part: w = sieve_split(f, Y).first; break;
      case FamilyVariant::R_part: w = sieve_split(f, Y).second; break;
      case FamilyVariant::R_part_abs: w = std::abs(sieve_split(f, Y).second); break;
    }
    if (w == 0.0) return T{};
    const double phi = cfg.phi_scale * cfg.Phi(static_cast<double>(norm(d)) / cfg.X);
    if (phi == 0.0) return T{};
    const T v = a(d);
    if (variant == FamilyVariant::R_part_abs) return T(w * phi * std::abs(v));
    return T(w * phi * v);
  });
  T sum{};
  for (const T& t : terms) sum += t;
  return sum / cfg.X;
}

/// Main term of the mollified second moment at s = 1/2 + delta1:
/// 1 + ((1 - A^{-2 tau}) / (2 tau log M) - A^{-tau}(A^{delta} - A^{-delta}) / (2 delta log M))
///       int_0^b M^{-2 tau (1-x)} |Q'(x) + Q''(x) / (2 delta1 log M)|^2 dx,
/// with A = 2^5 X / pi^2, tau = Re delta1, delta = i Im delta1.
inline double mollified_ratio_prediction(std::complex<double> delta1, double X, const MollifierSpec& spec) {
  if (delta1 == 0.0) throw std::domain_error("hecke: prediction needs delta1 != 0");
  const double logM = std::log(spec.M_length());
  const double logA = std::log(32.0 * X / (std::numbers::pi * std::numbers::pi));
  const double tau = delta1.real();
  // (1 - A^{-2 tau}) / (2 tau) and (A^delta - A^{-delta}) / (2 delta), both -> log A at 0
  const double first = tau == 0.0 ? logA : -std::expm1(-2.0 * tau * logA) / (2.0 * tau);
  const double second = delta1.imag() == 0.0 ? logA : (std::sin(delta1.imag() * logA) / delta1.imag());
  const double bracket = (first - std::exp(-tau * logA) * second) / logM;
  const auto integrand = [&](double x) {
    const std::complex<double> g = spec.Q1(x) + spec.Q2(x) / (2.0 * delta1 * logM);
    return std::exp(-2.0 * tau * logM * (1.0 - x)) * std::norm(g);
  };
  const double I = integrate_adaptive(integrand, 0.0, spec.b(), 1e-13, 1e-12).value;
  return 1.0 + bracket * I;
}

struct MomentRatio {
  double ratio = 0.0;       // S(|L M|^2; Phi) / S(1; Phi)
  double prediction = 0.0;  // main term from the asymptotic formula
  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t family_size = 0;
};

/// Brute-force W(delta1, Phi) = S(|L(1/2 + delta1) M(1/2 + delta1, d)|^2; Phi) / S(1; Phi).
inline MomentRatio mollified_ratio(std::complex<double> delta1, const MomentConfig& cfg, const MollifierSpec& spec,
                                   const AfeOptions& opt = {}) {
  cfg.validate();
  const std::complex<double> s = 0.5 + delta1;
  std::size_t count = 0;
  MomentRatio out;
  out.numerator = family_sum(
      [&](const GaussInt& d) {
        const CharacterSpec chr(d);
        const std::complex<double> L = lfunction_eval(chr, s, opt).L;
        return std::norm(L * mollifier_value(spec, chr, s));
      },
      cfg);
  out.denominator = family_sum(
      [&](const GaussInt&) {
        ++count;
        return 1.0;
      },
      MomentConfig{cfg.X, cfg.Y, cfg.Phi, cfg.phi_scale, cfg.kappa, cfg.R, cfg.S, cfg.mode, 1});
  out.family_size = count;
  out.ratio = out.numerator / out.denominator;
  out.prediction = delta1 == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                 : mollified_ratio_prediction(delta1, cfg.X, spec);
  return out;
}

/// Which denominator of the gradient term Q'' / (2 rho z) to use.
enum class VReading {
  u_plus_iv,  // z = u + iv, matching the asymptotic moment formula
  x_plus_iv,  // z = x + iv, the literal printed variable
};

/// Prefactor e^{-u} log X / (k log M): k = 1 follows from the moment formula,
/// k = 2 is the variant with an extra factor 1/2.
enum class VNormalization { moment, halved };

struct VOptions {
  VReading reading = VReading::u_plus_iv;
  VNormalization normalization = VNormalization::moment;
  double rel_tol = 1e-13;
};

namespace detail {

inline double sinhc(double u) { return std::abs(u) < 1e-4 ? 1.0 + u * u / 6.0 : std::sinh(u) / u; }
inline double sinc(double v) { return std::abs(v) < 1e-4 ? 1.0 - v * v / 6.0 : std::sin(v) / v; }

/// e^{-u} (sinh u / u - sin v / v), without overflow for large u.
inline double v_factor(double u, double v) {
  const double a = std::abs(u) < 1e-4 ? std::exp(-u) * sinhc(u) : -std::expm1(-2.0 * u) / (2.0 * u);
  return a - std::exp(-u) * sinc(v);
}

/// e^{-u} (sinh u / u - sin v / v) / (u^2 + v^2), series near the origin.
inline double v_factor_over_norm(double u, double v) {
  const double u2 = u * u, v2 = v * v;
  if (u2 + v2 < 1e-4) return std::exp(-u) * (1.0 / 6.0 + (u2 - v2) / 120.0 + (u2 * u2 - u2 * v2 + v2 * v2) / 5040.0);
  return v_factor(u, v) / (u2 + v2);
}

}  // namespace detail

/// V(u, v) - 1 = (e^{-u} / (k rho)) (sinh u / u - sin v / v)
///                 int_0^b e^{-2 u rho (1 - x)} |P'(x) + P''(x) / (2 rho z)|^2 dx,
/// kept separate so log V stays accurate where V - 1 is below rounding.
inline double V_excess(double u, double v, double rho, const MollifierSpec& spec, const VOptions& opt = {}) {
  if (!(rho > 0.0 && rho <= 0.5)) throw std::invalid_argument("hecke: rho must lie in (0, 1/2]");
  const double k = opt.normalization == VNormalization::halved ? 2.0 : 1.0;
  const double b = spec.b();
  const auto weight = [&](double x) { return std::exp(-2.0 * u * rho * (1.0 - x)); };
  if (opt.reading == VReading::x_plus_iv) {
    if (v == 0.0) return std::numeric_limits<double>::infinity();
    const double F = detail::v_factor(u, v);
    const auto f = [&](double x) {
      const std::complex<double> g = spec.poly(x, 1) + spec.poly(x, 2) / (2.0 * rho * std::complex<double>(x, v));
      return weight(x) * std::norm(g);
    };
    const double I = integrate_adaptive(f, 0.0, b, 0.0, opt.rel_tol).value;
    return F * I / (k * rho);
  }
  // |P' + P''/(2 rho z)|^2 = P'^2 + P'P'' u / (rho |z|^2) + P''^2 / (4 rho^2 |z|^2)
  const double Ia = integrate_adaptive([&](double x) { return weight(x) * std::pow(spec.poly(x, 1), 2); }, 0.0, b, 0.0,
                                       opt.rel_tol).value;
  const double Ic = integrate_adaptive([&](double x) { return weight(x) * std::pow(spec.poly(x, 2), 2); }, 0.0, b, 0.0,
                                       opt.rel_tol).value;
  const double Ib = integrate_adaptive([&](double x) { return weight(x) * spec.poly(x, 1) * spec.poly(x, 2); }, 0.0, b,
                                       opt.rel_tol * std::sqrt(Ia * Ic), opt.rel_tol).value;
  const double F = detail::v_factor(u, v);
  const double G = detail::v_factor_over_norm(u, v);
  const double inner = F * Ia + G * (u / rho) * Ib + G * Ic / (4.0 * rho * rho);
  return inner / (k * rho);
}

inline double V_formula(double u, double v, double rho, const MollifierSpec& spec, const VOptions& opt = {}) {
  return 1.0 + V_excess(u, v, rho, spec, opt);
}

struct HeadlineOptions {
  double b = 0.64;
  double R = 6.8;
  double S = 0.0;  // 0 selects pi / (2 (1 - b)(1 - 20 kappa))
  double kappa = 1e-10;
  double u_max = 100.0;
  double abs_tol = 1e-10;
  double truncation_tol = 1e-4;  // largest acceptable tail contribution to C
  VOptions v;
};

struct HeadlineResult {
  double C = 0.0;
  double J1 = 0.0;
  double J2 = 0.0;
  double S = 0.0;
  double rho = 0.0;
  double quadrature_error = 0.0;  // on C
  double tail_estimate = 0.0;     // on C, from the dropped range u > u_max
  double error_estimate = 0.0;    // sum of the two
  bool converged = true;
  bool truncation_insufficient = false;
};

/// C = (J1 + J2) / (8 S sinh(pi R / 2S)) with
/// J1 = int_0^S cos(pi t / 2S) log V(-R, t) dt and
/// J2 = int_0^{u_max} sinh(pi u / 2S) log V(u - R, S) du.
inline HeadlineResult headline_constant(const HeadlineOptions& opt, const MollifierSpec& spec) {
  if (std::abs(spec.b() - opt.b) > 1e-15) throw std::invalid_argument("hecke: mollifier b differs from the headline b");
  if (!(opt.R > 0.0)) throw std::invalid_argument("hecke: R must be positive");
  HeadlineResult out;
  out.rho = 0.5 - 5.0 * opt.kappa;
  out.S = opt.S > 0.0 ? opt.S : std::numbers::pi / (2.0 * (1.0 - opt.b) * (1.0 - 20.0 * opt.kappa));
  const double S = out.S, R = opt.R, rho = out.rho;
  const double half_pi_over_S = std::numbers::pi / (2.0 * S);
  const auto logV = [&](double u, double v) { return std::log1p(V_excess(u, v, rho, spec, opt.v)); };

  const auto j1 = integrate_adaptive([&](double t) { return std::cos(half_pi_over_S * t) * logV(-R, t); }, 0.0, S,
                                     opt.abs_tol, 0.0);
  const auto f2 = [&](double u) { return std::sinh(half_pi_over_S * u) * logV(u - R, S); };
  const auto j2 = integrate_panels(f2, 0.0, opt.u_max, 10, opt.abs_tol, 0.0);
  out.J1 = j1.value;
  out.J2 = j2.value;
  out.converged = j1.converged && j2.converged;
  const double denom = 8.0 * S * std::sinh(half_pi_over_S * R);
  out.C = (out.J1 + out.J2) / denom;
  out.quadrature_error = (j1.error + j2.error) / denom;

  // The integrand of J2 decays like a power of u; extrapolate the dropped tail.
  const double fU = f2(opt.u_max), fU9 = f2(0.9 * opt.u_max);
  const double p = std::log(fU9 / fU) / std::log(1.0 / 0.9);
  const double tail = (fU > 0.0 && p > 1.0) ? fU * opt.u_max / (p - 1.0) : std::numeric_limits<double>::infinity();
  out.tail_estimate = tail / denom;
  out.error_estimate = out.quadrature_error + out.tail_estimate;
  out.truncation_insufficient = !(out.tail_estimate <= opt.truncation_tol);
  return out;
}

inline HeadlineResult headline_constant(const HeadlineOptions& opt = {}) {
  return headline_constant(opt, MollifierSpec(1.0, opt.b));
}

}  // namespace hecke
