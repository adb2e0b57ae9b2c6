#pragma once

// Property suites shared by the command-line `verify` runner and the
// acceptance binary. Each suite reports its worst residual against a
// tolerance; sizes are parameters so quick and full runs use the same code.

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hecke/mollifier.hpp"
#include "hecke/poisson.hpp"
#include "hecke/survey.hpp"

namespace hecke {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline SuiteResult finish(std::string name, double residual, double tol, std::string detail, const Stopwatch& sw,
                          bool extra_ok = true) {
  SuiteResult r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tol;
  r.passed = extra_ok && residual <= tol && std::isfinite(residual);
  r.detail = std::move(detail);
  r.seconds = sw.seconds();
  return r;
}

inline std::vector<GaussInt> sample_family(std::mt19937_64& rng, i64 max_norm, int count) {
  const auto all = enumerate_odd_squarefree(max_norm, EnumerationMode::all_associates);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  std::vector<GaussInt> out;
  for (int i = 0; i < count; ++i) out.push_back(all[pick(rng)]);
  return out;
}

inline cplx random_disc(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const cplx z{u(rng), u(rng)};
    if (std::abs(z) <= 1.0) return radius * z;
  }
}

/// Which row of the prime-power Gauss sum table applies to g(k, p^l):
/// 1, 2 for l <= h with l even, odd; 3, 4 for l = h + 1 with l even, odd; 5 for l >= h + 2.
inline int gauss_case(const GaussInt& k, const GaussInt& p, int l) {
  int h = 1 << 20;
  if (!k.is_zero()) {
    GaussInt t = k;
    h = strip_prime(t, p);
  }
  if (l <= h) return (l % 2 == 0) ? 1 : 2;
  if (l == h + 1) return (l % 2 == 0) ? 3 : 4;
  return 5;
}

}  // namespace detail

/// Closed-form against direct Gauss sums for every primary prime power of norm
/// <= max_norm, with a stratified sample of k per modulus: every valuation
/// 0..l+1 and k = 0, the rest random units of the residue ring times p^h.
inline SuiteResult verify_gauss_sums(i64 max_norm, int per_modulus, std::uint64_t seed) {
  const detail::Stopwatch sw;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<i64> coord(-60, 60);
  double worst = 0.0;
  long moduli = 0, sums = 0;
  bool cases[6] = {};
  for (const GaussInt& p : enumerate_odd_squarefree(max_norm, EnumerationMode::primary)) {
    if (factor(p).odd_factors.size() != 1) continue;
    GaussInt n = p;
    for (int l = 1; norm(n) <= max_norm; ++l, n *= p) {
      const SymbolTable table(n);
      ++moduli;
      for (int j = 0; j < per_modulus; ++j) {
        GaussInt k;
        if (j == 0) {
          k = GaussInt{0};
        } else {
          const int h = (j - 1) % (l + 2);
          GaussInt u;
          do {
            u = GaussInt{coord(rng), coord(rng)};
          } while (u.is_zero() || divides(p, u));
          k = pow(p, static_cast<unsigned>(h)) * u;
        }
        cases[detail::gauss_case(k, p, l)] = true;
        const cplx direct = gauss_sum_direct(k, table).numeric;
        const cplx closed = gauss_sum_closed(k, n).numeric;
        worst = std::max(worst, std::abs(direct - closed) / std::max(1.0, std::abs(direct)));
        ++sums;
      }
      if (norm(n) > max_norm / norm(p)) break;
    }
  }
  const bool all_cases = cases[1] && cases[2] && cases[3] && cases[4] && cases[5];
  return detail::finish("gauss_sums", worst, 1e-8,
                        std::to_string(moduli) + " moduli, " + std::to_string(sums) + " sums" +
                            (all_cases ? ", all five cases" : ", missing a case"),
                        sw, all_cases);
}

/// max over a 21-point grid of |xi(sigma) - xi(1 - sigma)| / max(1, |xi|), with
/// an unbalanced split point so the two halves of the expansion differ.
inline SuiteResult verify_functional_equation(int count, i64 max_norm, std::uint64_t seed) {
  const detail::Stopwatch sw;
  std::mt19937_64 rng(seed);
  AfeOptions opt;
  opt.eta = 1.25;
  double worst = 0.0;
  for (const GaussInt& d : detail::sample_family(rng, max_norm, count)) {
    const CharacterSpec chr(d);
    const CoeffTable table = build_coeff_table(chr, afe_cutoff(chr, opt));
    for (int k = 0; k <= 20; ++k) {
      const double s = k / 20.0;
      const double a = xi_real(table, s, opt), b = xi_real(table, 1.0 - s, opt);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
  }
  return detail::finish("functional_equation", worst, 1e-8, std::to_string(count) + " characters", sw);
}

/// |A_{delta,tau}(d) - xi(1/2 + delta1) xi(1/2 + delta2)| / max(1, |xi xi|).
inline SuiteResult verify_kernel_sum_identity(int count, i64 max_norm, double radius, std::uint64_t seed) {
  const detail::Stopwatch sw;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const GaussInt& d : detail::sample_family(rng, max_norm, count)) {
    const CharacterSpec chr(d);
    const cplx d1 = detail::random_disc(rng, radius), d2 = detail::random_disc(rng, radius);
    const CoeffTable t = build_coeff_table(chr, afe_cutoff(chr));
    const cplx xx = lfunction_eval(t, 0.5 + d1).xi * lfunction_eval(t, 0.5 + d2).xi;
    const cplx a = a_kernel_sum(chr, d1, d2).value;
    worst = std::max(worst, std::abs(a - xx) / std::max(1.0, std::abs(xx)));
  }
  return detail::finish("kernel_sum_identity", worst, 1e-6, std::to_string(count) + " triples", sw);
}

inline SuiteResult verify_poisson(const std::vector<GaussInt>& moduli, const std::vector<double>& scales) {
  const detail::Stopwatch sw;
  const SmoothBump w(0.5);
  double worst = 0.0;
  for (const GaussInt& n : moduli) {
    for (const double X : scales) worst = std::max(worst, poisson_check(n, X, w).residual);
  }
  return detail::finish("poisson", worst, 1e-6,
                        std::to_string(moduli.size() * scales.size()) + " (n, X) pairs", sw);
}

enum class SmallXReference {
  residue_only,   // W(x) -> 2 pi
  with_next_pole  // 2 pi - 4 sqrt(x) (2 - 2 gamma - log x)
};

/// W_{0,0} near 0 against the chosen reference (tolerance 1e-4), and |W_{0,0}(100)| <= 1e-3.
inline SuiteResult verify_kernel_asymptotics(SmallXReference ref) {
  const detail::Stopwatch sw;
  const double x = 1e-6;
  double expected = 2.0 * std::numbers::pi;
  if (ref == SmallXReference::with_next_pole) expected -= 4.0 * std::sqrt(x) * (2.0 - 2.0 * std::numbers::egamma - std::log(x));
  const double small = std::abs(W_kernel(x) - expected) / 1e-4;
  const double large = std::abs(W_kernel(100.0)) / 1e-3;
  char buf[160];
  std::snprintf(buf, sizeof buf, "W(1e-6) = %.10f, |W(100)| = %.3e", W_kernel(x).real(), std::abs(W_kernel(100.0)));
  // residual in units of the respective tolerances
  return detail::finish(ref == SmallXReference::residue_only ? "kernel_asymptotics" : "kernel_asymptotics_two_poles",
                        std::max(small, large), 1.0, buf, sw);
}

/// zeta_K(2) = zeta(2) G, the completed functional equation at random points,
/// and the residue pi/4 at s = 1.
inline SuiteResult verify_dedekind_zeta(int points, std::uint64_t seed) {
  const detail::Stopwatch sw;
  const double pi = std::numbers::pi;
  const double value = std::abs(zeta_K(2.0).real() - pi * pi / 6.0 * kCatalan) / 1e-9;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(0.05, 0.95), im(-40.0, 40.0);
  const auto lam = [pi](cplx s) { return std::exp(-s * std::log(pi) + log_gamma(s)) * zeta_K(s); };
  double fe = 0.0;
  for (int i = 0; i < points; ++i) {
    const cplx s{re(rng), im(rng)};
    const cplx a = lam(s), b = lam(1.0 - s);
    fe = std::max(fe, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  const cplx eps{1e-4};
  const double residue = std::abs(eps * zeta_K(1.0 + eps) - pi / 4.0) / 1e-3;
  return detail::finish("dedekind_zeta", std::max({value, fe / 1e-8, residue}), 1.0,
                        "residuals in units of 1e-9, 1e-8 and 1e-3", sw);
}

inline SuiteResult verify_density(i64 max_norm) {
  const detail::Stopwatch sw;
  const DensityResult all = density_count(max_norm, EnumerationMode::all_associates);
  const DensityResult prim = density_count(max_norm, EnumerationMode::primary);
  const double r = std::max(std::abs(all.ratio - all.expected) / 0.02, std::abs(prim.ratio - prim.expected) / 0.005);
  char buf[160];
  std::snprintf(buf, sizeof buf, "all %.5f vs %.5f, primary %.5f vs %.5f", all.ratio, all.expected, prim.ratio,
                prim.expected);
  return detail::finish("density", r, 1.0, buf, sw);
}

/// C <= 0.79 with error estimate <= 1e-4, and agreement with the stored value.
inline SuiteResult verify_headline_constant() {
  const detail::Stopwatch sw;
  const HeadlineResult h = headline_constant();
  constexpr double kFixture = 0.781733624002464;
  const bool ok = h.C <= 0.79 && h.error_estimate <= 1e-4 && !h.truncation_insufficient && h.converged;
  char buf[120];
  std::snprintf(buf, sizeof buf, "C = %.12f, error %.2e", h.C, h.error_estimate);
  return detail::finish("headline_constant", std::abs(h.C - kFixture), 1e-4, buf, sw, ok);
}

/// The nonvanishing proportion on (0, 1] strictly above 1/5.
inline SuiteResult verify_survey_proportion(i64 max_norm, EnumerationMode mode, int jobs) {
  const detail::Stopwatch sw;
  SurveyConfig cfg;
  cfg.jobs = jobs;
  const SurveySummary s = run_survey(max_norm, mode, cfg).summary;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%ld of %ld nonvanishing, %ld suspect, %ld failed", s.counts.nonvanishing,
                s.counts.total, s.counts.suspect, s.counts.failed);
  // residual: how far the proportion sits above 0.2, mapped so that <= 1 passes
  const double r = s.proportion > 0.2 ? 0.0 : 1.0 + (0.2 - s.proportion);
  return detail::finish("survey_proportion", r, 0.5, buf, sw);
}

/// Selberg's identity on z - z0 (one zero, closed form) and exp(z) (no zeros).
inline SuiteResult verify_box_counter() {
  const detail::Stopwatch sw;
  const BoxSpec box{0.3, 1.1, 0.1, 0.9};
  const cplx z0{0.4, 0.02};
  const double H = box.H;
  const double expected =
      4.0 * H * std::cos(std::numbers::pi * z0.imag() / (2 * H)) * std::sinh(std::numbers::pi * (z0.real() - box.W0) / (2 * H));
  const double one = std::abs(selberg_box_count([&](cplx z) { return z - z0; }, box, 1e-10).weighted_zero_sum - expected);
  const double none = std::abs(selberg_box_count([](cplx z) { return std::exp(z); }, box, 1e-10).weighted_zero_sum);
  char buf[120];
  std::snprintf(buf, sizeof buf, "single zero %.2e, zero-free %.2e", one, none);
  return detail::finish("box_counter", std::max(one / 1e-6, none / 1e-8), 1.0, buf, sw);
}

}  // namespace hecke
