#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cstdio>
#include <random>

#include "hecke/mollifier.hpp"

using namespace hecke;

namespace {

// lambda(n) from the definition, with P = 3(x/b)^2 - 2(x/b)^3 written out.
double lambda_by_definition(const GaussInt& n, double M, double b) {
  if (!is_primary(n) || static_cast<double>(norm(n)) > M) return 0.0;
  const Factorization f = factor(n);
  if (!f.odd_squarefree()) return 0.0;
  const double mu = f.odd_factors.size() % 2 == 0 ? 1.0 : -1.0;
  if (norm(n) == 1) return 1.0;
  const double x = std::log(M / static_cast<double>(norm(n))) / std::log(M);
  const double y = x / b;
  return x >= b ? mu : mu * (3 * y * y - 2 * y * y * y);
}

// Mollifier by a lattice walk over all Gaussian integers of norm <= M.
cplx mollifier_by_lattice(const CharacterSpec& chr, double M, double b, cplx s) {
  cplx sum = 0.0;
  const auto r = static_cast<i64>(std::sqrt(M)) + 1;
  for (i64 x = -r; x <= r; ++x) {
    for (i64 y = -r; y <= r; ++y) {
      const GaussInt n{x, y};
      const double l = lambda_by_definition(n, M, b);
      if (l == 0.0) continue;
      sum += l * static_cast<double>(chi_value(chr, n)) * std::pow(static_cast<double>(norm(n)), -s);
    }
  }
  return sum;
}

// V - 1 by integrating the complex modulus directly with Boost's adaptive rule.
double V_excess_oracle(double u, double v, double rho, double b, double k) {
  const auto P1 = [b](double x) { return 6.0 * x / (b * b) - 6.0 * x * x / (b * b * b); };
  const auto P2 = [b](double x) { return 6.0 / (b * b) - 12.0 * x / (b * b * b); };
  const cplx z{u, v};
  const auto f = [&](double x) {
    return std::exp(-2.0 * u * rho * (1.0 - x)) * std::norm(P1(x) + P2(x) / (2.0 * rho * z));
  };
  const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, b, 15, 1e-14);
  return std::exp(-u) * (std::sinh(u) / u - std::sin(v) / v) * I / (k * rho);
}

}  // namespace

TEST(Mollifier, RejectsBadPolynomial) {
  EXPECT_THROW(MollifierSpec(100.0, 0.64, {0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(MollifierSpec(100.0, 0.5, {0.0, 0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(MollifierSpec(100.0, 1.5), std::invalid_argument);
  EXPECT_NO_THROW(MollifierSpec(100.0, 0.5, MollifierSpec::default_polynomial(0.5)));
}

TEST(Mollifier, LambdaMatchesDefinition) {
  const double M = 300.0, b = 0.64;
  const MollifierSpec spec(M, b);
  EXPECT_EQ(lambda_coeff(spec, GaussInt{1}), 1.0);
  const double low = std::pow(M, 1.0 - b);
  for (i64 x = -25; x <= 25; ++x) {
    for (i64 y = -25; y <= 25; ++y) {
      const GaussInt n{x, y};
      if (n.is_zero()) continue;
      const double l = lambda_coeff(spec, n);
      EXPECT_NEAR(l, lambda_by_definition(n, M, b), 1e-14) << n.re << "+" << n.im << "i";
      EXPECT_LE(std::abs(l), 1.0);
      if (static_cast<double>(norm(n)) > M || !is_primary(n)) EXPECT_EQ(l, 0.0);
      if (l != 0.0 && static_cast<double>(norm(n)) <= low) {
        const double mu = factor(n).odd_factors.size() % 2 == 0 ? 1.0 : -1.0;
        EXPECT_EQ(l * mu, 1.0);
      }
    }
  }
  // continuity at N(n) = M^{1-b}
  EXPECT_NEAR(spec.Q(b - 1e-12), spec.Q(b), 1e-10);
}

TEST(Mollifier, ValueAgainstLattice) {
  const double M = 150.0, b = 0.64;
  const MollifierSpec spec(M, b);
  for (const GaussInt d : {GaussInt{1}, GaussInt{-1, 2}, GaussInt{3, 2}, GaussInt{0, 7}}) {
    const CharacterSpec chr(d);
    for (const cplx s : {cplx{0.5, 0.0}, cplx{0.6, 3.0}, cplx{2.0, -1.0}}) {
      const cplx m = mollifier_value(spec, chr, s);
      EXPECT_LT(std::abs(m - mollifier_by_lattice(chr, M, b, s)), 1e-12);
      EXPECT_LT(std::abs(std::conj(m) - mollifier_value(spec, chr, std::conj(s))), 1e-13);
      double bound = 0.0;
      for (const auto& t : spec.terms()) bound += std::abs(t.lambda) * std::pow(static_cast<double>(t.norm), -s.real());
      EXPECT_LE(std::abs(m), bound + 1e-12);
    }
  }
  const MollifierSpec trivial(4.9);
  EXPECT_EQ(mollifier_value(trivial, CharacterSpec(GaussInt{-3}), cplx{0.5, 2.0}), cplx(1.0));
}

TEST(FamilySum, SieveSplitSumsToMuSquared) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> coord(-300, 300);
  std::uniform_int_distribution<int> small(-6, 6);
  int nonsquarefree = 0;
  for (int i = 0; i < 1000; ++i) {
    GaussInt d{coord(rng), coord(rng)};
    // square a small odd factor into half the samples
    GaussInt l{small(rng), small(rng)};
    if (i % 2 == 0 && is_odd(l)) d *= l * l;
    if (d.is_zero() || !is_odd(d)) continue;
    const Factorization f = factor(d);
    const int mu2 = f.odd_squarefree() ? 1 : 0;
    nonsquarefree += 1 - mu2;
    for (const double Y : {1.5, 10.0, 100.0, 1e4}) {
      const auto [m, r] = sieve_split(f, Y);
      EXPECT_EQ(m + r, mu2);
    }
  }
  EXPECT_GT(nonsquarefree, 100);
}

TEST(FamilySum, DensityOfOneAtLargeX) {
  MomentConfig cfg;
  cfg.X = 1e5;
  cfg.Phi = SmoothBump(0.05);
  const double s1 = family_sum([](const GaussInt&) { return 1.0; }, cfg);
  const double phi_hat = mellin_hat(cfg.Phi, 1.0).value.real();
  const double expected = 2.0 * std::numbers::pi * phi_hat / (3.0 * zeta_K(2.0).real());
  std::printf("S(1;Phi) = %.6f, 2 pi Phi^(1) / (3 zeta_K(2)) = %.6f\n", s1, expected);
  EXPECT_LT(std::abs(s1 - expected), 5.0 / std::sqrt(cfg.X));
}

TEST(FamilySum, DecompositionLinearityAndScaling) {
  MomentConfig cfg;
  cfg.X = 3000;
  cfg.Y = 12.0;
  const auto a = [](const GaussInt& d) { return std::cos(0.01 * static_cast<double>(norm(d))) + 0.1 * d.re; };
  const auto b = [](const GaussInt& d) { return cplx(1.0, static_cast<double>(d.im) / 50.0); };
  const double full = family_sum(a, cfg);
  const double m = family_sum(a, cfg, FamilyVariant::M_part);
  const double r = family_sum(a, cfg, FamilyVariant::R_part);
  EXPECT_NEAR(full, m + r, 1e-12);
  EXPECT_NE(r, 0.0);
  EXPECT_LE(std::abs(r), family_sum(a, cfg, FamilyVariant::R_part_abs) + 1e-15);
  EXPECT_EQ(family_sum([](const GaussInt&) { return 0.0; }, cfg), 0.0);

  const cplx ab = family_sum([&](const GaussInt& d) { return 2.0 * a(d) - cplx(0, 3) * b(d); }, cfg);
  EXPECT_LT(std::abs(ab - (2.0 * full - cplx(0, 3) * family_sum(b, cfg))), 1e-12);

  MomentConfig scaled = cfg;
  scaled.phi_scale = 0.3;
  EXPECT_NEAR(family_sum(a, scaled), 0.3 * full, 1e-13);

  MomentConfig threaded = cfg;
  threaded.jobs = 3;
  EXPECT_EQ(family_sum(a, threaded), full);

  MomentConfig bad = cfg;
  bad.Y = 1.0;
  EXPECT_THROW(family_sum(a, bad), std::invalid_argument);
}

TEST(MollifiedRatio, TrivialMollifierFarRight) {
  MomentConfig cfg;
  cfg.X = 100;
  const MollifierSpec trivial(4.0);
  const cplx delta1{1.5, 0.0};
  const MomentRatio r = mollified_ratio(delta1, cfg, trivial);
  const double expected =
      family_sum(
          [](const GaussInt& d) {
            const CharacterSpec chr(d);
            return std::norm(dirichlet_series(build_coeff_table(chr, 300'000), cplx{2.0, 0.0}));
          },
          cfg) /
      family_sum([](const GaussInt&) { return 1.0; }, cfg);
  EXPECT_NEAR(r.ratio, expected, 1e-5 * expected);
  EXPECT_GT(r.family_size, 100u);
}

TEST(MollifiedRatio, MainTermComparison) {
  MomentConfig cfg;
  cfg.X = 1000;
  const MollifierSpec spec(cfg.M_length());
  // Away from the critical line the asymptotic main term is already close.
  const MomentRatio far = mollified_ratio(cplx{0.5, 0.0}, cfg, spec);
  std::printf("X = 1000, delta1 = 0.5: ratio %.5f, main term %.5f\n", far.ratio, far.prediction);
  EXPECT_LT(std::abs(far.ratio / far.prediction - 1.0), 0.25);
  // Near the critical line the comparison is reported only.
  cfg.X = 5000;
  const MollifierSpec spec5(cfg.M_length());
  const double l = std::log(cfg.X);
  const MomentRatio near = mollified_ratio(cplx{1.0 / l, 1.0 / l}, cfg, spec5);
  std::printf("X = 5000, delta1 = (1+i)/log X: ratio %.5f, main term %.5f, relative gap %.3f\n", near.ratio,
              near.prediction, std::abs(near.ratio / near.prediction - 1.0));
  EXPECT_TRUE(std::isfinite(near.ratio));
  EXPECT_GT(near.ratio, 0.0);
}

TEST(VFormula, AtLeastOneOnGrid) {
  const MollifierSpec spec(1.0);
  const double rho = 0.5 - 5e-10;
  for (const VOptions opt : {VOptions{}, VOptions{VReading::u_plus_iv, VNormalization::halved},
                             VOptions{VReading::x_plus_iv, VNormalization::moment}}) {
    for (int i = 0; i < 40; ++i) {
      for (int j = 0; j < 40; ++j) {
        const double u = -8.0 + 16.0 * i / 39.0, v = -8.0 + 16.0 * j / 39.0;
        EXPECT_GE(V_formula(u, v, rho, spec, opt), 1.0) << u << " " << v;
      }
    }
  }
}

TEST(VFormula, AgainstDirectIntegration) {
  const MollifierSpec spec(1.0);
  const double rho = 0.45;
  for (const auto& [u, v] : std::vector<std::pair<double, double>>{{-6.8, 0.3}, {-2.0, 4.0}, {0.7, -1.1}, {5.0, 4.36}}) {
    const double oracle = V_excess_oracle(u, v, rho, 0.64, 1.0);
    EXPECT_NEAR(V_excess(u, v, rho, spec), oracle, 1e-11 * std::max(1.0, oracle)) << u << " " << v;
    VOptions halved;
    halved.normalization = VNormalization::halved;
    EXPECT_NEAR(V_excess(u, v, rho, spec, halved), 0.5 * oracle, 1e-11 * std::max(1.0, oracle));
  }
}

TEST(VFormula, LimitsAtOriginAndInfinity) {
  const MollifierSpec spec(1.0);
  const double rho = 0.5;
  const double v00 = V_formula(0.0, 0.0, rho, spec);
  EXPECT_TRUE(std::isfinite(v00));
  for (const auto& [du, dv] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {0.0, 1.0}, {0.6, -0.8}}) {
    for (const double h : {1e-8, 1e-10}) {
      EXPECT_NEAR(V_formula(h * du, h * dv, rho, spec), v00, 1e-6) << du << " " << dv << " " << h;
    }
  }
  for (const double v : {0.0, 1.0, 4.36, 10.0}) EXPECT_LT(V_formula(50.0, v, rho, spec) - 1.0, 1e-4);
  EXPECT_LT(V_formula(50.0, 1.0, rho, spec) - 1.0, V_formula(20.0, 1.0, rho, spec) - 1.0);
}

TEST(Headline, DefaultsAndFixture) {
  const HeadlineResult r = headline_constant();
  std::printf("C = %.15f (J1 %.12f, J2 %.12f, error %.2e)\n", r.C, r.J1, r.J2, r.error_estimate);
  EXPECT_NEAR(r.S, 4.36332313871247, 1e-13);
  EXPECT_LE(r.C, 0.79);
  EXPECT_LE(r.error_estimate, 1e-4);
  EXPECT_FALSE(r.truncation_insufficient);
  EXPECT_TRUE(r.converged);
  // independent mpmath recomputation, J2 truncated at u = 100
  EXPECT_NEAR(r.C, 0.781733624002464, 1e-9);
}

TEST(Headline, AlternativeReadings) {
  HeadlineOptions halved;
  halved.v.normalization = VNormalization::halved;
  const HeadlineResult h = headline_constant(halved);
  EXPECT_NEAR(h.C, 0.675394571392118, 1e-9);
  EXPECT_NEAR(h.J1, 46.2350836312330, 1e-8);
  EXPECT_NEAR(h.J2, 89.0745297039209, 1e-8);
  HeadlineOptions literal;
  literal.v.reading = VReading::x_plus_iv;
  literal.v.normalization = VNormalization::halved;
  EXPECT_NEAR(headline_constant(literal).C, 0.765065294542609, 1e-8);
}

TEST(Headline, RefinementAndMonotonicity) {
  HeadlineOptions coarse;
  coarse.abs_tol = 1e-5;
  const HeadlineResult a = headline_constant(coarse);
  const HeadlineResult b = headline_constant();
  EXPECT_LE(std::abs(a.C - b.C), a.quadrature_error + b.quadrature_error + 1e-15);

  // C falls as R rises to 6.8, which sits at the minimum over R
  HeadlineOptions lo, hi;
  lo.R = 6.7;
  hi.R = 6.9;
  const double c_lo = headline_constant(lo).C, c_hi = headline_constant(hi).C;
  std::printf("C(6.7) = %.9f, C(6.8) = %.9f, C(6.9) = %.9f\n", c_lo, b.C, c_hi);
  EXPECT_GT(c_lo, b.C);
  EXPECT_LT(std::abs((c_hi - c_lo) / 0.2), 1e-4);

  HeadlineOptions shortcut;
  shortcut.u_max = 20.0;
  EXPECT_TRUE(headline_constant(shortcut).truncation_insufficient);
}
