#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>

#include "hecke/poisson.hpp"

using namespace hecke;

TEST(Hankel, MatchesPolarDoubleIntegral) {
  const SmoothBump w(0.5);
  for (double t : {0.0, 0.7, 3.0, 11.5}) {
    // 4 int_0^{pi/2} int cos(2 pi t r sin(theta)) W(r^2) r dr dtheta
    auto inner = [&](double theta) {
      auto f = [&](double r) { return std::cos(2 * std::numbers::pi * t * r * std::sin(theta)) * w(r * r) * r; };
      return integrate_adaptive(f, 1.0, std::sqrt(2.0), 1e-14).value;
    };
    const double ref = 4.0 * integrate_adaptive(inner, 0.0, std::numbers::pi / 2, 1e-13).value;
    EXPECT_NEAR(hankel_transform(w, t), ref, 1e-11) << t;
  }
  // boost Bessel as a second J_0
  const double t = 5.25;
  auto f = [&](double u) { return w(u) * boost::math::cyl_bessel_j(0, 2 * std::numbers::pi * t * std::sqrt(u)); };
  EXPECT_NEAR(hankel_transform(w, t), std::numbers::pi * integrate_adaptive(f, 1.0, 2.0, 1e-14).value, 1e-12);
}

TEST(Hankel, DecaysForTheBroadBump) {
  const SmoothBump w(0.5);
  EXPECT_LE(std::abs(hankel_transform(w, 160.0)), 1e-9);
  EXPECT_LE(std::abs(hankel_transform(w, 320.0)), 1e-12);
}

TEST(Poisson, IdentityHolds) {
  const SmoothBump w(0.5);
  for (const GaussInt n : {GaussInt{1}, GaussInt{-1, 2}, GaussInt{-3}}) {
    for (double X : {50.0, 200.0}) {
      const PoissonResult r = poisson_check(n, X, w);
      EXPECT_LE(r.residual, 1e-6) << n << " X=" << X << " lhs=" << r.lhs << " rhs=" << r.rhs;
      EXPECT_GT(r.lhs_terms, 0);
    }
  }
}

TEST(Poisson, RejectsNonPrimaryModulus) {
  EXPECT_THROW(poisson_check(GaussInt{3}, 50.0, SmoothBump(0.5)), std::invalid_argument);
}
