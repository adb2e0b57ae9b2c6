#pragma once

// Adaptive Gauss-Kronrod (7, 15) quadrature for real or complex integrands,
// fixed composite rules, and integration along vertical lines Re(s) = c.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hecke {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  bool converged = true;
  long evaluations = 0;
};

/// The 15 Kronrod nodes on [-1, 1] with Kronrod and embedded Gauss weights.
struct KronrodRule {
  std::array<double, 15> nodes{};
  std::array<double, 15> kronrod{};
  std::array<double, 15> gauss{};

  static const KronrodRule& get() {
    static const KronrodRule rule = [] {
      using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
      using G = boost::math::quadrature::gauss<double, 7>;
      KronrodRule r;
      const auto& x = GK::abscissa();
      const auto& wk = GK::weights();
      const auto& wg = G::weights();
      r.nodes[7] = 0.0;
      r.kronrod[7] = wk[0];
      r.gauss[7] = wg[0];
      for (std::size_t i = 1; i < x.size(); ++i) {
        const double g = (i % 2 == 0) ? wg[i / 2] : 0.0;
        r.nodes[7 + i] = x[i];
        r.nodes[7 - i] = -x[i];
        r.kronrod[7 + i] = r.kronrod[7 - i] = wk[i];
        r.gauss[7 + i] = r.gauss[7 - i] = g;
      }
      return r;
    }();
    return rule;
  }
};

namespace detail {

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
auto kronrod_segment(F& f, double a, double b) {
  using T = decltype(f(a));
  const KronrodRule& rule = KronrodRule::get();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T k{}, g{};
  for (std::size_t i = 0; i < 15; ++i) {
    const T v = f(mid + half * rule.nodes[i]);
    k += rule.kronrod[i] * v;
    g += rule.gauss[i] * v;
  }
  k *= half;
  g *= half;
  const double err = std::max(std::abs(k - g), 1e-15 * std::abs(k));
  return Segment<T>{a, b, k, err};
}

}  // namespace detail

/// Globally adaptive (7, 15) Gauss-Kronrod on [a, b]; bisects the worst
/// segment until the summed error estimate meets max(abs_tol, rel_tol |I|).
template <class F>
auto integrate_adaptive(F f, double a, double b, double abs_tol, double rel_tol = 0.0,
                        int max_segments = 4000) -> QuadResult<decltype(f(a))> {
  using T = decltype(f(a));
  QuadResult<T> out;
  if (a == b) return out;
  std::priority_queue<detail::Segment<T>> heap;
  heap.push(detail::kronrod_segment(f, a, b));
  out.evaluations = 15;
  T total = heap.top().value;
  double error = heap.top().error;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= max_segments) {
      out.converged = false;
      break;
    }
    const detail::Segment<T> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::kronrod_segment(f, worst.a, mid);
    const auto right = detail::kronrod_segment(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of incremental updates.
  T sum{};
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = err;
  return out;
}

/// Adaptive integration over [a, b] split first into `panels` equal pieces,
/// each held to an equal share of the tolerance.
template <class F>
auto integrate_panels(F f, double a, double b, int panels, double abs_tol, double rel_tol = 0.0)
    -> QuadResult<decltype(f(a))> {
  using T = decltype(f(a));
  QuadResult<T> out;
  const double h = (b - a) / panels;
  for (int j = 0; j < panels; ++j) {
    const double lo = a + h * j;
    const double hi = (j + 1 == panels) ? b : a + h * (j + 1);
    const auto r = integrate_adaptive(f, lo, hi, abs_tol / panels, rel_tol);
    out.value += r.value;
    out.error += r.error;
    out.converged = out.converged && r.converged;
    out.evaluations += r.evaluations;
  }
  return out;
}

/// Contour and accuracy settings for integrals along Re(s) = c.
struct KernelConfig {
  double contour_offset = 1.0;
  double truncation_height = 40.0;
  double quadrature_step = 0.25;
  double target_abs_error = 1e-10;
};

/// (1 / 2 pi i) int_{(c)} f(s) ds truncated to |Im s| <= T. The neglected
/// tails are estimated as |f(c +- iT)| / decay_rate for integrands decaying
/// like exp(-decay_rate |t|); the default rate 1 is conservative for gamma factors.
template <class F>
QuadResult<std::complex<double>> vertical_line_integral(F f, const KernelConfig& cfg, double decay_rate = 1.0) {
  using cplx = std::complex<double>;
  const double c = cfg.contour_offset;
  const double T = cfg.truncation_height;
  if (!(T > 0) || !(cfg.quadrature_step > 0)) throw std::invalid_argument("hecke: bad vertical-line configuration");
  const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * T / cfg.quadrature_step)));
  auto g = [&](double t) -> cplx { return f(cplx{c, t}); };
  auto r = integrate_panels(g, -T, T, panels, 0.5 * cfg.target_abs_error * 2.0 * std::numbers::pi);
  const double tail = (std::abs(f(cplx{c, T})) + std::abs(f(cplx{c, -T}))) / decay_rate;
  QuadResult<cplx> out;
  out.value = r.value / (2.0 * std::numbers::pi);
  out.error = (r.error + tail) / (2.0 * std::numbers::pi);
  out.converged = r.converged;
  out.evaluations = r.evaluations + 2;
  return out;
}

}  // namespace hecke
