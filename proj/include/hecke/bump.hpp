#pragma once

// Smooth bump functions supported on [1, 2] and their Mellin transforms.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "hecke/gamma.hpp"
#include "hecke/quadrature.hpp"

namespace hecke {

/// Truncated Taylor series c[0] + c[1] h + ... + c[N] h^N.
template <int N>
struct Jet {
  std::array<double, N + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double v) {
    Jet j;
    j.c[0] = v;
    if constexpr (N >= 1) j.c[1] = 1.0;
    return j;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (int i = 0; i <= N; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (int i = 0; i <= N; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Jet operator*(double s, Jet a) {
    for (double& v : a.c) v *= s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.c[0] == 0.0) throw std::domain_error("hecke: jet division by zero");
    Jet r;
    for (int k = 0; k <= N; ++k) {
      double v = a.c[k];
      for (int j = 1; j <= k; ++j) v -= b.c[j] * r.c[k - j];
      r.c[k] = v / b.c[0];
    }
    return r;
  }
  friend Jet exp(const Jet& a) {
    // r' = a' r on coefficients.
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k <= N; ++k) {
      double v = 0.0;
      for (int j = 1; j <= k; ++j) v += j * a.c[j] * r.c[k - j];
      r.c[k] = v / k;
    }
    return r;
  }
};

/// Phi(t) = psi((t - 1) / eps) psi((2 - t) / eps) with the smooth step
/// psi(y) = f(y) / (f(y) + f(1 - y)), f(y) = exp(-1/y) for y > 0.
/// Phi vanishes outside (1, 2) and equals 1 on [1 + eps, 2 - eps].
class SmoothBump {
 public:
  static constexpr int kMaxOrder = 4;

  explicit SmoothBump(double eps = 0.05) : eps_(eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("hecke: bump flatness must lie in (0, 1/2]");
    build_table();
  }

  double eps() const { return eps_; }
  double plateau_lo() const { return 1.0 + eps_; }
  double plateau_hi() const { return 2.0 - eps_; }

  double operator()(double t) const { return jet(t).c[0]; }

  /// Phi^{(order)}(t) for order <= 4.
  double derivative(double t, int order) const {
    if (order < 0 || order > kMaxOrder) throw std::out_of_range("hecke: bump derivative order must be 0..4");
    double fact = 1.0;
    for (int k = 2; k <= order; ++k) fact *= k;
    return jet(t).c[order] * fact;
  }

  Jet<kMaxOrder> jet(double t) const {
    using J = Jet<kMaxOrder>;
    if (t <= 1.0 || t >= 2.0) return J{};
    const J x = J::variable(t);
    J left = J::constant(1.0), right = J::constant(1.0);
    if (t < plateau_lo()) left = step((1.0 / eps_) * (x - J::constant(1.0)));
    if (t > plateau_hi()) right = step((1.0 / eps_) * (J::constant(2.0) - x));
    return left * right;
  }

  /// g_(n) = max_{j <= n} int_1^2 |Phi^{(j)}(t)| dt.
  double g_norm(int n) const {
    if (n < 0 || n > kMaxOrder) throw std::out_of_range("hecke: g_(n) is tabulated for n <= 4");
    return g_table_[n];
  }
  /// int_1^2 |Phi^{(j)}(t)| dt.
  double derivative_l1(int j) const { return l1_[j]; }

 private:
  static Jet<kMaxOrder> f(const Jet<kMaxOrder>& y) {
    if (y.c[0] <= 0.0) return {};
    return exp(-1.0 * (Jet<kMaxOrder>::constant(1.0) / y));
  }
  static Jet<kMaxOrder> step(const Jet<kMaxOrder>& y) {
    if (y.c[0] <= 0.0) return {};
    if (y.c[0] >= 1.0) return Jet<kMaxOrder>::constant(1.0);
    const auto a = f(y);
    return a / (a + f(Jet<kMaxOrder>::constant(1.0) - y));
  }

  void build_table() {
    for (int j = 0; j <= kMaxOrder; ++j) {
      auto g = [this, j](double t) { return std::abs(derivative(t, j)); };
      double v = integrate_adaptive(g, 1.0, plateau_lo(), 1e-13, 1e-12).value +
                 integrate_adaptive(g, plateau_hi(), 2.0, 1e-13, 1e-12).value;
      if (j == 0) v += plateau_hi() - plateau_lo();
      l1_[j] = v;
      g_table_[j] = j == 0 ? v : std::max(g_table_[j - 1], v);
    }
  }

  double eps_;
  std::array<double, kMaxOrder + 1> l1_{};
  std::array<double, kMaxOrder + 1> g_table_{};
};

/// g^(s) = int_1^2 g(t) t^{s-1} dt for g supported in [1, 2].
template <class G>
QuadResult<std::complex<double>> mellin_hat(G g, std::complex<double> s, double tol = 1e-12) {
  auto f = [&](double t) { return g(t) * std::exp((s - 1.0) * std::log(t)); };
  return integrate_adaptive(f, 1.0, 2.0, tol, 0.0);
}

/// Mellin transform of a SmoothBump: the plateau is integrated in closed form.
inline QuadResult<std::complex<double>> mellin_hat(const SmoothBump& phi, std::complex<double> s, double tol = 1e-12) {
  auto f = [&](double t) { return phi(t) * std::exp((s - 1.0) * std::log(t)); };
  auto left = integrate_adaptive(f, 1.0, phi.plateau_lo(), 0.5 * tol, 0.0);
  auto right = integrate_adaptive(f, phi.plateau_hi(), 2.0, 0.5 * tol, 0.0);
  const double a = std::log(phi.plateau_lo()), b = std::log(phi.plateau_hi());
  // int_a^b e^{s u} du
  const std::complex<double> plateau = std::exp(s * a) * (b - a) * detail::exprel(s * (b - a));
  QuadResult<std::complex<double>> out;
  out.value = left.value + plateau + right.value;
  out.error = left.error + right.error;
  out.converged = left.converged && right.converged;
  out.evaluations = left.evaluations + right.evaluations;
  return out;
}

}  // namespace hecke
