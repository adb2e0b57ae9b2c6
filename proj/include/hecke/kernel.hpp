#pragma once

// The kernel W_{delta,tau}(x) = (1 / 2 pi i) int_{(c)} Gamma_delta(s) x^{-s} 2s / (s^2 - tau^2) ds,
// by direct contour quadrature and through a cached geometric grid in x.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hecke/gamma.hpp"
#include "hecke/quadrature.hpp"

namespace hecke {

using cplx = std::complex<double>;

/// Default configuration: c = max(1, |Re tau| + 0.25), T = 40.
inline KernelConfig default_kernel_config(cplx tau = 0.0) {
  KernelConfig cfg;
  cfg.contour_offset = std::max(1.0, std::abs(tau.real()) + 0.25);
  return cfg;
}

inline cplx W_integrand(cplx s, double x, cplx delta, cplx tau) {
  return gamma_delta(s, delta) * std::exp(-s * std::log(x)) * (2.0 * s / (s * s - tau * tau));
}

/// Contour integral on Re(s) = cfg.contour_offset, which must exceed |Re tau|.
inline QuadResult<cplx> W_kernel_on_line(double x, cplx delta, cplx tau, const KernelConfig& cfg) {
  if (!(x > 0.0)) throw std::domain_error("hecke: W kernel needs x > 0");
  if (!(cfg.contour_offset > std::abs(tau.real()))) throw std::domain_error("hecke: contour must pass right of +-tau");
  auto f = [&](cplx s) { return W_integrand(s, x, delta, tau); };
  return vertical_line_integral(f, cfg, std::numbers::pi / 2);
}

/// Residues at s = +-tau: Gamma_delta(tau) x^{-tau} + Gamma_delta(-tau) x^{tau}
/// (2 Gamma_delta(0) when tau = 0). This is also the small-x main term.
inline cplx W_small_x_main(double x, cplx delta, cplx tau) {
  if (tau == 0.0) return 2.0 * gamma_delta(0.0, delta);
  const double lx = std::log(x);
  return gamma_delta(tau, delta) * std::exp(-tau * lx) + gamma_delta(-tau, delta) * std::exp(tau * lx);
}

namespace detail {

inline constexpr double kShiftedOffset = -0.25;

/// Precomputed composite Gauss-Kronrod nodes on one vertical line, so that
/// int_{(c)} Gamma_delta(s) x^{-s} 2s/(s^2 - tau^2) ds / 2 pi i = sum_j G_j e^{-s_j log x}.
class LineRule {
 public:
  LineRule() = default;
  LineRule(double c, cplx delta, cplx tau, const KernelConfig& cfg) {
    const KronrodRule& rule = KronrodRule::get();
    const double T = cfg.truncation_height;
    const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * T / cfg.quadrature_step)));
    const double h = 2.0 * T / panels;
    double largest = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = -T + h * (p + 0.5);
      for (std::size_t i = 0; i < 15; ++i) {
        const cplx s{c, mid + 0.5 * h * rule.nodes[i]};
        const cplx g = rule.kronrod[i] * 0.5 * h * gamma_delta(s, delta) * (2.0 * s / (s * s - tau * tau)) /
                       (2.0 * std::numbers::pi);
        nodes_.push_back(s);
        weights_.push_back(g);
        largest = std::max(largest, std::abs(g));
      }
    }
    // Nodes far up the line carry Gamma-decay weights far below double resolution.
    std::vector<cplx> n2, w2;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (std::abs(weights_[j]) > 1e-19 * largest) {
        n2.push_back(nodes_[j]);
        w2.push_back(weights_[j]);
      }
    }
    nodes_.swap(n2);
    weights_.swap(w2);
  }

  cplx operator()(double log_x) const {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) sum += weights_[j] * std::exp(-nodes_[j] * log_x);
    return sum;
  }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<cplx> nodes_;
  std::vector<cplx> weights_;
};

}  // namespace detail

/// W_{delta,tau}(x). For x >= 1 the contour sits at cfg.contour_offset; for
/// x < 1 it is moved to Re(s) = -1/4 past the poles at +-tau, whose residues
/// are added back, so that x^{-s} stays bounded on the path.
class WKernel {
 public:
  static constexpr double kGridMin = 1e-8;
  static constexpr double kGridMax = 2e3;
  static constexpr int kGridNodes = 4096;

  WKernel(cplx delta, cplx tau, KernelConfig cfg, bool build_grid = true) : delta_(delta), tau_(tau), cfg_(cfg) {
    if (!(cfg.contour_offset > std::abs(tau.real()))) throw std::domain_error("hecke: contour must pass right of +-tau");
    shifted_ok_ = std::abs(tau.real()) < -detail::kShiftedOffset && std::abs(delta.real()) < 0.25 - 1e-9;
    right_ = detail::LineRule(cfg.contour_offset, delta, tau, cfg);
    if (shifted_ok_) left_ = detail::LineRule(detail::kShiftedOffset, delta, tau, cfg);
    if (build_grid) {
      lo_ = std::log(kGridMin);
      step_ = (std::log(kGridMax) - lo_) / (kGridNodes - 1);
      grid_.resize(kGridNodes);
      for (int k = 0; k < kGridNodes; ++k) grid_[k] = direct(lo_ + step_ * k);
    }
  }

  cplx delta() const { return delta_; }
  cplx tau() const { return tau_; }

  /// Node-sum evaluation, no interpolation.
  cplx direct(double log_x) const {
    if (log_x >= 0.0 || !shifted_ok_) return right_(log_x);
    return W_small_x_main(std::exp(log_x), delta_, tau_) + left_(log_x);
  }

  /// Cubic interpolation on the grid inside [1e-8, 2e3], direct evaluation outside.
  cplx operator()(double x) const {
    if (!(x > 0.0)) throw std::domain_error("hecke: W kernel needs x > 0");
    const double u = std::log(x);
    if (grid_.empty() || x < kGridMin || x > kGridMax) return direct(u);
    const double pos = (u - lo_) / step_;
    int k = static_cast<int>(std::floor(pos)) - 1;
    k = std::clamp(k, 0, kGridNodes - 4);
    const double t = pos - k;  // in [0, 3]
    const double l0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    const double l1 = t * (t - 2) * (t - 3) / 2.0;
    const double l2 = -t * (t - 1) * (t - 3) / 2.0;
    const double l3 = t * (t - 1) * (t - 2) / 6.0;
    return l0 * grid_[k] + l1 * grid_[k + 1] + l2 * grid_[k + 2] + l3 * grid_[k + 3];
  }

 private:
  cplx delta_, tau_;
  KernelConfig cfg_;
  bool shifted_ok_ = false;
  detail::LineRule right_, left_;
  double lo_ = 0.0, step_ = 1.0;
  std::vector<cplx> grid_;
};

/// One-off W_{delta,tau}(x) without building a grid.
inline cplx W_kernel(double x, cplx delta, cplx tau, const KernelConfig& cfg) {
  return WKernel(delta, tau, cfg, false)(x);
}

inline cplx W_kernel(double x, cplx delta = 0.0, cplx tau = 0.0) {
  return W_kernel(x, delta, tau, default_kernel_config(tau));
}

}  // namespace hecke
