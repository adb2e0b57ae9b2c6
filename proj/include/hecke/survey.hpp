#pragma once

// Real zeros of L(sigma, chi_{(1+i)^5 d}) on (0, 1] by a sign scan of xi,
// Selberg's weighted zero count over a rectangle, and the family survey with
// checkpointing and CSV output.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hecke/artifact.hpp"
#include "hecke/lfunction.hpp"
#include "hecke/parallel.hpp"
#include "hecke/quadrature.hpp"

namespace hecke {

enum class ZeroStatus { clean, suspect, failed };

inline const char* to_string(ZeroStatus s) {
  switch (s) {
    case ZeroStatus::clean: return "clean";
    case ZeroStatus::suspect: return "suspect";
    case ZeroStatus::failed: return "failed";
  }
  return "?";
}

inline const char* to_string(EnumerationMode m) { return m == EnumerationMode::primary ? "primary" : "all_associates"; }

struct ZeroLocation {
  double sigma = 0.0;
  double width = 0.0;
};

struct SurveyRecord {
  GaussInt d;
  i64 norm = 0;
  int num_real_zeros = 0;
  double min_abs_xi = 0.0;
  bool suspect_flag = false;
  std::vector<ZeroLocation> zero_locations;
  ZeroStatus status = ZeroStatus::clean;
  double xi_at_one = 0.0;
  std::string error;

  bool nonvanishing() const { return status == ZeroStatus::clean && num_real_zeros == 0; }
};

struct ScanOptions {
  int grid_points = 512;
  double refine_tol = 1e-10;
  double suspect_rel = 1e-6;  // |xi| below this times max |xi| without a sign change is suspect
  double probe_rel = 1e-3;    // local minima below this are re-scanned on a denser grid
  int probe_points = 64;
  AfeOptions afe;
};

namespace detail {

/// Bisection on a sign change of g in [a, b] down to width tol.
template <class G>
ZeroLocation bisect(const G& g, double a, double b, double ga, double tol) {
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    if (gm == 0.0) return {m, 0.0};
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return {0.5 * (a + b), b - a};
}

/// Golden-section minimum of |g| on [a, b].
template <class G>
double golden_min_abs(const G& g, double a, double b, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = std::abs(g(c)), fd = std::abs(g(d));
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = std::abs(g(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = std::abs(g(d));
    }
  }
  return std::min(fc, fd);
}

}  // namespace detail

struct SignScan {
  std::vector<ZeroLocation> zeros;
  double min_abs = 0.0;
  double scale = 0.0;  // max |g| on the grid
  bool suspect = false;
};

/// Scans g on a uniform grid over [0, 1], bisects sign changes and re-examines
/// small local minima of |g| on a denser grid. With `symmetric` set, only
/// sigma >= 1/2 is evaluated and the rest mirrored from g(sigma) = g(1 - sigma).
template <class G>
SignScan scan_sign_changes(const G& g, const ScanOptions& opt, bool symmetric) {
  if (opt.grid_points < 64) throw std::invalid_argument("hecke: grid_points must be at least 64");
  SignScan out;
  const int N = opt.grid_points;
  const auto sigma_of = [N](int k) { return static_cast<double>(k) / N; };
  std::vector<double> v(N + 1);
  const int first = symmetric ? (N + 1) / 2 : 0;
  for (int k = first; k <= N; ++k) v[k] = g(sigma_of(k));
  for (int k = 0; k < first; ++k) v[k] = v[N - k];

  for (const double x : v) out.scale = std::max(out.scale, std::abs(x));
  if (!(out.scale > 0.0) || !std::isfinite(out.scale)) throw std::runtime_error("hecke: function vanishes or is not finite on the grid");
  out.min_abs = std::abs(v[0]);
  for (const double x : v) out.min_abs = std::min(out.min_abs, std::abs(x));

  // zeros in (0, 1]: sign changes between grid points and exact grid zeros
  for (int k = 0; k < N; ++k) {
    if (v[k + 1] == 0.0) {
      out.zeros.push_back({sigma_of(k + 1), 0.0});
    } else if (v[k] != 0.0 && (v[k] < 0.0) != (v[k + 1] < 0.0)) {
      out.zeros.push_back(detail::bisect(g, sigma_of(k), sigma_of(k + 1), v[k], opt.refine_tol));
    }
  }

  // Local minima without a sign change: look for a close pair of zeros, else flag.
  for (int k = 1; k < N; ++k) {
    const double a = std::abs(v[k]);
    if (!(a <= std::abs(v[k - 1]) && a <= std::abs(v[k + 1]))) continue;
    if (v[k] == 0.0 || (v[k - 1] < 0.0) != (v[k] < 0.0) || (v[k] < 0.0) != (v[k + 1] < 0.0)) continue;
    if (a >= opt.probe_rel * out.scale) continue;
    const double lo = sigma_of(k - 1), hi = sigma_of(k + 1);
    const int n = opt.probe_points;
    double prev = v[k - 1];
    bool found = false;
    for (int j = 1; j <= n; ++j) {
      const double s = lo + (hi - lo) * j / n;
      const double cur = j == n ? v[k + 1] : g(s);
      if (cur != 0.0 && prev != 0.0 && (cur < 0.0) != (prev < 0.0)) {
        out.zeros.push_back(detail::bisect(g, lo + (hi - lo) * (j - 1) / n, s, prev, opt.refine_tol));
        found = true;
      } else if (cur == 0.0 && j < n) {
        out.zeros.push_back({s, 0.0});
        found = true;
      }
      prev = cur;
    }
    if (found) continue;
    const double m = detail::golden_min_abs(g, lo, hi, opt.refine_tol);
    out.min_abs = std::min(out.min_abs, m);
    if (m < opt.suspect_rel * out.scale) out.suspect = true;
  }
  std::sort(out.zeros.begin(), out.zeros.end(), [](const ZeroLocation& a, const ZeroLocation& b) { return a.sigma < b.sigma; });
  return out;
}

/// Real zeros of L(sigma, chi) on (0, 1] from the sign pattern of xi, which
/// differs from L there by positive factors.
inline SurveyRecord scan_real_zeros(const CharacterSpec& spec, const ScanOptions& opt = {}) {
  if (opt.grid_points < 64) throw std::invalid_argument("hecke: grid_points must be at least 64");
  SurveyRecord rec;
  rec.d = spec.d;
  rec.norm = norm(spec.d);
  try {
    const CoeffTable table = build_coeff_table(spec, afe_cutoff(spec, opt.afe));
    const auto xi = [&](double sigma) { return xi_real(table, sigma, opt.afe); };
    const SignScan scan = scan_sign_changes(xi, opt, true);
    rec.xi_at_one = xi(1.0);
    rec.zero_locations = scan.zeros;
    rec.num_real_zeros = static_cast<int>(scan.zeros.size());
    rec.min_abs_xi = scan.min_abs;
    rec.suspect_flag = scan.suspect;
    rec.status = scan.suspect ? ZeroStatus::suspect : ZeroStatus::clean;
  } catch (const std::exception& e) {
    rec.status = ZeroStatus::failed;
    rec.error = e.what();
  }
  return rec;
}

/// Rectangle with vertices W0 +- iH, W1 +- iH; the target function must not
/// vanish on Re(z) >= W.
struct BoxSpec {
  double W0 = 0.0;
  double W1 = 1.0;
  double H = 1.0;
  double W = 0.5;

  void validate() const {
    if (!(H > 0.0)) throw std::invalid_argument("hecke: box height must be positive");
    if (!(W0 < W && W < W1)) throw std::invalid_argument("hecke: box needs W0 < W < W1");
  }
};

struct BoxCountResult {
  /// 4H sum over zeros beta + i gamma in the box of cos(pi gamma / 2H) sinh(pi (beta - W0) / 2H).
  double weighted_zero_sum = 0.0;
  double left_edge = 0.0;    // int cos(pi t / 2H) log|f(W0 + it)| dt
  double horizontal = 0.0;   // int sinh(pi (a - W0) / 2H) log|f(a + iH) f(a - iH)| da
  double right_edge = 0.0;   // Re int cos(pi (W1 - W0 + it) / 2iH) log f(W1 + it) dt
  double error_estimate = 0.0;
  int arg_track_steps = 0;
};

namespace detail {

/// arg f along t -> f(x + it), continued so that consecutive samples differ by
/// less than pi/4; steps halve on violation.
class ArgTrack {
 public:
  template <class F>
  ArgTrack(F& f, double x, double t0, double t1, int base_steps = 64) {
    const double h_max = (t1 - t0) / base_steps;
    const double h_min = h_max * 1e-9;
    double t = t0, h = h_max;
    double arg = std::arg(f(std::complex<double>(x, t)));
    ts_.push_back(t);
    args_.push_back(arg);
    while (t < t1) {
      const double tn = std::min(t1, t + h);
      const double a = std::arg(f(std::complex<double>(x, tn)));
      const double step = std::remainder(a - arg, 2.0 * std::numbers::pi);
      if (std::abs(step) > std::numbers::pi / 4.0) {
        h *= 0.5;
        if (h < h_min) throw std::runtime_error("hecke: branch tracking of log f failed to stay continuous");
        continue;
      }
      t = tn;
      arg += step;
      ts_.push_back(t);
      args_.push_back(arg);
      h = std::min(h_max, 2.0 * h);
    }
  }

  /// The continued argument at t given the principal value there.
  double unwrap(double t, double principal) const {
    const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t j = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - ts_.begin(), 1, ts_.size() - 1));
    const double w = (t - ts_[j - 1]) / (ts_[j] - ts_[j - 1]);
    const double guess = args_[j - 1] + w * (args_[j] - args_[j - 1]);
    return principal + 2.0 * std::numbers::pi * std::round((guess - principal) / (2.0 * std::numbers::pi));
  }

  int steps() const { return static_cast<int>(ts_.size()) - 1; }

 private:
  std::vector<double> ts_, args_;
};

}  // namespace detail

/// Right side of Selberg's lemma for f on the box:
///   4H sum cos(pi gamma/2H) sinh(pi(beta - W0)/2H)
///     = int_{-H}^{H} cos(pi t/2H) log|f(W0 + it)| dt
///       + int_{W0}^{W1} sinh(pi(a - W0)/2H) log|f(a + iH) f(a - iH)| da
///       - Re int_{-H}^{H} cos(pi(W1 - W0 + it)/(2iH)) log f(W1 + it) dt.
template <class F>
BoxCountResult selberg_box_count(F f, const BoxSpec& box, double quad_tol = 1e-10) {
  box.validate();
  using C = std::complex<double>;
  const double W0 = box.W0, W1 = box.W1, H = box.H;
  const double k = std::numbers::pi / (2.0 * H);
  const auto log_abs = [&](C z) {
    const C v = f(z);
    if (v == 0.0) throw std::domain_error("hecke: f vanishes on the box boundary");
    return std::log(std::abs(v));
  };
  const auto check = [](const auto& r) {
    if (!r.converged) throw std::runtime_error("hecke: box-count quadrature did not converge");
    return r;
  };
  // the edge integrals can be far larger than their combination; stop at rounding level
  constexpr double kRel = 1e-13;
  BoxCountResult out;
  const auto left = check(integrate_adaptive([&](double t) { return std::cos(k * t) * log_abs(C(W0, t)); }, -H, H,
                                             quad_tol / 3.0, kRel));
  const auto horiz = check(integrate_adaptive(
      [&](double a) { return std::sinh(k * (a - W0)) * (log_abs(C(a, H)) + log_abs(C(a, -H))); }, W0, W1,
      quad_tol / 3.0, kRel));
  const detail::ArgTrack track(f, W1, -H, H);
  const auto right = check(integrate_adaptive(
      [&](double t) {
        const C v = f(C(W1, t));
        const C logf(std::log(std::abs(v)), track.unwrap(t, std::arg(v)));
        return (std::cos(C(W1 - W0, t) / C(0.0, 2.0 * H) * std::numbers::pi) * logf).real();
      },
      -H, H, quad_tol / 3.0, kRel));
  out.left_edge = left.value;
  out.horizontal = horiz.value;
  out.right_edge = right.value;
  out.weighted_zero_sum = left.value + horiz.value - right.value;
  out.error_estimate = left.error + horiz.error + right.error;
  out.arg_track_steps = track.steps();
  return out;
}

/// Box from the moment parameters: W0 = 1/2 - R/log X, H = S/log X,
/// W1 = 1 + 3 log log M / log M, W halfway between 1 and W1.
inline BoxSpec paper_box(double X, double R, double S, double M) {
  const double lx = std::log(X), lm = std::log(M);
  BoxSpec b;
  b.W0 = 0.5 - R / lx;
  b.H = S / lx;
  b.W1 = 1.0 + 3.0 * std::log(lm) / lm;
  b.W = 0.5 * (1.0 + b.W1);
  return b;
}

/// 2 pi / (3 zeta_K(2)) for all associates; a quarter of that for primary d.
inline double family_density(EnumerationMode mode) {
  const double all = 2.0 * std::numbers::pi / (3.0 * zeta_K(2.0).real());
  return mode == EnumerationMode::primary ? all / 4.0 : all;
}

struct SurveyConfig {
  ScanOptions scan;
  int jobs = 0;  // 0: HECKE_JOBS or hardware concurrency
  bool include_unit = false;  // scan the unit d (conductor 2^5)
  bool dry_run = false;       // enumerate and count only
  i64 min_norm = 0;           // survey N(d) > min_norm
  int checkpoint_every = 64;  // records per batch; batches end on a norm boundary
  std::string out_csv;        // empty: no CSV
  std::string checkpoint;     // empty: no checkpoint
  i64 max_norm_ceiling = 100'000;
};

struct SurveyCounts {
  long total = 0;
  long nonvanishing = 0;
  long with_zeros = 0;
  long suspect = 0;
  long failed = 0;

  void add(const SurveyRecord& r) {
    ++total;
    if (r.nonvanishing()) ++nonvanishing;
    if (r.num_real_zeros > 0) ++with_zeros;
    if (r.status == ZeroStatus::suspect) ++suspect;
    if (r.status == ZeroStatus::failed) ++failed;
  }
  SurveyCounts& operator+=(const SurveyCounts& o) {
    total += o.total;
    nonvanishing += o.nonvanishing;
    with_zeros += o.with_zeros;
    suspect += o.suspect;
    failed += o.failed;
    return *this;
  }
  friend bool operator==(const SurveyCounts&, const SurveyCounts&) = default;
};

struct SurveySummary {
  SurveyCounts counts;
  i64 max_norm = 0;
  EnumerationMode mode = EnumerationMode::primary;
  double proportion = 0.0;        // nonvanishing / total
  double density_ratio = 0.0;     // total / max_norm
  double expected_density = 0.0;  // asymptotic count / x
  std::string config_hash;
};

struct SurveyResult {
  SurveySummary summary;
  std::vector<SurveyRecord> records;  // only the records scanned in this run
  bool resumed = false;
};

inline std::string survey_config_hash(i64 max_norm, EnumerationMode mode, const SurveyConfig& cfg) {
  return config_hash({{"command", "survey"},
                      {"max_norm", std::to_string(max_norm)},
                      {"min_norm", std::to_string(cfg.min_norm)},
                      {"mode", to_string(mode)},
                      {"grid_points", std::to_string(cfg.scan.grid_points)},
                      {"refine_tol", format_double(cfg.scan.refine_tol)},
                      {"suspect_rel", format_double(cfg.scan.suspect_rel)},
                      {"probe_rel", format_double(cfg.scan.probe_rel)},
                      {"probe_points", std::to_string(cfg.scan.probe_points)},
                      {"eta", format_double(cfg.scan.afe.eta)},
                      {"headroom", format_double(cfg.scan.afe.headroom)},
                      {"include_unit", cfg.include_unit ? "1" : "0"},
                      {"dry_run", cfg.dry_run ? "1" : "0"}});
}

inline const char* kSurveyCsvHeader = "d_re,d_im,norm,num_real_zeros,min_abs_xi,status";

inline std::string csv_row(const SurveyRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%lld,%lld,%lld,%d,%.6e,%s", static_cast<long long>(r.d.re),
                static_cast<long long>(r.d.im), static_cast<long long>(r.norm), r.num_real_zeros, r.min_abs_xi,
                to_string(r.status));
  return buf;
}

namespace detail {

inline nlohmann::json counts_json(const SurveyCounts& c) {
  return {{"total", c.total},
          {"nonvanishing", c.nonvanishing},
          {"with_zeros", c.with_zeros},
          {"suspect", c.suspect},
          {"failed", c.failed}};
}

inline SurveyCounts counts_from_json(const nlohmann::json& j) {
  SurveyCounts c;
  c.total = j.at("total").get<long>();
  c.nonvanishing = j.at("nonvanishing").get<long>();
  c.with_zeros = j.at("with_zeros").get<long>();
  c.suspect = j.at("suspect").get<long>();
  c.failed = j.at("failed").get<long>();
  return c;
}

/// Keeps the data rows of a partial CSV with norm <= last_norm.
inline std::string trim_partial_csv(const std::string& text, i64 last_norm) {
  std::istringstream in(text);
  std::string line, out;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      if (line != kSurveyCsvHeader) throw std::runtime_error("hecke: partial survey CSV has an unexpected header");
      out += line + "\n";
      header = false;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    // third field is the norm
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    if (c3 == std::string::npos) throw std::runtime_error("hecke: malformed survey CSV row");
    if (std::stoll(line.substr(c2 + 1, c3 - c2 - 1)) <= last_norm) out += line + "\n";
  }
  if (header) out = std::string(kSurveyCsvHeader) + "\n";
  return out;
}

}  // namespace detail

/// Scans every odd square-free d with min_norm < N(d) <= max_norm, in
/// enumeration order. Records are computed in parallel batches and merged in
/// order; after each batch the partial CSV and the checkpoint are rewritten.
/// An existing checkpoint with the same configuration hash resumes the run;
/// the checkpoint is removed once the run completes.
inline SurveyResult run_survey(i64 max_norm, EnumerationMode mode, const SurveyConfig& cfg,
                               const std::function<void(const SurveyRecord&)>& on_record = {}) {
  if (max_norm < 1) throw std::invalid_argument("hecke: max_norm must be >= 1");
  if (max_norm > cfg.max_norm_ceiling && !cfg.dry_run)
    throw std::invalid_argument("hecke: max_norm exceeds the configured ceiling");
  if (cfg.checkpoint_every < 1) throw std::invalid_argument("hecke: checkpoint interval must be positive");
  SurveyResult result;
  SurveySummary& sum = result.summary;
  sum.max_norm = max_norm;
  sum.mode = mode;
  sum.expected_density = family_density(mode);
  sum.config_hash = survey_config_hash(max_norm, mode, cfg);

  std::vector<GaussInt> ds;
  for (const GaussInt& d : enumerate_odd_squarefree(max_norm, mode)) {
    if (norm(d) <= cfg.min_norm) continue;
    if (!cfg.include_unit && is_unit(d)) continue;
    ds.push_back(d);
  }
  if (cfg.dry_run) {
    sum.counts.total = static_cast<long>(ds.size());
    sum.density_ratio = static_cast<double>(ds.size()) / static_cast<double>(max_norm);
    return result;
  }

  const std::filesystem::path partial = cfg.out_csv.empty() ? std::string{} : cfg.out_csv + ".partial";
  std::string csv = std::string(kSurveyCsvHeader) + "\n";
  i64 last_norm = cfg.min_norm;
  if (!cfg.checkpoint.empty() && std::filesystem::exists(cfg.checkpoint)) {
    const auto j = nlohmann::json::parse(read_file(cfg.checkpoint));
    if (j.at("config_hash").get<std::string>() != sum.config_hash)
      throw std::invalid_argument("hecke: checkpoint belongs to a different configuration");
    last_norm = j.at("last_norm").get<i64>();
    sum.counts = detail::counts_from_json(j.at("partial_counts"));
    if (!partial.empty()) {
      if (!std::filesystem::exists(partial)) throw std::runtime_error("hecke: checkpoint found but the partial CSV is missing");
      csv = detail::trim_partial_csv(read_file(partial), last_norm);
    }
    result.resumed = true;
  }

  const int jobs = resolve_jobs(cfg.jobs);
  std::size_t i = static_cast<std::size_t>(
      std::upper_bound(ds.begin(), ds.end(), last_norm, [](i64 n, const GaussInt& d) { return n < norm(d); }) -
      ds.begin());
  while (i < ds.size()) {
    std::size_t j = std::min(ds.size(), i + static_cast<std::size_t>(cfg.checkpoint_every));
    while (j < ds.size() && norm(ds[j]) == norm(ds[j - 1])) ++j;
    const auto batch = parallel_map<SurveyRecord>(j - i, jobs, [&](std::size_t k) {
      return scan_real_zeros(CharacterSpec(ds[i + k]), cfg.scan);
    });
    for (const SurveyRecord& r : batch) {
      sum.counts.add(r);
      csv += csv_row(r) + "\n";
      if (on_record) on_record(r);
      result.records.push_back(r);
    }
    last_norm = norm(ds[j - 1]);
    i = j;
    if (!partial.empty()) atomic_write(partial, csv);
    if (!cfg.checkpoint.empty()) {
      const nlohmann::json cp = {{"last_norm", last_norm},
                                 {"partial_counts", detail::counts_json(sum.counts)},
                                 {"config_hash", sum.config_hash}};
      atomic_write(cfg.checkpoint, cp.dump(2) + "\n");
    }
  }
  if (!cfg.out_csv.empty()) {
    csv += "# config_hash=" + sum.config_hash + ",version=" + std::string(kVersion) + "\n";
    atomic_write(cfg.out_csv, csv);
    std::filesystem::remove(partial);
  }
  // the run is complete; nothing left to resume
  if (!cfg.checkpoint.empty()) std::filesystem::remove(cfg.checkpoint);
  sum.proportion = sum.counts.total == 0 ? 0.0
                                         : static_cast<double>(sum.counts.nonvanishing) / static_cast<double>(sum.counts.total);
  sum.density_ratio = static_cast<double>(sum.counts.total) / static_cast<double>(max_norm);
  return result;
}

/// Number of odd square-free d with N(d) <= x, and that count over x.
struct DensityResult {
  long count = 0;
  double ratio = 0.0;
  double expected = 0.0;
};

inline DensityResult density_count(i64 max_norm, EnumerationMode mode) {
  DensityResult r;
  r.count = static_cast<long>(enumerate_odd_squarefree(max_norm, mode).size());
  r.ratio = static_cast<double>(r.count) / static_cast<double>(max_norm);
  r.expected = family_density(mode);
  return r;
}

}  // namespace hecke
