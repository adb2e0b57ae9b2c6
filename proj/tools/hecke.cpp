// Command-line front end: one subcommand per computation, CSV for tables,
// JSON for reports. Exit status 0 ok, 1 verification failure, 2 usage,
// 3 numeric or resource failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hecke/artifact.hpp"
#include "hecke/mollifier.hpp"
#include "hecke/parallel.hpp"
#include "hecke/survey.hpp"
#include "hecke/verify.hpp"
#include "parse.hpp"

using namespace hecke;
using hecke::cli::parse_complex;
using hecke::cli::parse_gauss_int;
using hecke::cli::parse_mode;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// options that name files or control presentation, not the computation
const std::set<std::string> kUnhashed = {"help", "jobs", "out", "checkpoint", "config", "json"};

std::string normalized(const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (!v.empty() && end == v.c_str() + v.size()) return format_double(x);
  return v;
}

/// Digest over every semantic option of the chosen subcommand, given or defaulted.
std::string subcommand_hash(const CLI::App& sub) {
  std::map<std::string, std::string> fields{{"command", sub.get_name()}};
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (kUnhashed.contains(name)) continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + normalized(r);
    } else {
      value = normalized(opt->get_default_str());
    }
    fields[name] = value;
  }
  return config_hash(fields);
}

std::string trailer(const std::string& hash) {
  return "# config_hash=" + hash + ",version=" + std::string(kVersion) + "\n";
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    atomic_write(out, text);
  }
}

/// Applies `key = value` lines to the options of `sub` that the command line
/// left unset. Lines under a `[name]` section apply only to that subcommand.
/// HECKE_JOBS takes precedence over a jobs line.
void apply_config_file(const std::string& path, CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  for (const CLI::ConfigItem& item : items) {
    if (!item.parents.empty() && item.parents.front() != sub.get_name()) continue;
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw UsageError("config file: unknown key '" + item.name + "' for " + sub.get_name());
    if (opt->count() > 0) continue;
    if (key == "jobs" && std::getenv("HECKE_JOBS") != nullptr) continue;
    opt->add_result(item.inputs);
    try {
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw UsageError(std::string("config file: ") + e.what());
    }
  }
}

int report(const std::exception& e, int code) {
  const std::string msg = e.what();
  std::fprintf(stderr, "%s%s\n", msg.starts_with("hecke:") ? "" : "hecke: ", msg.c_str());
  return code;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// ---------------------------------------------------------------- survey

struct SurveyArgs {
  long long max_norm = 0;
  std::string mode = "primary";
  int jobs = 0;
  std::string out, checkpoint;
  int grid = 512;
  long long min_norm = 0;
  int checkpoint_every = 64;
  bool include_unit = false;
  bool dry_run = false;
  long long ceiling = 100'000;
};

int run_survey_command(const SurveyArgs& a) {
  if (a.max_norm <= 0) throw UsageError("survey: --max-norm is required");
  SurveyConfig cfg;
  cfg.scan.grid_points = a.grid;
  cfg.jobs = resolve_jobs(a.jobs);
  cfg.include_unit = a.include_unit;
  cfg.dry_run = a.dry_run;
  cfg.min_norm = a.min_norm;
  cfg.checkpoint_every = a.checkpoint_every;
  cfg.out_csv = a.out;
  cfg.checkpoint = a.checkpoint;
  cfg.max_norm_ceiling = a.ceiling;
  const SurveyResult r = run_survey(a.max_norm, parse_mode(a.mode), cfg);
  const SurveySummary& s = r.summary;
  std::printf("mode=%s max_norm=%lld total=%ld nonvanishing=%ld with_zeros=%ld suspect=%ld failed=%ld "
              "proportion=%.6f density=%.6f expected_density=%.6f resumed=%d config_hash=%s\n",
              to_string(s.mode), a.max_norm, s.counts.total, s.counts.nonvanishing, s.counts.with_zeros,
              s.counts.suspect, s.counts.failed, s.proportion, s.density_ratio, s.expected_density,
              r.resumed ? 1 : 0, s.config_hash.c_str());
  return s.counts.failed > 0 ? 3 : 0;
}

// ---------------------------------------------------------------- zeros

struct ZerosArgs {
  std::string d;
  int grid = 512;
  bool json = false;
  std::string out;
};

int run_zeros(const ZerosArgs& a, const std::string& hash) {
  if (a.d.empty()) throw UsageError("zeros: --d is required");
  ScanOptions opt;
  opt.grid_points = a.grid;
  const SurveyRecord r = scan_real_zeros(CharacterSpec(parse_gauss_int(a.d)), opt);
  nlohmann::json zs = nlohmann::json::array();
  for (const auto& z : r.zero_locations) zs.push_back({{"sigma", z.sigma}, {"width", z.width}});
  if (a.json) {
    const nlohmann::json j = {{"d", r.d.str()},          {"norm", r.norm},
                              {"num_real_zeros", r.num_real_zeros}, {"zeros", zs},
                              {"min_abs_xi", r.min_abs_xi}, {"xi_at_one", r.xi_at_one},
                              {"status", to_string(r.status)},      {"error", r.error},
                              {"config_hash", hash},        {"version", kVersion}};
    emit(j.dump(2) + "\n", a.out);
  } else {
    std::string text = "d=" + r.d.str() + " norm=" + std::to_string(r.norm) +
                       " num_real_zeros=" + std::to_string(r.num_real_zeros) + " min_abs_xi=" +
                       fmt("%.10e", r.min_abs_xi) + " xi(1)=" + fmt("%.15g", r.xi_at_one) + " status=" +
                       to_string(r.status) + "\n";
    for (const auto& z : r.zero_locations)
      text += "zero sigma=" + fmt("%.12f", z.sigma) + " width=" + fmt("%.1e", z.width) + "\n";
    if (!r.error.empty()) text += "error: " + r.error + "\n";
    emit(text, a.out);
  }
  return r.status == ZeroStatus::failed ? 3 : 0;
}

// ---------------------------------------------------------------- lfun

struct LfunArgs {
  std::string d;
  double sigma = 0.5;
  int grid = 0;
  double eta = 1.0;
  std::string out;
};

int run_lfun(const LfunArgs& a, const std::string& hash) {
  if (a.d.empty()) throw UsageError("lfun: --d is required");
  if (a.grid < 0) throw UsageError("lfun: --grid must be non-negative");
  const CharacterSpec chr(parse_gauss_int(a.d));
  AfeOptions opt;
  opt.eta = a.eta;
  const CoeffTable table = build_coeff_table(chr, afe_cutoff(chr, opt));
  std::string text = "sigma,L,xi\n";
  const auto row = [&](double s) {
    const LValueResult v = lfunction_eval(table, s, opt);
    text += format_double(s) + "," + format_double(v.L.real()) + "," + format_double(v.xi.real()) + "\n";
  };
  if (a.grid == 0) {
    row(a.sigma);
  } else {
    for (int k = 0; k <= a.grid; ++k) row(static_cast<double>(k) / a.grid);
  }
  emit(text + trailer(hash), a.out);
  return 0;
}

// ---------------------------------------------------------------- gauss-sum

struct GaussArgs {
  std::string r, n;
};

std::string surd_str(const SurdValue& v) {
  std::string s = std::to_string(v.rational);
  if (v.surd_coefficient != 0)
    s += (v.surd_coefficient < 0 ? " - " : " + ") + std::to_string(std::llabs(v.surd_coefficient)) + " sqrt(" +
         std::to_string(v.radicand) + ")";
  return s;
}

int run_gauss(const GaussArgs& a) {
  if (a.r.empty() || a.n.empty()) throw UsageError("gauss-sum: --r and --n are required");
  const GaussInt r = parse_gauss_int(a.r), n = parse_gauss_int(a.n);
  const GaussSumValue direct = gauss_sum_direct(r, n), closed = gauss_sum_closed(r, n);
  std::printf("direct = %.15g %+.15gi\n", direct.numeric.real(), direct.numeric.imag());
  std::printf("closed = %.15g %+.15gi", closed.numeric.real(), closed.numeric.imag());
  if (closed.exact) std::printf("  (%s)", surd_str(*closed.exact).c_str());
  std::printf("\ndifference = %.3e\n", std::abs(direct.numeric - closed.numeric));
  return 0;
}

// ---------------------------------------------------------------- density

struct DensityArgs {
  long long max_norm = 0;
  std::string mode = "primary";
};

int run_density(const DensityArgs& a) {
  if (a.max_norm <= 0) throw UsageError("density: --max-norm is required");
  const DensityResult r = density_count(a.max_norm, parse_mode(a.mode));
  std::printf("count=%ld ratio=%.6f expected=%.6f\n", r.count, r.ratio, r.expected);
  return 0;
}

// ---------------------------------------------------------------- constant

struct ConstantArgs {
  double b = 0.64, R = 6.8, S = 0.0, kappa = 1e-10, u_max = 100.0, tol = 1e-10;
  std::string reading = "u+iv", normalization = "moment";
  bool json = false;
};

int run_constant(const ConstantArgs& a, const std::string& hash) {
  HeadlineOptions opt;
  opt.b = a.b;
  opt.R = a.R;
  opt.S = a.S;
  opt.kappa = a.kappa;
  opt.u_max = a.u_max;
  opt.abs_tol = a.tol;
  if (a.reading == "u+iv") {
    opt.v.reading = VReading::u_plus_iv;
  } else if (a.reading == "x+iv") {
    opt.v.reading = VReading::x_plus_iv;
  } else {
    throw UsageError("constant: --reading must be u+iv or x+iv");
  }
  if (a.normalization == "moment") {
    opt.v.normalization = VNormalization::moment;
  } else if (a.normalization == "halved") {
    opt.v.normalization = VNormalization::halved;
  } else {
    throw UsageError("constant: --normalization must be moment or halved");
  }
  const HeadlineResult h = headline_constant(opt);
  if (a.json) {
    const nlohmann::json j = {{"C", h.C},
                              {"err", h.error_estimate},
                              {"J1", h.J1},
                              {"J2", h.J2},
                              {"S", h.S},
                              {"rho", h.rho},
                              {"quadrature_error", h.quadrature_error},
                              {"tail_estimate", h.tail_estimate},
                              {"converged", h.converged},
                              {"truncation_insufficient", h.truncation_insufficient},
                              {"config_hash", hash},
                              {"version", kVersion}};
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("C=%.15f err=%.3e\n", h.C, h.error_estimate);
  }
  if (!h.converged || h.truncation_insufficient) {
    std::fprintf(stderr, "hecke: %s\n",
                 h.converged ? "truncation at u_max leaves a tail above tolerance" : "quadrature did not converge");
    return 3;
  }
  return 0;
}

// ---------------------------------------------------------------- moments

struct MomentsArgs {
  double X = 5000.0, Y = 0.0, R = 6.8, b = 0.64, kappa = 1e-10, phi_eps = 0.05;
  std::string delta1 = "0.5,0";
  std::string mode = "all_associates";
  int jobs = 0;
};

int run_moments(const MomentsArgs& a) {
  MomentConfig cfg;
  cfg.X = a.X;
  cfg.Y = a.Y;
  cfg.R = a.R;
  cfg.kappa = a.kappa;
  cfg.Phi = SmoothBump(a.phi_eps);
  cfg.mode = parse_mode(a.mode);
  cfg.jobs = resolve_jobs(a.jobs);
  const MollifierSpec spec(cfg.M_length(), a.b);
  const cplx d1 = parse_complex(a.delta1);
  const MomentRatio m = mollified_ratio(d1, cfg, spec);
  std::printf("delta1=%g%+gi family=%zu empirical=%.6f prediction=%.6f relative_gap=%.3f\n", d1.real(), d1.imag(),
              m.family_size, m.ratio, m.prediction, (m.ratio - m.prediction) / m.prediction);
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 42;
  std::string out;
};

const std::vector<std::string> kSuites = {"gauss", "fe",      "lemma32", "poisson", "kernel",
                                          "zeta",  "density", "constant", "survey",  "box"};

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "gauss") return verify_gauss_sums(3000, 16, seed);
  if (name == "fe") return verify_functional_equation(20, 5000, seed);
  if (name == "lemma32") return verify_kernel_sum_identity(6, 500, 0.01, seed);
  if (name == "poisson") return verify_poisson({GaussInt{1}, GaussInt{-1, 2}, GaussInt{-3}}, {50.0});
  if (name == "kernel") return verify_kernel_asymptotics(SmallXReference::with_next_pole);
  if (name == "zeta") return verify_dedekind_zeta(10, seed);
  if (name == "density") return verify_density(100'000);
  if (name == "constant") return verify_headline_constant();
  if (name == "survey") return verify_survey_proportion(500, EnumerationMode::primary, resolve_jobs(0));
  if (name == "box") return verify_box_counter();
  throw UsageError("verify: unknown suite '" + name + "'");
}

int run_verify(const VerifyArgs& a, const std::string& hash) {
  std::vector<std::string> names;
  if (a.suite == "all") {
    names = kSuites;
  } else {
    std::stringstream ss(a.suite);
    for (std::string s; std::getline(ss, s, ',');) names.push_back(s);
  }
  for (const auto& n : names)
    if (std::find(kSuites.begin(), kSuites.end(), n) == kSuites.end())
      throw UsageError("verify: unknown suite '" + n + "'");
  nlohmann::json suites = nlohmann::json::array();
  bool all = true;
  for (const auto& n : names) {
    SuiteResult r = run_suite(n, a.seed);
    all = all && r.passed;
    std::fprintf(stderr, "%s %-22s residual %.3e tol %.1e  %s  (%.1f s)\n", r.passed ? "PASS" : "FAIL", n.c_str(),
                 r.residual, r.tolerance, r.detail.c_str(), r.seconds);
    suites.push_back({{"suite", n},
                      {"name", r.name},
                      {"passed", r.passed},
                      {"residual", r.residual},
                      {"tolerance", r.tolerance},
                      {"detail", r.detail}});
  }
  const nlohmann::json report = {{"seed", a.seed},   {"passed", all},       {"suites", suites},
                                 {"config_hash", hash}, {"version", kVersion}};
  emit(report.dump(2) + "\n", a.out);
  if (!all) throw VerificationFailure("one or more suites failed");
  return 0;
}

// ---------------------------------------------------------------- plot-data

struct PlotArgs {
  std::string kind;
  std::string d = "-3";
  int points = 512;
  long long max_norm = 2000;
  std::string mode = "primary";
  double x_min = 1e-6, x_max = 100.0;
  double contour_offset = 1.0, truncation_height = 40.0, quadrature_step = 0.25;
  int jobs = 0;
  std::string out;
};

int run_plot(const PlotArgs& a, const std::string& hash) {
  if (a.points < 1) throw UsageError("plot-data: --points must be positive");
  std::string text;
  if (a.kind == "xi_profile") {
    const CharacterSpec chr(parse_gauss_int(a.d));
    const CoeffTable table = build_coeff_table(chr, afe_cutoff(chr));
    text = "sigma,xi\n";
    for (int k = 0; k <= a.points; ++k) {
      const double s = static_cast<double>(k) / a.points;
      text += format_double(s) + "," + format_double(xi_real(table, s)) + "\n";
    }
  } else if (a.kind == "proportion_curve") {
    SurveyConfig cfg;
    cfg.jobs = resolve_jobs(a.jobs);
    const SurveyResult r = run_survey(a.max_norm, parse_mode(a.mode), cfg);
    text = "norm,count,nonvanishing_fraction\n";
    long count = 0, good = 0;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      ++count;
      if (r.records[i].nonvanishing()) ++good;
      if (i + 1 == r.records.size() || r.records[i + 1].norm != r.records[i].norm)
        text += std::to_string(r.records[i].norm) + "," + std::to_string(count) + "," +
                format_double(static_cast<double>(good) / static_cast<double>(count)) + "\n";
    }
  } else if (a.kind == "kernel_profile") {
    if (!(a.x_min > 0.0 && a.x_max > a.x_min)) throw UsageError("plot-data: need 0 < --x-min < --x-max");
    KernelConfig kc;
    kc.contour_offset = a.contour_offset;
    kc.truncation_height = a.truncation_height;
    kc.quadrature_step = a.quadrature_step;
    text = "x,W\n";
    const double l0 = std::log(a.x_min), l1 = std::log(a.x_max);
    for (int k = 0; k <= a.points; ++k) {
      const double x = k == 0 ? a.x_min : k == a.points ? a.x_max : std::exp(l0 + (l1 - l0) * k / a.points);
      text += format_double(x) + "," + format_double(W_kernel(x, 0.0, 0.0, kc).real()) + "\n";
    }
  } else {
    throw UsageError("plot-data: --kind must be xi_profile, proportion_curve or kernel_profile");
  }
  emit(text + trailer(hash), a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real zeros of quadratic Hecke L-functions over Q(i): evaluation, surveys and checks", "hecke"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  std::string config_path;
  app.add_option("--config", config_path, "File of key = value lines supplying defaults for the subcommand options");

  SurveyArgs sa;
  auto* survey = app.add_subcommand("survey", "Scan xi(sigma) on [0,1] for every d in a norm range; write a CSV");
  survey->add_option("--max-norm", sa.max_norm, "Largest N(d) surveyed (required)");
  survey->add_option("--min-norm", sa.min_norm, "Survey only N(d) above this value");
  survey->add_option("--mode", sa.mode, "Family: primary or all_associates");
  survey->add_option("--jobs", sa.jobs, "Worker threads (0: HECKE_JOBS, else all cores)");
  survey->add_option("--out", sa.out, "CSV output path");
  survey->add_option("--checkpoint", sa.checkpoint, "Checkpoint JSON path; an existing matching checkpoint resumes");
  survey->add_option("--checkpoint-every", sa.checkpoint_every, "Records per checkpoint batch");
  survey->add_option("--grid", sa.grid, "Sign-scan grid intervals on [0,1] (>= 64)");
  survey->add_flag("--include-unit", sa.include_unit, "Also scan d = 1");
  survey->add_flag("--dry-run", sa.dry_run, "Enumerate and count only");
  survey->add_option("--max-norm-ceiling", sa.ceiling, "Refuse scans above this norm");

  ZerosArgs za;
  auto* zeros = app.add_subcommand("zeros", "Real zeros of xi for one character");
  zeros->add_option("--d", za.d, "Odd square-free Gaussian integer, e.g. 3+2i (required)");
  zeros->add_option("--grid", za.grid, "Sign-scan grid intervals on [0,1]");
  zeros->add_flag("--json", za.json, "JSON output");
  zeros->add_option("--out", za.out, "Output path (default stdout)");

  LfunArgs la;
  auto* lfun = app.add_subcommand("lfun", "L and xi at real points as CSV");
  lfun->add_option("--d", la.d, "Odd square-free Gaussian integer (required)");
  lfun->add_option("--sigma", la.sigma, "Evaluation point when --grid is 0");
  lfun->add_option("--grid", la.grid, "Evaluate at k/grid for k = 0..grid");
  lfun->add_option("--eta", la.eta, "Split point of the approximate functional equation");
  lfun->add_option("--out", la.out, "Output path (default stdout)");

  GaussArgs ga;
  auto* gauss = app.add_subcommand("gauss-sum", "Gauss sum g(r, n) by direct summation and closed form");
  gauss->add_option("--r", ga.r, "Gaussian integer r (required)");
  gauss->add_option("--n", ga.n, "Odd modulus n (required)");

  DensityArgs da;
  auto* density = app.add_subcommand("density", "Count odd square-free d with N(d) <= max-norm");
  density->add_option("--max-norm", da.max_norm, "Norm bound (required)");
  density->add_option("--mode", da.mode, "Family: primary or all_associates");

  ConstantArgs ca;
  auto* constant = app.add_subcommand("constant", "Upper-bound constant C and its error estimate");
  constant->add_option("--b", ca.b, "Mollifier polynomial cut-off");
  constant->add_option("--R", ca.R, "Box width parameter");
  constant->add_option("--S", ca.S, "Box height parameter (0: pi / (2 (1 - b)(1 - 20 kappa)))");
  constant->add_option("--kappa", ca.kappa, "Mollifier length exponent offset");
  constant->add_option("--u-max", ca.u_max, "Truncation of the outer integral");
  constant->add_option("--tol", ca.tol, "Absolute quadrature tolerance");
  constant->add_option("--reading", ca.reading, "Argument of the second Q factor: u+iv or x+iv");
  constant->add_option("--normalization", ca.normalization, "V normalization: moment or halved");
  constant->add_flag("--json", ca.json, "JSON output");

  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "Empirical mollified second moment against the main term");
  moments->add_option("--X", ma.X, "Family scale, X < N(d) < 2X");
  moments->add_option("--delta1", ma.delta1, "Shift as re,im");
  moments->add_option("--Y", ma.Y, "Square-free sieve cut-off (0: X^(1/4))");
  moments->add_option("--R", ma.R, "Box width parameter");
  moments->add_option("--b", ma.b, "Mollifier polynomial cut-off");
  moments->add_option("--kappa", ma.kappa, "Mollifier length exponent offset");
  moments->add_option("--phi-eps", ma.phi_eps, "Edge width of the smooth weight");
  moments->add_option("--mode", ma.mode, "Family: primary or all_associates");
  moments->add_option("--jobs", ma.jobs, "Worker threads (0: HECKE_JOBS, else all cores)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run property suites and write a JSON report");
  verify->add_option("--suite", va.suite, "all, or a comma list of: gauss fe lemma32 poisson kernel zeta density "
                                          "constant survey box");
  verify->add_option("--seed", va.seed, "Seed for all random sampling");
  verify->add_option("--out", va.out, "Report path (default stdout)");

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot-data", "Numeric tables for external plotting");
  plot->add_option("--kind", pa.kind, "xi_profile, proportion_curve or kernel_profile (required)");
  plot->add_option("--d", pa.d, "Character for xi_profile");
  plot->add_option("--points", pa.points, "Intervals for xi_profile and kernel_profile");
  plot->add_option("--max-norm", pa.max_norm, "Norm bound for proportion_curve");
  plot->add_option("--mode", pa.mode, "Family for proportion_curve");
  plot->add_option("--x-min", pa.x_min, "Smallest x for kernel_profile");
  plot->add_option("--x-max", pa.x_max, "Largest x for kernel_profile");
  plot->add_option("--contour-offset", pa.contour_offset, "Kernel contour abscissa");
  plot->add_option("--truncation-height", pa.truncation_height, "Kernel contour truncation height");
  plot->add_option("--quadrature-step", pa.quadrature_step, "Kernel contour step");
  plot->add_option("--jobs", pa.jobs, "Worker threads for proportion_curve");
  plot->add_option("--out", pa.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) apply_config_file(config_path, *sub);
    const std::string hash = subcommand_hash(*sub);
    if (sub == survey) return run_survey_command(sa);
    if (sub == zeros) return run_zeros(za, hash);
    if (sub == lfun) return run_lfun(la, hash);
    if (sub == gauss) return run_gauss(ga);
    if (sub == density) return run_density(da);
    if (sub == constant) return run_constant(ca, hash);
    if (sub == moments) return run_moments(ma);
    if (sub == verify) return run_verify(va, hash);
    if (sub == plot) return run_plot(pa, hash);
  } catch (const VerificationFailure& e) {
    return report(e, 1);
  } catch (const std::invalid_argument& e) {
    return report(e, 2);
  } catch (const std::exception& e) {
    return report(e, 3);
  }
  return 2;
}
