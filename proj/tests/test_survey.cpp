#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "hecke/mollifier.hpp"
#include "hecke/survey.hpp"

using namespace hecke;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hecke_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(SignScan, SyntheticPatterns) {
  ScanOptions opt;
  // two simple zeros, symmetric about 1/2
  const auto two = [](double s) { return (s - 0.3) * (s - 0.7); };
  const SignScan a = scan_sign_changes(two, opt, true);
  ASSERT_EQ(a.zeros.size(), 2u);
  EXPECT_NEAR(a.zeros[0].sigma, 0.3, 1e-10);
  EXPECT_NEAR(a.zeros[1].sigma, 0.7, 1e-10);
  EXPECT_LE(a.zeros[0].width, 1e-10);
  EXPECT_FALSE(a.suspect);

  // double zero off the grid: no sign change, flagged
  const auto tangent = [](double s) { return (s - 0.5003) * (s - 0.5003) * (s - 0.4997) * (s - 0.4997); };
  const SignScan b = scan_sign_changes(tangent, opt, true);
  EXPECT_TRUE(b.zeros.empty());
  EXPECT_TRUE(b.suspect);

  // a close pair between two grid points is found by the local re-scan
  const auto pair = [](double s) { return (s - 0.3001) * (s - 0.3011) + 1e-12 * s; };
  const SignScan c = scan_sign_changes(pair, opt, false);
  ASSERT_EQ(c.zeros.size(), 2u);
  EXPECT_NEAR(c.zeros[0].sigma, 0.3001, 1e-6);
  EXPECT_NEAR(c.zeros[1].sigma, 0.3011, 1e-6);

  // zero at a grid point counted once; zero at sigma = 0 excluded
  const SignScan d = scan_sign_changes([](double s) { return s - 0.25; }, opt, false);
  ASSERT_EQ(d.zeros.size(), 1u);
  EXPECT_EQ(d.zeros[0].sigma, 0.25);
  EXPECT_TRUE(scan_sign_changes([](double s) { return s + 1.0 / 1024; }, opt, false).zeros.empty());

  EXPECT_THROW(scan_sign_changes(two, ScanOptions{32}, true), std::invalid_argument);
}

TEST(ScanRealZeros, UnitCharacterFixture) {
  const SurveyRecord r = scan_real_zeros(CharacterSpec(GaussInt{1}));
  EXPECT_EQ(r.num_real_zeros, 0);
  EXPECT_EQ(r.status, ZeroStatus::clean);
  EXPECT_NEAR(r.min_abs_xi, 1.03297127314793, 1e-12);
  EXPECT_NEAR(r.xi_at_one, 1.13912933181958, 1e-12);
  ScanOptions dense;
  dense.grid_points = 2048;
  const SurveyRecord q = scan_real_zeros(CharacterSpec(GaussInt{1}), dense);
  EXPECT_EQ(q.num_real_zeros, r.num_real_zeros);
  EXPECT_NEAR(q.min_abs_xi, r.min_abs_xi, 1e-12);
}

TEST(ScanRealZeros, AnchorAndRefinement) {
  std::mt19937_64 rng(7);
  const auto all = enumerate_odd_squarefree(4000, EnumerationMode::all_associates);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  ScanOptions coarse;
  coarse.grid_points = 128;
  for (int i = 0; i < 60; ++i) {
    const GaussInt d = all[pick(rng)];
    const CharacterSpec chr(d);
    const SurveyRecord a = scan_real_zeros(chr, coarse);
    ScanOptions fine = coarse;
    fine.grid_points = 256;
    const SurveyRecord b = scan_real_zeros(chr, fine);
    EXPECT_GT(a.xi_at_one, 0.0) << d;
    EXPECT_GE(b.num_real_zeros, a.num_real_zeros) << d;
    EXPECT_NE(a.status, ZeroStatus::failed) << a.error;
    for (const auto& z : b.zero_locations) {
      EXPECT_GT(z.sigma, 0.0);
      EXPECT_LE(z.sigma, 1.0);
      EXPECT_LE(z.width, 1e-10);
    }
  }
}

TEST(SelbergBox, SingleZeroOracle) {
  const cplx z0{0.4, 0.02};
  const BoxSpec box{0.3, 1.1, 0.1, 0.9};
  const auto f = [&](cplx z) { return z - z0; };
  const BoxCountResult r = selberg_box_count(f, box, 1e-10);
  const double H = box.H;
  const double expected =
      4.0 * H * std::cos(std::numbers::pi * z0.imag() / (2 * H)) * std::sinh(std::numbers::pi * (z0.real() - box.W0) / (2 * H));
  EXPECT_NEAR(r.weighted_zero_sum, expected, 1e-6);
  EXPECT_NEAR(r.left_edge + r.horizontal - r.right_edge, r.weighted_zero_sum, 1e-15);

  // constant multiples leave the count unchanged
  const BoxCountResult s = selberg_box_count([&](cplx z) { return cplx(-2.5, 4.0) * f(z); }, box, 1e-10);
  EXPECT_NEAR(s.weighted_zero_sum, r.weighted_zero_sum, 1e-8);

  // a conjugate pair plus a zero outside the box
  const auto g = [&](cplx z) { return (z - z0) * (z - std::conj(z0)) * (z - cplx(0.5, 0.3)); };
  EXPECT_NEAR(selberg_box_count(g, box, 1e-10).weighted_zero_sum, 2.0 * expected, 1e-6);
}

TEST(SelbergBox, ZeroFreeAndFailures) {
  const BoxSpec box{0.3, 1.1, 0.1, 0.9};
  EXPECT_LE(std::abs(selberg_box_count([](cplx z) { return std::exp(z); }, box, 1e-10).weighted_zero_sum), 1e-8);
  EXPECT_THROW(selberg_box_count([](cplx z) { return z - cplx(0.3, 0.05); }, box), std::domain_error);
  EXPECT_THROW(selberg_box_count([](cplx z) { return z; }, BoxSpec{0.3, 1.1, 0.1, 1.5}), std::invalid_argument);
}

TEST(SelbergBox, MollifiedLNonNegative) {
  const double X = 1000;
  const MollifierSpec mol(std::sqrt(X));
  const BoxSpec box = paper_box(X, 6.8, std::numbers::pi / 0.72, mol.M_length());
  for (const GaussInt d : {GaussInt{1}, GaussInt{-3}, GaussInt{-1, 2}, GaussInt{2, 3}}) {
    const CharacterSpec chr(d);
    const CoeffTable table = build_coeff_table(chr, afe_cutoff(chr));
    const auto f = [&](cplx z) { return lfunction_eval(table, z).L * mollifier_value(mol, chr, z); };
    const BoxCountResult r = selberg_box_count(f, box, 1e-8);
    EXPECT_GE(r.weighted_zero_sum, -1e-6) << d;
  }
}

TEST(Survey, CsvDeterminismAndSchema) {
  const auto dir = scratch_dir("csv");
  SurveyConfig cfg;
  cfg.jobs = 1;
  cfg.checkpoint_every = 16;
  cfg.out_csv = (dir / "a.csv").string();
  const SurveyResult a = run_survey(300, EnumerationMode::primary, cfg);
  cfg.out_csv = (dir / "b.csv").string();
  cfg.jobs = 3;
  const SurveyResult b = run_survey(300, EnumerationMode::primary, cfg);
  const std::string ta = read_file(dir / "a.csv"), tb = read_file(dir / "b.csv");
  EXPECT_EQ(ta, tb);
  EXPECT_EQ(ta.substr(0, ta.find('\n')), "d_re,d_im,norm,num_real_zeros,min_abs_xi,status");
  EXPECT_NE(ta.find("# config_hash=" + a.summary.config_hash + ",version="), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "a.csv.partial"));
  EXPECT_EQ(a.summary.counts, b.summary.counts);
  // unit excluded by default
  EXPECT_EQ(a.records.front().norm, 5);
  cfg.include_unit = true;
  cfg.out_csv.clear();
  EXPECT_EQ(run_survey(300, EnumerationMode::primary, cfg).records.front().norm, 1);
  EXPECT_NE(survey_config_hash(300, EnumerationMode::primary, cfg), a.summary.config_hash);
}

TEST(Survey, ResumeAfterInterrupt) {
  const auto dir = scratch_dir("resume");
  SurveyConfig cfg;
  cfg.jobs = 2;
  cfg.checkpoint_every = 10;
  cfg.out_csv = (dir / "full.csv").string();
  const SurveyResult full = run_survey(400, EnumerationMode::all_associates, cfg);

  cfg.out_csv = (dir / "part.csv").string();
  cfg.checkpoint = (dir / "cp.json").string();
  int seen = 0;
  EXPECT_THROW(run_survey(400, EnumerationMode::all_associates, cfg,
                          [&](const SurveyRecord&) {
                            if (++seen == 35) throw std::runtime_error("interrupt");
                          }),
               std::runtime_error);
  ASSERT_TRUE(std::filesystem::exists(cfg.checkpoint));
  SurveyConfig other = cfg;
  other.scan.grid_points = 256;
  EXPECT_THROW(run_survey(400, EnumerationMode::all_associates, other), std::invalid_argument);

  const SurveyResult rest = run_survey(400, EnumerationMode::all_associates, cfg);
  EXPECT_TRUE(rest.resumed);
  EXPECT_LT(rest.records.size(), full.records.size());
  EXPECT_EQ(rest.summary.counts, full.summary.counts);
  const std::string a = read_file(dir / "full.csv"), b = read_file(dir / "part.csv");
  EXPECT_EQ(a, b);
  EXPECT_FALSE(std::filesystem::exists(cfg.checkpoint));
}

TEST(Survey, AdditiveAcrossNormRanges) {
  SurveyConfig cfg;
  cfg.jobs = 1;
  const SurveyCounts whole = run_survey(400, EnumerationMode::primary, cfg).summary.counts;
  SurveyCounts parts = run_survey(150, EnumerationMode::primary, cfg).summary.counts;
  cfg.min_norm = 150;
  parts += run_survey(400, EnumerationMode::primary, cfg).summary.counts;
  EXPECT_EQ(parts, whole);
}

TEST(Survey, DensityAtLargeX) {
  const DensityResult all = density_count(100'000, EnumerationMode::all_associates);
  const DensityResult prim = density_count(100'000, EnumerationMode::primary);
  EXPECT_NEAR(all.expected, 1.3900, 1e-4);
  EXPECT_NEAR(prim.expected, 0.3475, 1e-4);
  EXPECT_NEAR(all.ratio, all.expected, 0.02);
  EXPECT_NEAR(prim.ratio, prim.expected, 0.005);
  SurveyConfig dry;
  dry.dry_run = true;
  dry.include_unit = true;
  EXPECT_EQ(run_survey(100'000, EnumerationMode::primary, dry).summary.counts.total, prim.count);
}

TEST(Survey, ProportionAtSmallScale) {
  SurveyConfig cfg;
  const SurveyResult r = run_survey(2000, EnumerationMode::primary, cfg);
  std::printf("x = 2000 primary: %ld of %ld nonvanishing (%.4f), suspect %ld, failed %ld\n",
              r.summary.counts.nonvanishing, r.summary.counts.total, r.summary.proportion, r.summary.counts.suspect,
              r.summary.counts.failed);
  EXPECT_GT(r.summary.proportion, 0.2);
  EXPECT_EQ(r.summary.counts.failed, 0);
}
