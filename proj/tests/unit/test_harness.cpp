#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "depsgld/error.hpp"
#include "depsgld/harness.hpp"

using namespace depsgld;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("depsgld_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_sample1d() {
  auto cfg = ExperimentConfig::defaults(Experiment::kSample1d);
  cfg.n_agents = 6;
  cfg.sampler.iterations = 20;
  cfg.sampler.n_chains = 12;
  return cfg;
}

}  // namespace

TEST(Trace, CsvLayout) {
  RunTrace t;
  t.append("pooled", 1, "mean", "w2", 0.5);
  t.append("3", 2, "0", "consensus", 1e-20);
  EXPECT_EQ(t.to_csv(), "replica,iter,agent,metric,value\npooled,1,mean,w2,0.5\n3,2,0,consensus,1e-20\n");
  EXPECT_EQ(t.validate(), "");
  t.append("pooled", 1, "mean", "w2", 0.4);
  EXPECT_NE(t.validate(), "");
  RunTrace back;
  back.append("pooled", 5, "mean", "w2", 0.5);
  back.append("pooled", 4, "mean", "w2", 0.5);
  EXPECT_NE(back.validate(), "");
}

TEST(Trace, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(SampleTable, CsvLayout) {
  SampleTable s(2);
  s.append("0", 3, "mean", Vector::Ones(2));
  EXPECT_EQ(s.to_csv(), "replica,iter,agent,dim0,dim1\n0,3,mean,1,1\n");
}

TEST(Config, ApplyAndEcho) {
  auto cfg = ExperimentConfig::defaults(Experiment::kBlr2d);
  EXPECT_EQ(cfg.n_agents, 20u);
  EXPECT_DOUBLE_EQ(cfg.sampler.gamma, 5e-5);
  cfg.apply("topology", "ring");
  cfg.apply("bounds", "-2,3");
  cfg.apply("sampler", "depsgld,pla");
  cfg.apply("no-standardize", "true");
  EXPECT_EQ(cfg.topologies, std::vector<TopologyKind>{TopologyKind::kRing});
  EXPECT_DOUBLE_EQ(cfg.bounds->second, 3.0);
  EXPECT_FALSE(cfg.standardize);
  EXPECT_THROW(cfg.apply("colour", "red"), InvalidArgument);
  EXPECT_THROW(cfg.apply("eta", "fast"), InvalidArgument);
  EXPECT_THROW(cfg.apply("set", "simplex"), InvalidArgument);

  const auto path = std::filesystem::temp_directory_path() / "depsgld_cfg_echo.txt";
  std::ofstream(path) << cfg.to_key_values();
  auto again = ExperimentConfig::defaults(Experiment::kSample1d);
  again.apply_file(path);
  EXPECT_EQ(again.to_key_values(), cfg.to_key_values());
}

TEST(Config, FileCommentsAndErrors) {
  const auto path = std::filesystem::temp_directory_path() / "depsgld_cfg_comments.txt";
  std::ofstream(path) << "# comment\n eta = 0.01  # trailing\n\nagents=8\n";
  auto cfg = ExperimentConfig::defaults(Experiment::kSample1d);
  cfg.apply_file(path);
  EXPECT_DOUBLE_EQ(cfg.sampler.eta, 0.01);
  EXPECT_EQ(cfg.n_agents, 8u);
  std::ofstream(path) << "eta 0.01\n";
  EXPECT_THROW(cfg.apply_file(path), InvalidArgument);
}

TEST(Config, ValidationNamesField) {
  auto cfg = small_sample1d();
  cfg.burnin = 50;
  try {
    cfg.validate();
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("burnin"), std::string::npos);
  }
  cfg = small_sample1d();
  cfg.topologies = {TopologyKind::kRing};
  cfg.n_agents = 2;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Sample1d, SeriesAndOutputs) {
  auto cfg = small_sample1d();
  cfg.out_dir = scratch("s1d");
  const auto result = run_sample1d(cfg);
  ASSERT_EQ(result.runs.size(), 4u);
  ASSERT_EQ(result.centralized.size(), 1u);
  for (const auto& run : result.runs) {
    EXPECT_EQ(run.trace.validate(), "");
    EXPECT_EQ(run.trace.series("mean", "w2").size(), 20u);
    EXPECT_EQ(run.trace.series("psgld", "w2").size(), 20u);
    EXPECT_EQ(run.trace.series("5", "w2").size(), 20u);
    EXPECT_EQ(run.trace.series("mean", "consensus_bound").size(), 20u);
  }
  const auto* disc = result.find(TopologyKind::kDisconnected);
  ASSERT_NE(disc, nullptr);
  for (const auto& row : disc->trace.series("mean", "consensus_bound")) EXPECT_TRUE(std::isinf(row.value));

  write_outputs(result);
  for (const char* sub : {"complete", "ring", "star", "disconnected", "psgld"}) {
    for (const char* file : {"config.txt", "trace.csv", "samples.csv", "summary.csv", "manifest.txt"}) {
      EXPECT_TRUE(std::filesystem::exists(cfg.out_dir / sub / file)) << sub << "/" << file;
    }
  }
  EXPECT_NE(slurp(cfg.out_dir / "complete" / "manifest.txt").find("seed=1"), std::string::npos);
}

TEST(Sample1d, TraceBytesIndependentOfThreads) {
  auto cfg = small_sample1d();
  cfg.topologies = {TopologyKind::kStar};
  cfg.sampler.threads = 1;
  const auto a = run_sample1d(cfg);
  cfg.sampler.threads = 3;
  const auto b = run_sample1d(cfg);
  EXPECT_EQ(a.runs[0].trace.to_csv(), b.runs[0].trace.to_csv());
  EXPECT_EQ(a.runs[0].samples.to_csv(), b.runs[0].samples.to_csv());
}

TEST(Blr, SmallRunSummaries) {
  auto cfg = ExperimentConfig::defaults(Experiment::kBlr2d);
  cfg.n_samples = 400;
  cfg.n_agents = 4;
  cfg.sampler.batch = 20;
  cfg.sampler.eta = 1e-4;
  cfg.sampler.gamma = 1e-3;
  cfg.sampler.iterations = 60;
  cfg.sampler.n_chains = 10;
  cfg.topologies = {TopologyKind::kComplete};
  const auto result = run_blr2d(cfg);
  ASSERT_TRUE(result.reference_beta.has_value());
  EXPECT_NEAR(result.set.outer_radius(), 0.8 * result.reference_beta->norm(), 1e-12);
  const auto& run = result.runs[0];
  EXPECT_FALSE(run.outcome.diverged);
  ASSERT_TRUE(run.mean_posterior.has_value());
  EXPECT_EQ(run.mean_posterior->count, 31u * 10u);
  EXPECT_GT(run.samples.size(), 0u);
  EXPECT_EQ(result.exit_code(), 0);
}

TEST(Blr, DivergenceMarkedNotThrown) {
  auto cfg = ExperimentConfig::defaults(Experiment::kBlr2d);
  cfg.n_samples = 400;
  cfg.n_agents = 4;
  cfg.sampler.batch = 20;
  cfg.sampler.eta = 0.05;
  cfg.sampler.iterations = 100;
  cfg.sampler.n_chains = 4;
  cfg.topologies = {TopologyKind::kRing};
  const auto result = run_blr2d(cfg);
  EXPECT_TRUE(result.runs[0].outcome.diverged);
  EXPECT_EQ(result.exit_code(), 4);
}

TEST(Logreg, MissingDatasetIsDataError) {
  auto cfg = ExperimentConfig::defaults(Experiment::kLogreg);
  cfg.dataset = "/nonexistent/wdbc.data";
  EXPECT_THROW(run_logreg(cfg), DataError);
}

TEST(Logreg, AccuracySeriesLengths) {
  auto cfg = ExperimentConfig::defaults(Experiment::kLogreg);
  cfg.sampler.iterations = 30;
  cfg.sampler.n_chains = 8;
  cfg.topologies = {TopologyKind::kComplete, TopologyKind::kDisconnected};
  cfg.predictive = true;
  const auto result = run_logreg(cfg);
  ASSERT_TRUE(result.reference_accuracy.has_value());
  EXPECT_GT(*result.reference_accuracy, 0.95);
  for (const auto& run : result.runs) {
    EXPECT_EQ(run.trace.series("mean", "accuracy").size(), 30u);
    EXPECT_EQ(run.trace.series("psgld", "accuracy").size(), 30u);
    EXPECT_EQ(run.trace.series("4", "accuracy").size(), 30u);
    EXPECT_EQ(run.trace.series("mean", "predictive_accuracy").size(), 30u);
  }
}

TEST(ValidateNetwork, ReportsRhoAndGuard) {
  auto cfg = ExperimentConfig::defaults(Experiment::kValidateNetwork);
  cfg.topologies = {TopologyKind::kComplete, TopologyKind::kDisconnected};
  cfg.delta = 1.0 / 30.0;
  cfg.mu = 1.0;
  cfg.l_smooth = 2.0;
  const auto text = validate_network(cfg);
  EXPECT_NE(text.find("topology=complete"), std::string::npos);
  EXPECT_NE(text.find("rho="), std::string::npos);
  EXPECT_NE(text.find("eta_max="), std::string::npos);
  EXPECT_NE(text.find("non-contracting"), std::string::npos);
}
