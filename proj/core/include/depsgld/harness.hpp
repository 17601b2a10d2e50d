#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depsgld/constraints.hpp"
#include "depsgld/metrics.hpp"
#include "depsgld/samplers.hpp"
#include "depsgld/topology.hpp"
#include "depsgld/trace.hpp"

namespace depsgld {

enum class Experiment { kSample1d, kBlr2d, kLogreg, kValidateNetwork };
std::string_view to_string(Experiment e);
/// Accepts the CLI subcommand names: sample-1d, blr, logreg, validate-network.
Experiment parse_experiment(std::string_view name);

enum class SetKind { kBox, kL2, kL1 };
std::string_view to_string(SetKind kind);
SetKind parse_set_kind(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::kSample1d;

  // network
  std::vector<TopologyKind> topologies = all_topologies();
  std::size_t n_agents = 30;
  std::optional<double> delta;

  // samplers; the first decentralized run is DE-PSGLD, the rest are
  // centralized comparators
  SamplerConfig sampler;
  std::vector<SamplerKind> samplers = {SamplerKind::kDepsgld, SamplerKind::kPsgld};

  // constraint; radius/bounds left empty mean "derive from the experiment"
  SetKind set = SetKind::kBox;
  std::optional<double> radius;
  std::optional<std::pair<double, double>> bounds;

  // data
  std::size_t n_samples = 10000;
  double noise_var = 0.25;
  std::filesystem::path dataset;
  bool standardize = true;
  double test_frac = 0.0;

  // outputs
  std::optional<std::size_t> burnin;
  std::size_t dump_every = 10;
  std::size_t dump_agent = 0;
  bool predictive = false;
  std::filesystem::path out_dir;

  // validate-network only
  std::optional<double> mu;
  std::optional<double> l_smooth;

  /// Default settings for each experiment.
  static ExperimentConfig defaults(Experiment e);

  /// Applies one `key=value` setting (keys are the long CLI flag names without
  /// dashes). Throws InvalidArgument for unknown keys or bad values.
  void apply(std::string_view key, std::string_view value);
  /// Reads `key=value` lines; '#' starts a comment.
  void apply_file(const std::filesystem::path& path);

  std::size_t effective_burnin() const { return burnin.value_or(sampler.iterations / 2); }

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
  /// Resolved settings, one `key=value` per line, fixed key order.
  std::string to_key_values() const;
};

/// Parses a config file into ordered (key, value) pairs.
std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path);

/// One `chain,stat,value` line of summary.csv.
struct SummaryRow {
  std::string chain;
  std::string stat;
  double value = 0.0;
};

struct ChainOutcome {
  std::string label;  ///< topology name or centralized sampler name
  bool diverged = false;
  std::string status = "ok";
  double wall_seconds = 0.0;
  StepsizeGuard guard;
};

/// One DE-PSGLD run on one topology, with the comparator rows merged in.
struct TopologyRun {
  TopologyKind kind = TopologyKind::kComplete;
  MixingMatrix mixing;
  RunTrace trace;
  SampleTable samples{1};
  ChainOutcome outcome;
  /// Retained (k >= burnin) cross-replica draws: mean chain and dump agent.
  std::optional<PosteriorSummary> mean_posterior;
  std::optional<PosteriorSummary> agent_posterior;
  /// Fraction of retained agent draws within 5 sqrt(gamma) of K.
  double within_envelope_fraction = 0.0;
  std::vector<SummaryRow> summary;
};

struct CentralizedRun {
  SamplerKind kind = SamplerKind::kPsgld;
  RunTrace trace;
  SampleTable samples{1};
  ChainOutcome outcome;
  std::optional<PosteriorSummary> posterior;
  std::vector<SummaryRow> summary;
};

struct ExperimentResult {
  Experiment experiment = Experiment::kSample1d;
  ExperimentConfig config;
  std::vector<TopologyRun> runs;
  std::vector<CentralizedRun> centralized;
  ConvexSet set = ConvexSet::box(1, -1.0, 1.0);
  /// OLS (blr) or MLE (logreg) estimate and the radius derived from it.
  std::optional<Vector> reference_beta;
  std::optional<double> reference_accuracy;
  std::vector<std::string> notes;

  bool any_diverged() const;
  const TopologyRun* find(TopologyKind kind) const;
  /// 0, or 4 when any chain diverged.
  int exit_code() const;
};

/// DE-PSGLD and the centralized comparators on f(x) = x^2/2 + x^4/8 - x over
/// [-1, 1]; records W2 per agent, for the mean chain and for each comparator,
/// consensus distance, the consensus bound, and feasibility.
ExperimentResult run_sample1d(const ExperimentConfig& cfg);
/// Bayesian linear regression on synthetic data inside an l2 ball of radius
/// 0.8 ||beta_OLS||.
ExperimentResult run_blr2d(const ExperimentConfig& cfg);
/// Bayesian logistic regression on WDBC inside an l2 ball of radius
/// 0.8 ||beta_MLE||; records plug-in accuracy per iteration.
ExperimentResult run_logreg(const ExperimentConfig& cfg);
/// Dispatch on cfg.experiment (not validate-network).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Builds the configured mixing matrices and renders their validation
/// reports with rho, 1 - rho, lambda_N and (when mu, l_smooth are set) eta_max.
std::string validate_network(const ExperimentConfig& cfg);

/// Writes config echo, traces, samples, summaries and manifests under
/// cfg.out_dir (one subdirectory per topology).
void write_outputs(const ExperimentResult& result);

}  // namespace depsgld
