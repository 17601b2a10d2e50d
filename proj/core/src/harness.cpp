#include "depsgld/harness.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "depsgld/data.hpp"
#include "depsgld/error.hpp"
#include "depsgld/models.hpp"

namespace depsgld {

bool ExperimentResult::any_diverged() const {
  for (const auto& r : runs) {
    if (r.outcome.diverged) return true;
  }
  for (const auto& c : centralized) {
    if (c.outcome.diverged) return true;
  }
  return false;
}

const TopologyRun* ExperimentResult::find(TopologyKind kind) const {
  for (const auto& r : runs) {
    if (r.kind == kind) return &r;
  }
  return nullptr;
}

int ExperimentResult::exit_code() const { return any_diverged() ? 4 : 0; }

namespace {

constexpr const char* kPooled = "pooled";

std::string fmt(double v) { return format_double(v); }

/// Per-run metric sink. One instance observes one decentralized topology run
/// or one centralized chain bank.
class Collector {
 public:
  Collector(std::string label, bool centralized, std::size_t dim)
      : samples(dim), label_(std::move(label)), centralized_(centralized) {}
  virtual ~Collector() = default;

  virtual void observe(std::size_t k, std::span<const NetworkState> bank) = 0;
  /// final_bank is null when the run diverged.
  virtual void finish(const std::vector<NetworkState>* final_bank) = 0;

  RunTrace trace;
  SampleTable samples;
  std::vector<SummaryRow> summary;
  std::optional<PosteriorSummary> mean_posterior;
  std::optional<PosteriorSummary> agent_posterior;
  double within_envelope_fraction = 0.0;

 protected:
  /// Trace label of the chain whose law approximates the target.
  std::string mean_label() const { return centralized_ ? label_ : std::string("mean"); }
  void add_summary(const std::string& chain, const std::string& stat, double value) {
    summary.push_back(SummaryRow{chain, stat, value});
  }
  void dump_bank(std::size_t k, std::span<const NetworkState> bank) {
    for (std::size_t r = 0; r < bank.size(); ++r) {
      const auto rep = std::to_string(r);
      if (!centralized_) {
        for (std::size_t i = 0; i < bank[r].n_agents(); ++i) {
          samples.append(rep, k, std::to_string(i), bank[r].agents.col(static_cast<Eigen::Index>(i)));
        }
      }
      samples.append(rep, k, mean_label(), bank[r].mean());
    }
  }

  std::string label_;
  bool centralized_;
};

using CollectorFactory =
    std::function<std::unique_ptr<Collector>(const MixingMatrix* mixing, const std::string& label)>;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void note_guard(ExperimentResult& result, const std::string& label, const StepsizeGuard& guard) {
  if (guard.exceeded) result.notes.push_back(label + ": " + guard.message);
}

/// Runs DE-PSGLD on every configured topology and each centralized
/// comparator once, then merges the comparator rows into every topology trace.
void execute(ExperimentResult& result, const Potential& p, const CollectorFactory& make) {
  const auto& cfg = result.config;
  const bool decentralized =
      std::find(cfg.samplers.begin(), cfg.samplers.end(), SamplerKind::kDepsgld) != cfg.samplers.end();

  for (const auto& w : p.warnings()) result.notes.push_back(w);

  if (decentralized) {
    for (auto kind : cfg.topologies) {
      TopologyRun run;
      run.kind = kind;
      run.mixing = mixing_matrix(build_graph(kind, cfg.n_agents), cfg.delta);
      run.outcome.label = std::string(to_string(kind));
      run.outcome.guard = check_stepsize(p, cfg.n_agents, run.mixing.lambda_min, cfg.sampler);
      note_guard(result, run.outcome.label, run.outcome.guard);
      auto collector = make(&run.mixing, run.outcome.label);
      const auto start = std::chrono::steady_clock::now();
      try {
        auto res = run_depsgld(run.mixing, p, result.set, cfg.sampler,
                               [&](std::size_t k, std::span<const NetworkState> bank) {
                                 collector->observe(k, bank);
                               });
        collector->finish(&res.bank);
      } catch (const NumericFailure& e) {
        run.outcome.diverged = true;
        run.outcome.status = std::string("diverged: ") + e.what();
        result.notes.push_back(run.outcome.label + ": " + e.what());
        collector->finish(nullptr);
      }
      run.outcome.wall_seconds = seconds_since(start);
      run.trace = collector->trace;
      run.samples = std::move(collector->samples);
      run.summary = std::move(collector->summary);
      run.mean_posterior = std::move(collector->mean_posterior);
      run.agent_posterior = std::move(collector->agent_posterior);
      run.within_envelope_fraction = collector->within_envelope_fraction;
      result.runs.push_back(std::move(run));
    }
  }

  for (auto kind : cfg.samplers) {
    if (kind == SamplerKind::kDepsgld) continue;
    CentralizedRun run;
    run.kind = kind;
    run.outcome.label = std::string(to_string(kind));
    auto collector = make(nullptr, run.outcome.label);
    const auto start = std::chrono::steady_clock::now();
    try {
      auto res = run_centralized(kind, p, result.set, cfg.sampler, cfg.n_agents,
                                 [&](std::size_t k, std::span<const NetworkState> bank) {
                                   collector->observe(k, bank);
                                 });
      run.outcome.guard = res.guard;
      note_guard(result, run.outcome.label, run.outcome.guard);
      collector->finish(&res.bank);
    } catch (const NumericFailure& e) {
      run.outcome.diverged = true;
      run.outcome.status = std::string("diverged: ") + e.what();
      result.notes.push_back(run.outcome.label + ": " + e.what());
      collector->finish(nullptr);
    }
    run.outcome.wall_seconds = seconds_since(start);
    run.trace = collector->trace;
    run.samples = std::move(collector->samples);
    run.summary = std::move(collector->summary);
    run.posterior = std::move(collector->mean_posterior);
    result.centralized.push_back(std::move(run));
  }

  for (auto& run : result.runs) {
    for (const auto& c : result.centralized) run.trace.append_all(c.trace);
  }
}

ConvexSet make_set(const ExperimentConfig& cfg, std::size_t dim, const std::optional<Vector>& ref) {
  const double scale = 0.8;
  switch (cfg.set) {
    case SetKind::kBox: {
      if (cfg.bounds) return ConvexSet::box(dim, cfg.bounds->first, cfg.bounds->second);
      const double h = cfg.radius ? *cfg.radius : ref ? scale * ref->lpNorm<Eigen::Infinity>() : 1.0;
      return ConvexSet::box(dim, -h, h);
    }
    case SetKind::kL2:
      return ConvexSet::l2_ball(dim, cfg.radius ? *cfg.radius : ref ? scale * ref->norm() : 1.0);
    case SetKind::kL1:
      return ConvexSet::l1_ball(dim, cfg.radius ? *cfg.radius : ref ? scale * ref->lpNorm<1>() : 1.0);
  }
  throw InvalidArgument("unknown constraint set");
}

ExperimentResult begin(const ExperimentConfig& cfg, Experiment expected) {
  if (cfg.experiment != expected) {
    throw InvalidArgument("configuration is for experiment '" + std::string(to_string(cfg.experiment)) +
                          "', not '" + std::string(to_string(expected)) + "'");
  }
  cfg.validate();
  ExperimentResult result;
  result.experiment = expected;
  result.config = cfg;
  return result;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------- sample-1d

class Sample1dCollector final : public Collector {
 public:
  Sample1dCollector(std::string label, const MixingMatrix* mixing, const Potential& p,
                    const ConvexSet& set, const Quantile1D& q, const ExperimentConfig& cfg)
      : Collector(std::move(label), mixing == nullptr, 1),
        mixing_(mixing), p_(p), set_(set), q_(q), cfg_(cfg) {}

  void observe(std::size_t k, std::span<const NetworkState> bank) override {
    std::vector<double> xs(bank.size());
    if (!centralized_) {
      for (std::size_t i = 0; i < bank[0].n_agents(); ++i) {
        for (std::size_t r = 0; r < bank.size(); ++r) xs[r] = bank[r].agents(0, static_cast<Eigen::Index>(i));
        trace.append(kPooled, k, std::to_string(i), "w2", wasserstein2_1d(xs, q_));
      }
    }
    std::vector<Vector> pts(bank.size());
    for (std::size_t r = 0; r < bank.size(); ++r) {
      xs[r] = bank[r].agents.row(0).mean();
      pts[r] = Vector::Constant(1, xs[r]);
    }
    const double w2 = wasserstein2_1d(xs, q_);
    trace.append(kPooled, k, mean_label(), "w2", w2);
    if (!first_w2_) first_w2_ = w2;
    last_w2_ = w2;
    const auto feas = feasibility_stats(pts, set_);
    trace.append(kPooled, k, mean_label(), "inside_frac", feas.fraction_inside);
    trace.append(kPooled, k, mean_label(), "mean_sq_dist", feas.mean_sq_distance);
    if (!centralized_) {
      trace.append(kPooled, k, mean_label(), "consensus", consensus_distance(bank));
      double g = 0.0;
      for (const auto& s : bank) g += regularized_gradient_sq_norm(s, p_, set_, cfg_.sampler.gamma);
      g /= static_cast<double>(bank.size());
      trace.append(kPooled, k, mean_label(), "grad_u_sq", g);
      grad_sq_.push_back(g);
      iters_.push_back(k);
    }
  }

  void finish(const std::vector<NetworkState>* final_bank) override {
    if (final_bank) dump_bank(cfg_.sampler.iterations, *final_bank);
    if (first_w2_) {
      add_summary(mean_label(), "w2_first", *first_w2_);
      add_summary(mean_label(), "w2_last", last_w2_);
    }
    if (centralized_ || iters_.empty()) return;

    ConsensusBoundInputs in;
    in.rho = mixing_->rho;
    in.eta = cfg_.sampler.eta;
    in.dim = 1;
    in.n_agents = mixing_->size();
    std::vector<double> init(cfg_.sampler.n_chains);
    for (std::size_t r = 0; r < init.size(); ++r) {
      const auto s0 = make_network_state(in.n_agents, 1, cfg_.sampler, r, set_);
      init[r] = s0.agents.squaredNorm();
    }
    in.init_sq = mean_of(init);
    in.grad_sq = *std::max_element(grad_sq_.begin(), grad_sq_.end());
    in.noise_sq = p_.noise_sigma2().value_or(0.0);
    for (auto k : iters_) trace.append(kPooled, k, mean_label(), "consensus_bound", consensus_bound(in, k));
    add_summary(mean_label(), "grad_u_sq_max", in.grad_sq);
    add_summary(mean_label(), "noise_sq", in.noise_sq);
    add_summary(mean_label(), "init_sq", in.init_sq);
    add_summary(mean_label(), "rho", in.rho);
  }

 private:
  const MixingMatrix* mixing_;
  const Potential& p_;
  const ConvexSet& set_;
  const Quantile1D& q_;
  const ExperimentConfig& cfg_;
  std::optional<double> first_w2_;
  double last_w2_ = 0.0;
  std::vector<double> grad_sq_;
  std::vector<std::size_t> iters_;
};

/// Endpoints of a 1-D convex set.
std::pair<double, double> interval_of(const ConvexSet& set) {
  const double far = 1e6 * std::max(1.0, set.outer_radius());
  return {set.project(Vector::Constant(1, -far))[0], set.project(Vector::Constant(1, far))[0]};
}

// ---------------------------------------------------------------- blr

class BlrCollector final : public Collector {
 public:
  BlrCollector(std::string label, bool centralized, const ConvexSet& set, Vector projected_truth,
               const ExperimentConfig& cfg)
      : Collector(std::move(label), centralized, set.dim()),
        set_(set),
        truth_(std::move(projected_truth)),
        cfg_(cfg),
        mean_acc_(set.dim()),
        agent_acc_(set.dim()) {}

  void observe(std::size_t k, std::span<const NetworkState> bank) override {
    Vector avg = Vector::Zero(static_cast<Eigen::Index>(set_.dim()));
    for (const auto& s : bank) avg += s.mean();
    avg /= static_cast<double>(bank.size());
    trace.append(kPooled, k, mean_label(), "post_norm", avg.norm());
    trace.append(kPooled, k, mean_label(), "err_proj_true", (avg - truth_).norm());
    if (!centralized_) trace.append(kPooled, k, mean_label(), "consensus", consensus_distance(bank));

    const std::size_t burnin = cfg_.effective_burnin();
    if (k < burnin) return;
    const double envelope = 5.0 * std::sqrt(cfg_.sampler.gamma);
    for (const auto& s : bank) {
      mean_acc_.add(s.mean());
      if (!centralized_) agent_acc_.add(s.agents.col(static_cast<Eigen::Index>(cfg_.dump_agent)));
      for (Eigen::Index i = 0; i < s.agents.cols(); ++i) {
        ++retained_;
        if (set_.distance(s.agents.col(i)) <= envelope) ++within_;
      }
    }
    if ((k - burnin) % cfg_.dump_every == 0 || k == cfg_.sampler.iterations) dump_bank(k, bank);
  }

  void finish(const std::vector<NetworkState>*) override {
    if (retained_ > 0) within_envelope_fraction = static_cast<double>(within_) / static_cast<double>(retained_);
    if (mean_acc_.count() >= 2) {
      mean_posterior = mean_acc_.summary();
      summarize(mean_label(), *mean_posterior);
    }
    if (agent_acc_.count() >= 2) {
      agent_posterior = agent_acc_.summary();
      summarize(std::to_string(cfg_.dump_agent), *agent_posterior);
    }
    add_summary(mean_label(), "within_envelope_fraction", within_envelope_fraction);
  }

 private:
  void summarize(const std::string& chain, const PosteriorSummary& s) {
    for (Eigen::Index j = 0; j < s.mean.size(); ++j) add_summary(chain, "mean" + std::to_string(j), s.mean[j]);
    for (Eigen::Index a = 0; a < s.covariance.rows(); ++a) {
      for (Eigen::Index b = a; b < s.covariance.cols(); ++b) {
        add_summary(chain, "cov" + std::to_string(a) + std::to_string(b), s.covariance(a, b));
      }
    }
    add_summary(chain, "norm", s.mean.norm());
    const Vector dir = Vector::Ones(s.mean.size());
    const double c = s.mean.dot(dir) / (s.mean.norm() * dir.norm());
    add_summary(chain, "angle_deg", std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / std::numbers::pi);
    add_summary(chain, "err_proj_true", (s.mean - truth_).norm());
    add_summary(chain, "count", static_cast<double>(s.count));
  }

  const ConvexSet& set_;
  Vector truth_;
  const ExperimentConfig& cfg_;
  MomentAccumulator mean_acc_;
  MomentAccumulator agent_acc_;
  std::size_t retained_ = 0;
  std::size_t within_ = 0;
};

// ---------------------------------------------------------------- logreg

class LogregCollector final : public Collector {
 public:
  LogregCollector(std::string label, bool centralized, std::size_t dim, const DataSet& eval,
                  const ExperimentConfig& cfg)
      : Collector(std::move(label), centralized, dim), eval_(eval), cfg_(cfg) {}

  void observe(std::size_t k, std::span<const NetworkState> bank) override {
    const auto d = static_cast<Eigen::Index>(bank[0].dim());
    const double inv = 1.0 / static_cast<double>(bank.size());
    if (!centralized_) {
      for (std::size_t i = 0; i < bank[0].n_agents(); ++i) {
        Vector avg = Vector::Zero(d);
        for (const auto& s : bank) avg += s.agents.col(static_cast<Eigen::Index>(i));
        trace.append(kPooled, k, std::to_string(i), "accuracy", classification_accuracy(avg * inv, eval_));
      }
    }
    Vector avg = Vector::Zero(d);
    std::vector<Vector> draws;
    draws.reserve(bank.size());
    for (const auto& s : bank) {
      draws.push_back(s.mean());
      avg += draws.back();
    }
    last_accuracy_ = classification_accuracy(avg * inv, eval_);
    trace.append(kPooled, k, mean_label(), "accuracy", last_accuracy_);
    if (cfg_.predictive) {
      last_predictive_ = predictive_accuracy(draws, eval_);
      trace.append(kPooled, k, mean_label(), "predictive_accuracy", *last_predictive_);
    }
    if (!centralized_) trace.append(kPooled, k, mean_label(), "consensus", consensus_distance(bank));
    seen_ = true;
  }

  void finish(const std::vector<NetworkState>* final_bank) override {
    if (final_bank) dump_bank(cfg_.sampler.iterations, *final_bank);
    if (!seen_) return;
    add_summary(mean_label(), "accuracy_final", last_accuracy_);
    if (last_predictive_) add_summary(mean_label(), "predictive_accuracy_final", *last_predictive_);
  }

 private:
  const DataSet& eval_;
  const ExperimentConfig& cfg_;
  double last_accuracy_ = 0.0;
  std::optional<double> last_predictive_;
  bool seen_ = false;
};

void add_reference_rows(ExperimentResult& result, const std::vector<SummaryRow>& rows) {
  for (auto& run : result.runs) run.summary.insert(run.summary.begin(), rows.begin(), rows.end());
  for (auto& run : result.centralized) run.summary.insert(run.summary.begin(), rows.begin(), rows.end());
}

}  // namespace

ExperimentResult run_sample1d(const ExperimentConfig& cfg) {
  auto result = begin(cfg, Experiment::kSample1d);
  result.set = make_set(cfg, 1, std::nullopt);
  const auto potential = quartic_1d(cfg.n_agents);
  const auto [lo, hi] = interval_of(result.set);
  const Quantile1D q = true_quantile_1d(
      [&](double x) { return potential->total_value(Vector::Constant(1, x)); }, lo, hi);

  execute(result, *potential, [&](const MixingMatrix* m, const std::string& label) {
    return std::make_unique<Sample1dCollector>(label, m, *potential, result.set, q, result.config);
  });

  // Three representative agents for plotting, drawn once per seed.
  RngStream pick(cfg.sampler.seed, StreamTag::kData, 2, 0);
  std::vector<std::size_t> ids(cfg.n_agents);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  std::vector<SummaryRow> reference;
  const std::size_t n_pick = std::min<std::size_t>(3, ids.size());
  for (std::size_t j = 0; j < n_pick; ++j) {
    std::swap(ids[j], ids[pick.uniform_index(j, ids.size() - 1)]);
  }
  std::sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_pick));
  for (std::size_t j = 0; j < n_pick; ++j) {
    reference.push_back({"reference", "representative_agent", static_cast<double>(ids[j])});
  }
  reference.push_back({"reference", "target_lower", lo});
  reference.push_back({"reference", "target_upper", hi});
  add_reference_rows(result, reference);
  return result;
}

ExperimentResult run_blr2d(const ExperimentConfig& cfg) {
  auto result = begin(cfg, Experiment::kBlr2d);
  const DataSet data = generate_blr_data(cfg.n_samples, cfg.sampler.seed);
  const Vector ols = fit_ols(data);
  result.reference_beta = ols;
  result.set = make_set(cfg, 2, ols);
  const auto potential = linreg_potential(data, cfg.n_agents, cfg.noise_var);
  const Vector truth = Vector::Ones(2);
  const Vector projected_truth = result.set.project(truth);

  execute(result, *potential, [&](const MixingMatrix* m, const std::string& label) {
    return std::make_unique<BlrCollector>(label, m == nullptr, result.set, projected_truth,
                                          result.config);
  });

  std::vector<SummaryRow> reference{
      {"reference", "ols0", ols[0]},
      {"reference", "ols1", ols[1]},
      {"reference", "ols_norm", ols.norm()},
      {"reference", "set_outer_radius", result.set.outer_radius()},
      {"reference", "projected_truth0", projected_truth[0]},
      {"reference", "projected_truth1", projected_truth[1]},
  };
  add_reference_rows(result, reference);
  return result;
}

ExperimentResult run_logreg(const ExperimentConfig& cfg) {
  auto result = begin(cfg, Experiment::kLogreg);
  const WdbcIngestion ingest = load_wdbc(cfg.dataset, cfg.standardize);
  result.notes.push_back(ingest.summary());
  DataSet train = ingest.data;
  DataSet eval = ingest.data;
  if (cfg.test_frac > 0.0) {
    auto [tr, te] = split_holdout(ingest.data, cfg.test_frac, cfg.sampler.seed);
    train = std::move(tr);
    eval = std::move(te);
  }
  if (cfg.sampler.batch > train.size() / cfg.n_agents) {
    throw InvalidArgument("batch exceeds the per-agent shard size " +
                          std::to_string(train.size() / cfg.n_agents));
  }
  const MleFit mle = fit_logreg_mle(train);
  if (!mle.converged) {
    result.notes.push_back("logistic MLE stopped after " + std::to_string(mle.iterations) +
                           " iterations with gradient norm " + fmt(mle.gradient_norm) +
                           " (data nearly separable)");
  }
  result.reference_beta = mle.beta;
  result.reference_accuracy = classification_accuracy(mle.beta, eval);
  result.set = make_set(cfg, train.n_features(), mle.beta);
  const auto potential = logreg_potential(train, cfg.n_agents);

  execute(result, *potential, [&](const MixingMatrix* m, const std::string& label) {
    return std::make_unique<LogregCollector>(label, m == nullptr, train.n_features(), eval,
                                             result.config);
  });

  std::vector<SummaryRow> reference{
      {"reference", "mle_accuracy", *result.reference_accuracy},
      {"reference", "mle_norm", mle.beta.norm()},
      {"reference", "mle_gradient_norm", mle.gradient_norm},
      {"reference", "set_outer_radius", result.set.outer_radius()},
      {"reference", "train_rows", static_cast<double>(train.size())},
      {"reference", "eval_rows", static_cast<double>(eval.size())},
  };
  add_reference_rows(result, reference);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::kSample1d: return run_sample1d(cfg);
    case Experiment::kBlr2d: return run_blr2d(cfg);
    case Experiment::kLogreg: return run_logreg(cfg);
    case Experiment::kValidateNetwork: break;
  }
  throw InvalidArgument("validate-network produces a report, not a run");
}

std::string validate_network(const ExperimentConfig& cfg) {
  if (cfg.topologies.empty()) throw InvalidArgument("topology: at least one topology required");
  std::ostringstream os;
  for (auto kind : cfg.topologies) {
    const auto m = mixing_matrix(build_graph(kind, cfg.n_agents), cfg.delta);
    const auto report = validate_mixing(m);
    os << "topology=" << to_string(kind) << " agents=" << cfg.n_agents << " delta=" << fmt(m.delta)
       << '\n';
    os << report.to_string();
    os << "rho=" << fmt(m.rho) << " spectral_gap=" << fmt(m.spectral_gap())
       << " lambda_N=" << fmt(m.lambda_min) << '\n';
    if (cfg.mu && cfg.l_smooth) {
      os << "eta_max=" << fmt(max_stepsize(*cfg.mu, *cfg.l_smooth, cfg.n_agents, cfg.sampler.gamma,
                                           m.lambda_min))
         << '\n';
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "chain,stat,value\n";
  for (const auto& r : rows) out += r.chain + "," + r.stat + "," + fmt(r.value) + "\n";
  return out;
}

std::string versions() {
  return std::string("depsgld ") + DEPSGLD_VERSION + ", eigen " + std::to_string(EIGEN_WORLD_VERSION) +
         "." + std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION);
}

std::string manifest_line(const ExperimentConfig& cfg, const ChainOutcome& o) {
  std::ostringstream os;
  os << "run=" << o.label << " experiment=" << to_string(cfg.experiment)
     << " seed=" << cfg.sampler.seed << " wall_seconds=" << fmt(o.wall_seconds)
     << " versions=\"" << versions() << "\" status=\"" << o.status << "\"";
  if (o.guard.eta_max) os << " eta_max=" << fmt(*o.guard.eta_max);
  if (o.guard.exceeded) os << " stepsize_guard=exceeded";
  os << '\n';
  return os.str();
}

void write_run(const std::filesystem::path& dir, const ExperimentConfig& cfg, const RunTrace& trace,
               const SampleTable& samples, const std::vector<SummaryRow>& summary,
               const ChainOutcome& outcome) {
  write_text_file(dir / "config.txt", cfg.to_key_values());
  trace.write_csv(dir / "trace.csv");
  samples.write_csv(dir / "samples.csv");
  write_text_file(dir / "summary.csv", summary_csv(summary));
  write_text_file(dir / "manifest.txt", manifest_line(cfg, outcome));
}

}  // namespace

void write_outputs(const ExperimentResult& result) {
  const auto& cfg = result.config;
  std::string manifest;
  for (const auto& run : result.runs) {
    write_run(cfg.out_dir / std::string(to_string(run.kind)), cfg, run.trace, run.samples,
              run.summary, run.outcome);
    manifest += manifest_line(cfg, run.outcome);
  }
  for (const auto& run : result.centralized) {
    write_run(cfg.out_dir / std::string(to_string(run.kind)), cfg, run.trace, run.samples,
              run.summary, run.outcome);
    manifest += manifest_line(cfg, run.outcome);
  }
  for (const auto& note : result.notes) manifest += "# " + note + "\n";
  write_text_file(cfg.out_dir / "config.txt", cfg.to_key_values());
  write_text_file(cfg.out_dir / "manifest.txt", manifest);
}

}  // namespace depsgld
