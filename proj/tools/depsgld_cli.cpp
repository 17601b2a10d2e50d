// depsgld: run the sampling experiments and inspect gossip networks.
//
// Exit codes: 0 ok, 2 invalid configuration, 3 data error, 4 numeric failure.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "depsgld/error.hpp"
#include "depsgld/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct Flags {
  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;
  std::string config;
};

void add_value(CLI::App* cmd, Flags& flags, const std::string& key, const std::string& help) {
  cmd->add_option("--" + key, flags.values[key], help);
}

void add_switch(CLI::App* cmd, Flags& flags, const std::string& key, const std::string& help) {
  cmd->add_flag("--" + key, flags.switches[key], help);
}

void add_common(CLI::App* cmd, Flags& flags) {
  add_value(cmd, flags, "topology", "complete|ring|star|disconnected|all, or a comma list");
  add_value(cmd, flags, "agents", "number of agents N");
  add_value(cmd, flags, "delta", "Laplacian step in W = I - delta L (default 1/lambda_max)");
  add_value(cmd, flags, "set", "constraint set: box|l2|l1");
  add_value(cmd, flags, "radius", "ball radius (default derived from the experiment)");
  add_value(cmd, flags, "bounds", "box bounds lo,hi");
  add_value(cmd, flags, "gamma", "Moreau-Yosida parameter");
  add_value(cmd, flags, "eta", "step size");
  add_value(cmd, flags, "iters", "iterations per chain");
  add_value(cmd, flags, "chains", "independent replicas");
  add_value(cmd, flags, "batch", "minibatch size per agent");
  add_value(cmd, flags, "seed", "master seed");
  add_value(cmd, flags, "record-every", "record metrics every n iterations");
  add_value(cmd, flags, "sampler", "depsgld|psgld|pla|plmc|sgld, or a comma list");
  add_value(cmd, flags, "init", "zero|uniform-in-K");
  add_value(cmd, flags, "n-samples", "synthetic observations (blr)");
  add_value(cmd, flags, "noise-var", "likelihood noise variance (blr)");
  add_value(cmd, flags, "data", "WDBC file (logreg)");
  add_value(cmd, flags, "test-frac", "held-out fraction for accuracy (logreg)");
  add_value(cmd, flags, "burnin", "first retained iteration (default iters/2)");
  add_value(cmd, flags, "dump-every", "sample dump stride after burn-in (blr)");
  add_value(cmd, flags, "dump-agent", "agent whose retained draws are summarized (blr)");
  add_value(cmd, flags, "mu", "strong convexity for the eta_max report");
  add_value(cmd, flags, "lsmooth", "smoothness for the eta_max report");
  add_value(cmd, flags, "out", "output directory");
  add_value(cmd, flags, "threads", "worker threads (0 = all cores)");
  add_switch(cmd, flags, "no-standardize", "keep raw WDBC feature scales");
  add_switch(cmd, flags, "predictive", "also record posterior-predictive accuracy");
  add_switch(cmd, flags, "strict-stepsize", "reject eta above the stepsize guard");
  cmd->add_option("--config", flags.config, "key=value file; flags override it");
}

depsgld::ExperimentConfig resolve(depsgld::Experiment e, const Flags& flags) {
  auto cfg = depsgld::ExperimentConfig::defaults(e);
  if (!flags.config.empty()) cfg.apply_file(flags.config);
  for (const auto& [key, value] : flags.values) {
    if (!value.empty()) cfg.apply(key, value);
  }
  for (const auto& [key, on] : flags.switches) {
    if (on) cfg.apply(key, "true");
  }
  return cfg;
}

int run(depsgld::Experiment e, const Flags& flags) {
  const auto cfg = resolve(e, flags);
  if (e == depsgld::Experiment::kValidateNetwork) {
    std::cout << depsgld::validate_network(cfg);
    return kExitOk;
  }
  const auto result = depsgld::run_experiment(cfg);
  depsgld::write_outputs(result);
  for (const auto& note : result.notes) std::cerr << "warning: " << note << '\n';
  for (const auto& r : result.runs) {
    std::cout << r.outcome.label << ": " << r.outcome.status << '\n';
  }
  for (const auto& r : result.centralized) {
    std::cout << r.outcome.label << ": " << r.outcome.status << '\n';
  }
  std::cout << "outputs in " << cfg.out_dir.string() << '\n';
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized proximal stochastic gradient Langevin sampler"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DEPSGLD_VERSION);

  const std::vector<std::pair<depsgld::Experiment, std::string>> commands = {
      {depsgld::Experiment::kSample1d, "1-D quartic target on [-1, 1]"},
      {depsgld::Experiment::kBlr2d, "Bayesian linear regression in an l2 ball"},
      {depsgld::Experiment::kLogreg, "Bayesian logistic regression on WDBC"},
      {depsgld::Experiment::kValidateNetwork, "print mixing-matrix diagnostics"},
  };
  std::vector<Flags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    subs.push_back(app.add_subcommand(std::string(depsgld::to_string(commands[i].first)),
                                      commands[i].second));
    add_common(subs.back(), flags[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return run(commands[i].first, flags[i]);
    }
  } catch (const depsgld::InvalidArgument& e) {
    std::cerr << "error: invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const depsgld::DataError& e) {
    std::cerr << "error: data: " << e.what() << '\n';
    return kExitData;
  } catch (const depsgld::NumericFailure& e) {
    std::cerr << "error: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}
