#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "depsgld/error.hpp"
#include "depsgld/harness.hpp"

#ifndef DEPSGLD_DEFAULT_WDBC_PATH
#define DEPSGLD_DEFAULT_WDBC_PATH "data/wdbc.data"
#endif

namespace depsgld {

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kSample1d: return "sample-1d";
    case Experiment::kBlr2d: return "blr";
    case Experiment::kLogreg: return "logreg";
    case Experiment::kValidateNetwork: return "validate-network";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::kSample1d, Experiment::kBlr2d, Experiment::kLogreg,
                 Experiment::kValidateNetwork}) {
    if (to_string(e) == name) return e;
  }
  throw InvalidArgument("unknown experiment '" + std::string(name) +
                        "' (expected sample-1d|blr|logreg|validate-network)");
}

std::string_view to_string(SetKind kind) {
  switch (kind) {
    case SetKind::kBox: return "box";
    case SetKind::kL2: return "l2";
    case SetKind::kL1: return "l1";
  }
  return "unknown";
}

SetKind parse_set_kind(std::string_view name) {
  if (name == "box") return SetKind::kBox;
  if (name == "l2") return SetKind::kL2;
  if (name == "l1") return SetKind::kL1;
  throw InvalidArgument("unknown constraint set '" + std::string(name) + "' (expected box|l2|l1)");
}

ExperimentConfig ExperimentConfig::defaults(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.out_dir = std::filesystem::path("runs") / std::string(to_string(e));
  c.dataset = DEPSGLD_DEFAULT_WDBC_PATH;
  switch (e) {
    case Experiment::kSample1d:
    case Experiment::kValidateNetwork:
      c.n_agents = 30;
      c.sampler.eta = 5e-4;
      c.sampler.gamma = 3.3e-4;
      c.sampler.iterations = 300;
      c.sampler.n_chains = 100;
      c.sampler.batch = 1;
      c.set = SetKind::kBox;
      c.bounds = std::make_pair(-1.0, 1.0);
      break;
    case Experiment::kBlr2d:
      c.n_agents = 20;
      c.n_samples = 10000;
      c.sampler.batch = 100;
      c.sampler.iterations = 500;
      c.sampler.gamma = 5e-5;
      c.sampler.eta = 5e-4;
      c.sampler.n_chains = 300;
      c.set = SetKind::kL2;
      c.noise_var = 0.25;
      break;
    case Experiment::kLogreg:
      c.n_agents = 5;
      c.sampler.iterations = 1000;
      c.sampler.batch = 10;
      c.sampler.eta = 0.005;
      c.sampler.gamma = 0.16;
      c.sampler.n_chains = 1000;
      c.set = SetKind::kL2;
      break;
  }
  return c;
}

namespace {

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw InvalidArgument("setting '" + std::string(key) + "' expects a number, got '" +
                          std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw InvalidArgument("setting '" + std::string(key) + "' expects a non-negative integer, got '" +
                          std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("setting '" + std::string(key) + "' expects true|false, got '" +
                        std::string(v) + "'");
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = v.find(',', start);
    out.push_back(v.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

void ExperimentConfig::apply(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "experiment") {
    experiment = parse_experiment(value);
  } else if (key == "topology") {
    topologies.clear();
    if (value == "all") {
      topologies = all_topologies();
    } else {
      for (auto name : split_list(value)) topologies.push_back(parse_topology(trim(name)));
    }
  } else if (key == "agents") {
    n_agents = parse_u64(key, value);
  } else if (key == "delta") {
    if (value == "default") {
      delta.reset();
    } else {
      delta = parse_double(key, value);
    }
  } else if (key == "set") {
    set = parse_set_kind(value);
  } else if (key == "radius") {
    if (value == "auto") {
      radius.reset();
    } else {
      radius = parse_double(key, value);
    }
  } else if (key == "bounds") {
    if (value == "auto") {
      bounds.reset();
    } else {
      const auto parts = split_list(value);
      if (parts.size() != 2) throw InvalidArgument("bounds expects 'lo,hi'");
      bounds = std::make_pair(parse_double(key, trim(parts[0])), parse_double(key, trim(parts[1])));
    }
  } else if (key == "gamma") {
    sampler.gamma = parse_double(key, value);
  } else if (key == "eta") {
    sampler.eta = parse_double(key, value);
  } else if (key == "iters") {
    sampler.iterations = parse_u64(key, value);
  } else if (key == "chains") {
    sampler.n_chains = parse_u64(key, value);
  } else if (key == "batch") {
    sampler.batch = parse_u64(key, value);
  } else if (key == "seed") {
    sampler.seed = parse_u64(key, value);
  } else if (key == "record-every") {
    sampler.record_every = parse_u64(key, value);
  } else if (key == "sampler") {
    samplers.clear();
    for (auto name : split_list(value)) {
      const auto kind = parse_sampler(trim(name));
      if (std::find(samplers.begin(), samplers.end(), kind) == samplers.end()) samplers.push_back(kind);
    }
  } else if (key == "init") {
    sampler.init = parse_init(value);
  } else if (key == "threads") {
    sampler.threads = parse_u64(key, value);
  } else if (key == "strict-stepsize") {
    sampler.strict_stepsize = parse_bool(key, value);
  } else if (key == "n-samples") {
    n_samples = parse_u64(key, value);
  } else if (key == "noise-var") {
    noise_var = parse_double(key, value);
  } else if (key == "data") {
    dataset = std::string(value);
  } else if (key == "standardize") {
    standardize = parse_bool(key, value);
  } else if (key == "no-standardize") {
    standardize = !parse_bool(key, value);
  } else if (key == "test-frac") {
    test_frac = parse_double(key, value);
  } else if (key == "burnin") {
    burnin = parse_u64(key, value);
  } else if (key == "dump-every") {
    dump_every = parse_u64(key, value);
  } else if (key == "dump-agent") {
    dump_agent = parse_u64(key, value);
  } else if (key == "predictive") {
    predictive = parse_bool(key, value);
  } else if (key == "out") {
    out_dir = std::string(value);
  } else if (key == "mu") {
    mu = parse_double(key, value);
  } else if (key == "lsmooth") {
    l_smooth = parse_double(key, value);
  } else {
    throw InvalidArgument("unknown setting '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + " is not key=value");
    }
    out.emplace_back(std::string(trim(view.substr(0, eq))), std::string(trim(view.substr(eq + 1))));
  }
  return out;
}

void ExperimentConfig::apply_file(const std::filesystem::path& path) {
  for (const auto& [k, v] : read_key_values(path)) apply(k, v);
}

void ExperimentConfig::validate() const {
  sampler.validate();
  if (topologies.empty()) throw InvalidArgument("topology: at least one topology required");
  for (auto kind : topologies) build_graph(kind, n_agents);  // throws on too few agents
  if (delta && !(*delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (samplers.empty()) throw InvalidArgument("sampler: at least one sampler required");
  if (radius && !(*radius > 0.0)) throw InvalidArgument("radius must be positive");
  if (bounds && !(bounds->first < bounds->second)) throw InvalidArgument("bounds need lo < hi");
  if (!(noise_var > 0.0)) throw InvalidArgument("noise-var must be positive");
  if (!(test_frac >= 0.0 && test_frac < 1.0)) throw InvalidArgument("test-frac must lie in [0, 1)");
  if (dump_every == 0) throw InvalidArgument("dump-every must be positive");
  if (dump_agent >= n_agents) throw InvalidArgument("dump-agent must be below agents");
  if (effective_burnin() >= sampler.iterations) {
    throw InvalidArgument("burnin must be below iters");
  }
  if (experiment == Experiment::kBlr2d && n_samples < n_agents) {
    throw InvalidArgument("n-samples must be at least the number of agents");
  }
  if (experiment == Experiment::kBlr2d && sampler.batch > n_samples / n_agents) {
    throw InvalidArgument("batch exceeds the per-agent shard size " +
                          std::to_string(n_samples / n_agents));
  }
  if (experiment == Experiment::kSample1d && set == SetKind::kBox && !bounds) {
    throw InvalidArgument("sample-1d with set=box needs bounds");
  }
}

std::string ExperimentConfig::to_key_values() const {
  std::ostringstream os;
  os << "experiment=" << to_string(experiment) << '\n';
  os << "topology=";
  for (std::size_t i = 0; i < topologies.size(); ++i) os << (i ? "," : "") << to_string(topologies[i]);
  os << '\n';
  os << "agents=" << n_agents << '\n';
  os << "delta=" << (delta ? fmt(*delta) : "default") << '\n';
  os << "sampler=";
  for (std::size_t i = 0; i < samplers.size(); ++i) os << (i ? "," : "") << to_string(samplers[i]);
  os << '\n';
  os << "eta=" << fmt(sampler.eta) << '\n';
  os << "gamma=" << fmt(sampler.gamma) << '\n';
  os << "iters=" << sampler.iterations << '\n';
  os << "chains=" << sampler.n_chains << '\n';
  os << "batch=" << sampler.batch << '\n';
  os << "seed=" << sampler.seed << '\n';
  os << "record-every=" << sampler.record_every << '\n';
  os << "init=" << to_string(sampler.init) << '\n';
  os << "strict-stepsize=" << (sampler.strict_stepsize ? "true" : "false") << '\n';
  os << "set=" << to_string(set) << '\n';
  os << "radius=" << (radius ? fmt(*radius) : "auto") << '\n';
  os << "bounds=" << (bounds ? fmt(bounds->first) + "," + fmt(bounds->second) : "auto") << '\n';
  os << "n-samples=" << n_samples << '\n';
  os << "noise-var=" << fmt(noise_var) << '\n';
  os << "data=" << dataset.string() << '\n';
  os << "standardize=" << (standardize ? "true" : "false") << '\n';
  os << "test-frac=" << fmt(test_frac) << '\n';
  os << "burnin=" << effective_burnin() << '\n';
  os << "dump-every=" << dump_every << '\n';
  os << "dump-agent=" << dump_agent << '\n';
  os << "predictive=" << (predictive ? "true" : "false") << '\n';
  os << "out=" << out_dir.string() << '\n';
  if (mu) os << "mu=" << fmt(*mu) << '\n';
  if (l_smooth) os << "lsmooth=" << fmt(*l_smooth) << '\n';
  return os.str();
}

}  // namespace depsgld
