#include "depsgld/samplers.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "depsgld/error.hpp"
#include "depsgld/parallel.hpp"
#include "depsgld/trace.hpp"

namespace depsgld {

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kDepsgld: return "depsgld";
    case SamplerKind::kPsgld: return "psgld";
    case SamplerKind::kPla: return "pla";
    case SamplerKind::kPlmc: return "plmc";
    case SamplerKind::kSgld: return "sgld";
  }
  return "unknown";
}

SamplerKind parse_sampler(std::string_view name) {
  for (auto kind : {SamplerKind::kDepsgld, SamplerKind::kPsgld, SamplerKind::kPla,
                    SamplerKind::kPlmc, SamplerKind::kSgld}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown sampler '" + std::string(name) +
                        "' (expected depsgld|psgld|pla|plmc|sgld)");
}

std::string_view to_string(InitMode mode) {
  return mode == InitMode::kZero ? "zero" : "uniform-in-K";
}

InitMode parse_init(std::string_view name) {
  if (name == "zero") return InitMode::kZero;
  if (name == "uniform-in-K" || name == "uniform-in-k") return InitMode::kUniformInK;
  throw InvalidArgument("unknown init '" + std::string(name) + "' (expected zero|uniform-in-K)");
}

void SamplerConfig::validate() const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be finite and >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  if (iterations == 0) throw InvalidArgument("iterations must be positive");
  if (batch == 0) throw InvalidArgument("batch must be positive");
  if (n_chains == 0) throw InvalidArgument("chains must be positive");
  if (record_every == 0) throw InvalidArgument("record-every must be positive");
}

NetworkState make_network_state(std::size_t n_agents, std::size_t dim, const SamplerConfig& cfg,
                                std::size_t replica, const ConvexSet& set, StreamTag tag) {
  NetworkState state;
  state.agents = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n_agents));
  state.streams.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) state.streams.emplace_back(cfg.seed, tag, replica, i);
  if (cfg.init == InitMode::kUniformInK) {
    for (std::size_t i = 0; i < n_agents; ++i) {
      RngStream init(cfg.seed, StreamTag::kInitialization, replica,
                     i + (tag == StreamTag::kCentralized ? (1ULL << 32) : 0));
      state.agents.col(static_cast<Eigen::Index>(i)) = set.sample_uniform(init);
    }
  }
  return state;
}

double regularized_smoothness(double l_smooth, std::size_t n_agents, double gamma) {
  return l_smooth + 2.0 / (static_cast<double>(n_agents) * gamma);
}

double max_stepsize(double mu, double l_smooth, std::size_t n_agents, double gamma,
                    double lambda_min_w) {
  if (!(mu > 0.0) || !(l_smooth >= mu) || !(gamma > 0.0) || n_agents == 0) {
    throw InvalidArgument("max_stepsize needs mu > 0, l_smooth >= mu, gamma > 0, N >= 1");
  }
  if (!(lambda_min_w > -1.0 && lambda_min_w <= 1.0)) {
    throw InvalidArgument("max_stepsize needs lambda_min(W) in (-1, 1]");
  }
  const double lg = regularized_smoothness(l_smooth, n_agents, gamma);
  const double n = static_cast<double>(n_agents);
  return std::min({2.0 * n / lg, (1.0 + lambda_min_w) / lg, 1.0 / (lg + mu)});
}

StepsizeGuard check_stepsize(const Potential& p, std::size_t n_agents, double lambda_min_w,
                             const SamplerConfig& cfg) {
  StepsizeGuard guard;
  if (!p.mu() || !p.l_smooth() || !(*p.l_smooth() >= *p.mu())) {
    guard.message = "stepsize guard skipped: strong convexity constant unknown";
    return guard;
  }
  guard.eta_max = max_stepsize(*p.mu(), *p.l_smooth(), n_agents, cfg.gamma, lambda_min_w);
  guard.exceeded = !(cfg.eta < *guard.eta_max);
  std::ostringstream os;
  os.precision(6);
  os << "eta = " << cfg.eta << (guard.exceeded ? " is not below" : " is below") << " eta_max = "
     << *guard.eta_max;
  guard.message = os.str();
  if (guard.exceeded && cfg.strict_stepsize) throw InvalidArgument(guard.message);
  return guard;
}

void advance_depsgld(NetworkState& state, const MixingMatrix& w, const Potential& p,
                     const ConvexSet& set, const SamplerConfig& cfg) {
  const std::size_t n = state.n_agents();
  if (w.size() != n) {
    throw InvalidArgument("mixing matrix is " + std::to_string(w.size()) + "x" +
                          std::to_string(w.size()) + " but the network has " + std::to_string(n) +
                          " agents");
  }
  if (p.dim() != state.dim() || set.dim() != state.dim()) {
    throw InvalidArgument("state, potential and constraint dimensions disagree");
  }
  const auto d = static_cast<Eigen::Index>(state.dim());
  const Matrix prev = state.agents;
  const double prox_weight = 1.0 / (static_cast<double>(n) * cfg.gamma);
  const double noise_scale = std::sqrt(2.0 * cfg.eta);
  Vector grad(d), proj(d), noise(d), mixed(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    mixed.setZero();
    for (std::size_t j : w.neighbors[i]) {
      mixed += w.w(col, static_cast<Eigen::Index>(j)) * prev.col(static_cast<Eigen::Index>(j));
    }
    p.stochastic_gradient(i, prev.col(col), cfg.batch, state.streams[i], grad);
    set.project_into(prev.col(col), proj);
    if (cfg.noise == NoiseMode::kGaussian) {
      state.streams[i].fill_normal(noise);
    } else {
      noise.setZero();
    }
    state.agents.col(col) =
        mixed - cfg.eta * (grad + prox_weight * (prev.col(col) - proj)) + noise_scale * noise;
  }
  ++state.iteration;
}

NetworkState depsgld_step(NetworkState state, const MixingMatrix& w, const Potential& p,
                          const ConvexSet& set, const SamplerConfig& cfg) {
  advance_depsgld(state, w, p, set, cfg);
  return state;
}

namespace {

void draw_noise(RngStream& rng, const SamplerConfig& cfg, VectorRef out) {
  if (cfg.noise == NoiseMode::kGaussian) {
    rng.fill_normal(out);
  } else {
    out.setZero();
  }
}

}  // namespace

Vector psgld_step(const ConstVectorRef& x, const Potential& p, const ConvexSet& set,
                  const SamplerConfig& cfg, RngStream& rng) {
  const auto d = x.size();
  Vector grad(d), proj(d), noise(d);
  p.stochastic_total_gradient(x, cfg.batch, rng, grad);
  set.project_into(x, proj);
  draw_noise(rng, cfg, noise);
  return x - cfg.eta * (grad + (x - proj) / cfg.gamma) + std::sqrt(2.0 * cfg.eta) * noise;
}

Vector pla_mean_chain_step(const ConstVectorRef& x, const Potential& p, const ConvexSet& set,
                           const SamplerConfig& cfg, std::size_t n_agents, RngStream& rng,
                           const ConstVectorRef& z) {
  if (n_agents == 0) throw InvalidArgument("PLA needs n_agents >= 1");
  const auto d = x.size();
  Vector grad(d), proj(d);
  p.stochastic_total_gradient(x, cfg.batch, rng, grad);
  set.project_into(x, proj);
  const double n = static_cast<double>(n_agents);
  return x - cfg.eta * (grad + (x - proj) / cfg.gamma) / n + std::sqrt(2.0 * cfg.eta / n) * z;
}

Vector pla_mean_chain_step(const ConstVectorRef& x, const Potential& p, const ConvexSet& set,
                           const SamplerConfig& cfg, std::size_t n_agents, RngStream& rng) {
  if (n_agents == 0) throw InvalidArgument("PLA needs n_agents >= 1");
  const auto d = x.size();
  Vector grad(d), proj(d), noise(d);
  p.stochastic_total_gradient(x, cfg.batch, rng, grad);
  set.project_into(x, proj);
  draw_noise(rng, cfg, noise);
  const double n = static_cast<double>(n_agents);
  return x - cfg.eta * (grad + (x - proj) / cfg.gamma) / n + std::sqrt(2.0 * cfg.eta / n) * noise;
}

Vector projected_lmc_step(const ConstVectorRef& x, const Potential& p, const ConvexSet& set,
                          const SamplerConfig& cfg, RngStream& rng) {
  const auto d = x.size();
  Vector grad(d), noise(d);
  p.stochastic_total_gradient(x, cfg.batch, rng, grad);
  draw_noise(rng, cfg, noise);
  const Vector moved = x - cfg.eta * grad + std::sqrt(2.0 * cfg.eta) * noise;
  return set.project(moved);
}

Vector sgld_step(const ConstVectorRef& x, const Potential& p, const SamplerConfig& cfg,
                 RngStream& rng) {
  const auto d = x.size();
  Vector grad(d), noise(d);
  p.stochastic_total_gradient(x, cfg.batch, rng, grad);
  draw_noise(rng, cfg, noise);
  return x - cfg.eta * grad + std::sqrt(2.0 * cfg.eta) * noise;
}

namespace {

constexpr double kDivergenceFactor = 1e8;

void ensure_finite(const NetworkState& state, std::size_t replica, std::string_view sampler,
                   double bound) {
  if (!state.agents.allFinite() || state.agents.cwiseAbs().maxCoeff() > bound) {
    throw NumericFailure(std::string(sampler) + " iterate became non-finite or left the ball of radius " +
                         format_double(bound) + " at iteration " +
                         std::to_string(state.iteration) + " (replica " + std::to_string(replica) +
                         "); the chain diverged");
  }
}

bool is_recorded(std::size_t k, const SamplerConfig& cfg) {
  return k % cfg.record_every == 0 || k == cfg.iterations;
}

template <class StepFn>
RunResult run_replicas(std::size_t n_agents, std::size_t dim, const ConvexSet& set,
                       const SamplerConfig& cfg, StreamTag tag, std::string_view sampler,
                       const StepFn& step, const BankObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.bank.reserve(cfg.n_chains);
  for (std::size_t r = 0; r < cfg.n_chains; ++r) {
    result.bank.push_back(make_network_state(n_agents, dim, cfg, r, set, tag));
  }
  const double bound = kDivergenceFactor * (1.0 + set.outer_radius());
  ThreadPool pool(cfg.threads);
  for (std::size_t k = 1; k <= cfg.iterations; ++k) {
    pool.parallel_for(0, cfg.n_chains, [&](std::size_t r) {
      step(result.bank[r]);
      ensure_finite(result.bank[r], r, sampler, bound);
    });
    if (observer && is_recorded(k, cfg)) observer(k, result.bank);
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

RunResult run_depsgld(const MixingMatrix& w, const Potential& p, const ConvexSet& set,
                      const SamplerConfig& cfg, const BankObserver& observer) {
  cfg.validate();
  const std::size_t n = w.size();
  if (p.n_agents() != n) {
    throw InvalidArgument("potential is sharded over " + std::to_string(p.n_agents()) +
                          " agents but the mixing matrix has " + std::to_string(n));
  }
  if (p.dim() != set.dim()) throw InvalidArgument("potential and constraint dimensions disagree");
  StepsizeGuard guard = check_stepsize(p, n, w.lambda_min, cfg);
  auto step = [&](NetworkState& s) { advance_depsgld(s, w, p, set, cfg); };
  RunResult result =
      run_replicas(n, p.dim(), set, cfg, StreamTag::kDecentralized, "DE-PSGLD", step, observer);
  result.guard = std::move(guard);
  return result;
}

RunResult run_centralized(SamplerKind kind, const Potential& p, const ConvexSet& set,
                          const SamplerConfig& cfg, std::size_t n_agents,
                          const BankObserver& observer) {
  cfg.validate();
  if (kind == SamplerKind::kDepsgld) {
    throw InvalidArgument("run_centralized: use run_depsgld for the decentralized sampler");
  }
  if (p.dim() != set.dim()) throw InvalidArgument("potential and constraint dimensions disagree");
  auto step = [&](NetworkState& s) {
    auto x = s.agents.col(0);
    RngStream& rng = s.streams[0];
    switch (kind) {
      case SamplerKind::kPsgld: x = psgld_step(x, p, set, cfg, rng); break;
      case SamplerKind::kPla: x = pla_mean_chain_step(x, p, set, cfg, n_agents, rng); break;
      case SamplerKind::kPlmc: x = projected_lmc_step(x, p, set, cfg, rng); break;
      case SamplerKind::kSgld: x = sgld_step(x, p, cfg, rng); break;
      case SamplerKind::kDepsgld: break;
    }
    ++s.iteration;
  };
  RunResult result =
      run_replicas(1, p.dim(), set, cfg, StreamTag::kCentralized, to_string(kind), step, observer);
  if (p.mu() && p.l_smooth() && *p.l_smooth() >= *p.mu()) {
    // Single node: W = [1], lambda_N = 1.
    result.guard = check_stepsize(p, 1, 1.0, cfg);
  }
  return result;
}

double regularized_gradient_sq_norm(const NetworkState& state, const Potential& p,
                                    const ConvexSet& set, double gamma) {
  const auto d = static_cast<Eigen::Index>(state.dim());
  const double prox_weight = 1.0 / (static_cast<double>(state.n_agents()) * gamma);
  Vector grad(d), proj(d);
  double total = 0.0;
  for (std::size_t i = 0; i < state.n_agents(); ++i) {
    const auto x = state.agents.col(static_cast<Eigen::Index>(i));
    p.gradient(i, x, grad);
    set.project_into(x, proj);
    total += (grad + prox_weight * (x - proj)).squaredNorm();
  }
  return total;
}

double consensus_bound(const ConsensusBoundInputs& in, std::size_t k) {
  if (!(in.rho < 1.0)) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(in.n_agents);
  const double d = static_cast<double>(in.dim);
  const double rho2k = std::pow(in.rho, 2.0 * static_cast<double>(k));
  const double gap = 1.0 - in.rho;
  const double gap2 = 1.0 - in.rho * in.rho;
  return 4.0 * rho2k * in.init_sq / n + 4.0 * in.eta * in.eta * in.grad_sq / (n * gap * gap) +
         4.0 * in.eta * in.eta * in.noise_sq / gap2 + 8.0 * in.eta * d / gap2;
}

}  // namespace depsgld
