#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depsgld/constraints.hpp"
#include "depsgld/linalg.hpp"
#include "depsgld/models.hpp"
#include "depsgld/rng.hpp"
#include "depsgld/topology.hpp"

namespace depsgld {

enum class SamplerKind { kDepsgld, kPsgld, kPla, kPlmc, kSgld };
std::string_view to_string(SamplerKind kind);
SamplerKind parse_sampler(std::string_view name);

/// kZero replaces every Gaussian draw by 0 (exactness tests only).
enum class NoiseMode { kGaussian, kZero };
enum class InitMode { kZero, kUniformInK };
std::string_view to_string(InitMode mode);
InitMode parse_init(std::string_view name);

struct SamplerConfig {
  double eta = 5e-4;
  double gamma = 3.3e-4;
  std::size_t iterations = 300;
  std::size_t batch = 1;
  std::size_t n_chains = 100;
  std::uint64_t seed = 1;
  std::size_t record_every = 1;
  NoiseMode noise = NoiseMode::kGaussian;
  InitMode init = InitMode::kZero;
  /// Worker threads for the replica loop; 0 = hardware concurrency.
  std::size_t threads = 1;
  /// Turn an exceeded stepsize guard into an InvalidArgument.
  bool strict_stepsize = false;

  void validate() const;
};

/// Iterates of all agents of one replica. Column i of `agents` is x_i.
struct NetworkState {
  Matrix agents;
  std::size_t iteration = 0;
  /// One stream per agent, used for the minibatch draw and then the Gaussian
  /// increment, in that order, every round.
  std::vector<RngStream> streams;

  std::size_t n_agents() const { return static_cast<std::size_t>(agents.cols()); }
  std::size_t dim() const { return static_cast<std::size_t>(agents.rows()); }
  Vector mean() const { return agents.rowwise().mean(); }
};

/// Fresh state for replica `replica`; streams are derived from
/// (cfg.seed, tag, replica, agent) and the initial iterate follows cfg.init.
NetworkState make_network_state(std::size_t n_agents, std::size_t dim, const SamplerConfig& cfg,
                                std::size_t replica, const ConvexSet& set,
                                StreamTag tag = StreamTag::kDecentralized);

/// L_gamma = L + 2 / (N gamma).
double regularized_smoothness(double l_smooth, std::size_t n_agents, double gamma);

/// min{2N / L_gamma, (1 + lambda_N^W) / L_gamma, 1 / (L_gamma + mu)}.
double max_stepsize(double mu, double l_smooth, std::size_t n_agents, double gamma,
                    double lambda_min_w);

struct StepsizeGuard {
  std::optional<double> eta_max;
  bool exceeded = false;
  std::string message;
};

/// Evaluates the guard when the potential carries both mu and l_smooth.
StepsizeGuard check_stepsize(const Potential& p, std::size_t n_agents, double lambda_min_w,
                             const SamplerConfig& cfg);

/// One synchronous round, in place: every agent mixes the previous iterates
/// of its neighbors and takes a gradient + proximal step at its own previous
/// iterate, plus sqrt(2 eta) Gaussian noise from its stream.
void advance_depsgld(NetworkState& state, const MixingMatrix& w, const Potential& p,
                     const ConvexSet& set, const SamplerConfig& cfg);
NetworkState depsgld_step(NetworkState state, const MixingMatrix& w, const Potential& p,
                          const ConvexSet& set, const SamplerConfig& cfg);

/// Centralized Moreau-Yosida SGLD: x - eta (g + (x - P x) / gamma) + sqrt(2 eta) w,
/// g a minibatch estimate of grad f over all data.
Vector psgld_step(const ConstVectorRef& x, const Potential& p, const ConvexSet& set,
                  const SamplerConfig& cfg, RngStream& rng);

/// Proximal Langevin step on the mean-chain potential (f + q) / N with noise
/// variance 2 eta / N. The overload taking z uses it as the standard normal
/// increment, for coupling with a DE-PSGLD mean chain via z = sqrt(N) w_bar.
Vector pla_mean_chain_step(const ConstVectorRef& x, const Potential& p, const ConvexSet& set,
                           const SamplerConfig& cfg, std::size_t n_agents, RngStream& rng);
Vector pla_mean_chain_step(const ConstVectorRef& x, const Potential& p, const ConvexSet& set,
                           const SamplerConfig& cfg, std::size_t n_agents, RngStream& rng,
                           const ConstVectorRef& z);

/// P_K(x - eta g + sqrt(2 eta) w).
Vector projected_lmc_step(const ConstVectorRef& x, const Potential& p, const ConvexSet& set,
                          const SamplerConfig& cfg, RngStream& rng);

/// x - eta g + sqrt(2 eta) w.
Vector sgld_step(const ConstVectorRef& x, const Potential& p, const SamplerConfig& cfg,
                 RngStream& rng);

/// Called after every recorded round with the states of all replicas.
using BankObserver = std::function<void(std::size_t iteration, std::span<const NetworkState> bank)>;

struct RunResult {
  std::vector<NetworkState> bank;
  StepsizeGuard guard;
  double wall_seconds = 0.0;
};

/// n_chains independent replicas of cfg.iterations DE-PSGLD rounds. The
/// observer sees iterations k with k % record_every == 0 and the last one.
/// Throws NumericFailure as soon as any iterate is non-finite or leaves the ball of radius
/// 1e8 (1 + R), R the outer radius of the constraint set.
RunResult run_depsgld(const MixingMatrix& w, const Potential& p, const ConvexSet& set,
                      const SamplerConfig& cfg, const BankObserver& observer = {});

/// Same replica machinery for a centralized sampler; each state holds one
/// chain. n_agents only enters the PLA scaling.
RunResult run_centralized(SamplerKind kind, const Potential& p, const ConvexSet& set,
                          const SamplerConfig& cfg, std::size_t n_agents = 1,
                          const BankObserver& observer = {});

/// ||grad U^gamma(x)||^2 for the stacked iterate: sum_i ||grad f_i(x_i) + (x_i - P x_i)/(N gamma)||^2.
double regularized_gradient_sq_norm(const NetworkState& state, const Potential& p,
                                    const ConvexSet& set, double gamma);

/// Right-hand side of the consensus bound
/// 4 rho^{2k} E||x0||^2 / N + 4 eta^2 G^2 / (N (1 - rho)^2)
///   + 4 eta^2 sigma^2 / (1 - rho^2) + 8 eta d / (1 - rho^2).
struct ConsensusBoundInputs {
  double rho = 0.0;
  double eta = 0.0;
  std::size_t dim = 1;
  std::size_t n_agents = 1;
  double init_sq = 0.0;   ///< E||x^(0)||^2 of the stacked iterate
  double grad_sq = 0.0;   ///< sup_k E||grad U^gamma(x^(k))||^2
  double noise_sq = 0.0;  ///< gradient-noise second moment
};
double consensus_bound(const ConsensusBoundInputs& in, std::size_t k);

}  // namespace depsgld
