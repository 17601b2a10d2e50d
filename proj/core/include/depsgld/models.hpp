#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "depsgld/data.hpp"
#include "depsgld/linalg.hpp"
#include "depsgld/rng.hpp"

namespace depsgld {

/// Sharded potential f = sum_i f_i. Agent i only ever evaluates its own
/// component f_i. Implementations are immutable and thread-safe; all
/// randomness comes from the caller's stream.
class Potential {
 public:
  virtual ~Potential() = default;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t n_agents() const noexcept { return n_agents_; }

  virtual double value(std::size_t agent, const ConstVectorRef& x) const = 0;
  virtual void gradient(std::size_t agent, const ConstVectorRef& x, VectorRef out) const = 0;

  /// Observations held by the agent; 0 for potentials without data, whose
  /// stochastic gradient is the exact gradient.
  virtual std::size_t shard_size(std::size_t /*agent*/) const { return 0; }
  /// Observations across all shards.
  virtual std::size_t data_size() const { return 0; }

  /// Unbiased minibatch estimate of grad f_i: (n_i / batch) times the sum of
  /// per-observation gradients over a uniform draw without replacement.
  /// batch == n_i returns the exact gradient.
  virtual void stochastic_gradient(std::size_t agent, const ConstVectorRef& x, std::size_t batch,
                                   RngStream& rng, VectorRef out) const;
  /// Same estimator for grad f, drawing the minibatch from all observations.
  virtual void stochastic_total_gradient(const ConstVectorRef& x, std::size_t batch,
                                         RngStream& rng, VectorRef out) const;

  double total_value(const ConstVectorRef& x) const;
  void total_gradient(const ConstVectorRef& x, VectorRef out) const;
  Vector total_gradient(const ConstVectorRef& x) const;
  Vector gradient(std::size_t agent, const ConstVectorRef& x) const;

  /// Strong convexity / smoothness of every component when known.
  std::optional<double> mu() const noexcept { return mu_; }
  std::optional<double> l_smooth() const noexcept { return l_smooth_; }
  /// Bound on E||stochastic - exact||^2 when analytic (0 for exact gradients).
  std::optional<double> noise_sigma2() const noexcept { return noise_sigma2_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  virtual std::string name() const = 0;

 protected:
  Potential(std::size_t dim, std::size_t n_agents);
  void check_agent(std::size_t agent) const;
  void check_point(const ConstVectorRef& x) const;

  std::optional<double> mu_;
  std::optional<double> l_smooth_;
  std::optional<double> noise_sigma2_;
  std::vector<std::string> warnings_;

 private:
  std::size_t dim_;
  std::size_t n_agents_;
};

/// f(x) = x^2/2 + x^4/8 - x on the real line, split evenly: f_i = f / N.
std::shared_ptr<const Potential> quartic_1d(std::size_t n_agents = 1);

/// f_i(x) = (a_i / 2) ||x - c_i||^2. The sum is a Gaussian potential with
/// precision sum(a_i) and mean sum(a_i c_i) / sum(a_i); mu = min a_i and
/// l_smooth = max a_i.
std::shared_ptr<const Potential> quadratic_shards(std::vector<double> weights,
                                                  std::vector<Vector> centers);

/// Least squares with known noise variance:
/// f_i(b) = 1/(2 noise_var) sum_{j in shard i} (y_j - b^T x_j)^2.
/// Shards are contiguous blocks, agent 0 first. When n is not divisible by
/// n_agents the trailing rows are dropped with a warning.
std::shared_ptr<const Potential> linreg_potential(const DataSet& data, std::size_t n_agents,
                                                  double noise_var);

/// Logistic negative log-likelihood f_i(b) = sum_j log(1 + e^{x_j^T b}) - y_j x_j^T b.
/// mu is unset (not strongly convex); l_smooth = max_i lambda_max(X_i^T X_i) / 4.
std::shared_ptr<const Potential> logreg_potential(const DataSet& data, std::size_t n_agents);

/// Monte-Carlo estimate of max_i E||stochastic_gradient_i(x) - grad f_i(x)||^2.
double estimate_gradient_noise(const Potential& p, const ConstVectorRef& x, std::size_t batch,
                               std::size_t draws, RngStream& rng);

}  // namespace depsgld
