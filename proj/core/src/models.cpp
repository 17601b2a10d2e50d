#include "depsgld/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "depsgld/error.hpp"

namespace depsgld {

Potential::Potential(std::size_t dim, std::size_t n_agents) : dim_(dim), n_agents_(n_agents) {
  if (dim == 0) throw InvalidArgument("potential dimension must be positive");
  if (n_agents == 0) throw InvalidArgument("potential needs at least one agent");
}

void Potential::check_agent(std::size_t agent) const {
  if (agent >= n_agents_) {
    throw InvalidArgument("agent " + std::to_string(agent) + " out of range (N = " +
                          std::to_string(n_agents_) + ")");
  }
}

void Potential::check_point(const ConstVectorRef& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) +
                          ", potential has dimension " + std::to_string(dim_));
  }
}

void Potential::stochastic_gradient(std::size_t agent, const ConstVectorRef& x, std::size_t batch,
                                    RngStream& /*rng*/, VectorRef out) const {
  if (batch == 0) throw InvalidArgument("minibatch size must be positive");
  gradient(agent, x, out);
}

void Potential::stochastic_total_gradient(const ConstVectorRef& x, std::size_t batch,
                                          RngStream& /*rng*/, VectorRef out) const {
  if (batch == 0) throw InvalidArgument("minibatch size must be positive");
  total_gradient(x, out);
}

double Potential::total_value(const ConstVectorRef& x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < n_agents_; ++i) total += value(i, x);
  return total;
}

void Potential::total_gradient(const ConstVectorRef& x, VectorRef out) const {
  Vector g(x.size());
  out.setZero();
  for (std::size_t i = 0; i < n_agents_; ++i) {
    gradient(i, x, g);
    out += g;
  }
}

Vector Potential::total_gradient(const ConstVectorRef& x) const {
  Vector out(x.size());
  total_gradient(x, out);
  return out;
}

Vector Potential::gradient(std::size_t agent, const ConstVectorRef& x) const {
  Vector out(x.size());
  gradient(agent, x, out);
  return out;
}

namespace {

class Quartic1D final : public Potential {
 public:
  explicit Quartic1D(std::size_t n_agents) : Potential(1, n_agents) { noise_sigma2_ = 0.0; }

  double value(std::size_t agent, const ConstVectorRef& x) const override {
    check_agent(agent);
    check_point(x);
    const double v = x[0];
    return (0.5 * v * v + 0.125 * v * v * v * v - v) / static_cast<double>(n_agents());
  }

  void gradient(std::size_t agent, const ConstVectorRef& x, VectorRef out) const override {
    check_agent(agent);
    check_point(x);
    const double v = x[0];
    out[0] = (v + 0.5 * v * v * v - 1.0) / static_cast<double>(n_agents());
  }

  std::string name() const override { return "quartic_1d"; }
};

class QuadraticShards final : public Potential {
 public:
  QuadraticShards(std::vector<double> weights, std::vector<Vector> centers)
      : Potential(centers.empty() ? 0 : static_cast<std::size_t>(centers.front().size()),
                  weights.size()),
        weights_(std::move(weights)),
        centers_(std::move(centers)) {
    if (weights_.size() != centers_.size()) {
      throw InvalidArgument("quadratic_shards: one center per weight required");
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!(weights_[i] > 0.0)) throw InvalidArgument("quadratic_shards: weights must be positive");
      if (static_cast<std::size_t>(centers_[i].size()) != dim()) {
        throw InvalidArgument("quadratic_shards: centers must share one dimension");
      }
    }
    mu_ = *std::min_element(weights_.begin(), weights_.end());
    l_smooth_ = *std::max_element(weights_.begin(), weights_.end());
    noise_sigma2_ = 0.0;
  }

  double value(std::size_t agent, const ConstVectorRef& x) const override {
    check_agent(agent);
    check_point(x);
    return 0.5 * weights_[agent] * (x - centers_[agent]).squaredNorm();
  }

  void gradient(std::size_t agent, const ConstVectorRef& x, VectorRef out) const override {
    check_agent(agent);
    check_point(x);
    out = weights_[agent] * (x - centers_[agent]);
  }

  std::string name() const override { return "quadratic_shards"; }

 private:
  std::vector<double> weights_;
  std::vector<Vector> centers_;
};

/// Generalized linear model: f_i(b) = sum_j loss(x_j^T b, y_j).
class GlmPotential : public Potential {
 public:
  GlmPotential(const DataSet& data, std::size_t n_agents)
      : Potential(data.n_features(), n_agents) {
    if (data.size() < n_agents) {
      throw InvalidArgument("dataset has " + std::to_string(data.size()) +
                            " rows, fewer than the " + std::to_string(n_agents) + " agents");
    }
    per_shard_ = data.size() / n_agents;
    const std::size_t used = per_shard_ * n_agents;
    if (used != data.size()) {
      warnings_.push_back("dropped " + std::to_string(data.size() - used) +
                          " trailing rows so that every agent holds " +
                          std::to_string(per_shard_) + " observations");
    }
    data_ = data.slice(0, used);
  }

  std::size_t shard_size(std::size_t agent) const override {
    check_agent(agent);
    return per_shard_;
  }
  std::size_t data_size() const override { return static_cast<std::size_t>(data_.size()); }

  double value(std::size_t agent, const ConstVectorRef& x) const override {
    check_agent(agent);
    check_point(x);
    double total = 0.0;
    const std::size_t first = agent * per_shard_;
    for (std::size_t j = first; j < first + per_shard_; ++j) total += loss_at(j, x);
    return total;
  }

  void gradient(std::size_t agent, const ConstVectorRef& x, VectorRef out) const override {
    check_agent(agent);
    check_point(x);
    out.setZero();
    const std::size_t first = agent * per_shard_;
    for (std::size_t j = first; j < first + per_shard_; ++j) accumulate(j, x, 1.0, out);
  }

  void stochastic_gradient(std::size_t agent, const ConstVectorRef& x, std::size_t batch,
                           RngStream& rng, VectorRef out) const override {
    check_agent(agent);
    check_point(x);
    if (batch == 0 || batch > per_shard_) {
      throw InvalidArgument("minibatch size " + std::to_string(batch) + " outside [1, " +
                            std::to_string(per_shard_) + "]");
    }
    if (batch == per_shard_) {
      gradient(agent, x, out);
      return;
    }
    minibatch(agent * per_shard_, per_shard_, x, batch, rng, out);
  }

  void stochastic_total_gradient(const ConstVectorRef& x, std::size_t batch, RngStream& rng,
                                 VectorRef out) const override {
    check_point(x);
    const std::size_t n = data_size();
    if (batch == 0 || batch > n) {
      throw InvalidArgument("minibatch size " + std::to_string(batch) + " outside [1, " +
                            std::to_string(n) + "]");
    }
    if (batch == n) {
      total_gradient(x, out);
      return;
    }
    minibatch(0, n, x, batch, rng, out);
  }

 protected:
  virtual double loss(double z, double y) const = 0;
  /// d loss / d z.
  virtual double slope(double z, double y) const = 0;

  const DataSet& data() const { return data_; }
  std::size_t per_shard() const { return per_shard_; }

 private:
  double margin(std::size_t j, const ConstVectorRef& x) const {
    return data_.features.row(static_cast<Eigen::Index>(j)).dot(x.transpose());
  }
  double loss_at(std::size_t j, const ConstVectorRef& x) const {
    return loss(margin(j, x), data_.labels[static_cast<Eigen::Index>(j)]);
  }
  void accumulate(std::size_t j, const ConstVectorRef& x, double scale, VectorRef out) const {
    const auto row = static_cast<Eigen::Index>(j);
    const double s = scale * slope(margin(j, x), data_.labels[row]);
    out += s * data_.features.row(row).transpose();
  }

  // Partial Fisher-Yates over a freshly reset index table, so the draw
  // depends only on the stream state.
  void minibatch(std::size_t first, std::size_t count, const ConstVectorRef& x, std::size_t batch,
                 RngStream& rng, VectorRef out) const {
    thread_local std::vector<std::uint32_t> index;
    index.resize(count);
    std::iota(index.begin(), index.end(), static_cast<std::uint32_t>(first));
    out.setZero();
    for (std::size_t k = 0; k < batch; ++k) {
      const std::size_t pick = rng.uniform_index(k, count - 1);
      std::swap(index[k], index[pick]);
      accumulate(index[k], x, 1.0, out);
    }
    out *= static_cast<double>(count) / static_cast<double>(batch);
  }

  DataSet data_;
  std::size_t per_shard_ = 0;
};

double max_shard_gram_eigenvalue(const DataSet& data, std::size_t n_agents, std::size_t per_shard,
                                 double* min_out) {
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_agents; ++i) {
    const auto rows = data.features.middleRows(static_cast<Eigen::Index>(i * per_shard),
                                               static_cast<Eigen::Index>(per_shard));
    const Matrix gram = rows.transpose() * rows;
    const Vector ev = symmetric_eigenvalues(gram);
    hi = std::max(hi, ev.maxCoeff());
    lo = std::min(lo, ev.minCoeff());
  }
  if (min_out) *min_out = lo;
  return hi;
}

class LinearRegression final : public GlmPotential {
 public:
  LinearRegression(const DataSet& data, std::size_t n_agents, double noise_var)
      : GlmPotential(data, n_agents), inv_var_(1.0 / noise_var) {
    double lo = 0.0;
    const double hi = max_shard_gram_eigenvalue(this->data(), n_agents, per_shard(), &lo);
    if (lo > 0.0 && hi > lo) {
      mu_ = lo * inv_var_;
      l_smooth_ = hi * inv_var_;
    } else if (hi > 0.0) {
      l_smooth_ = hi * inv_var_;
    }
  }

  std::string name() const override { return "linreg"; }

 protected:
  double loss(double z, double y) const override { return 0.5 * inv_var_ * (y - z) * (y - z); }
  double slope(double z, double y) const override { return inv_var_ * (z - y); }

 private:
  double inv_var_;
};

class LogisticRegression final : public GlmPotential {
 public:
  LogisticRegression(const DataSet& data, std::size_t n_agents) : GlmPotential(data, n_agents) {
    l_smooth_ = 0.25 * max_shard_gram_eigenvalue(this->data(), n_agents, per_shard(), nullptr);
  }

  std::string name() const override { return "logreg"; }

 protected:
  double loss(double z, double y) const override {
    const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    return softplus - y * z;
  }
  double slope(double z, double y) const override {
    const double sigmoid = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    return sigmoid - y;
  }
};

}  // namespace

std::shared_ptr<const Potential> quartic_1d(std::size_t n_agents) {
  return std::make_shared<Quartic1D>(n_agents);
}

std::shared_ptr<const Potential> quadratic_shards(std::vector<double> weights,
                                                  std::vector<Vector> centers) {
  if (centers.empty()) throw InvalidArgument("quadratic_shards: need at least one shard");
  return std::make_shared<QuadraticShards>(std::move(weights), std::move(centers));
}

std::shared_ptr<const Potential> linreg_potential(const DataSet& data, std::size_t n_agents,
                                                  double noise_var) {
  if (!(noise_var > 0.0)) throw InvalidArgument("linreg noise variance must be positive");
  return std::make_shared<LinearRegression>(data, n_agents, noise_var);
}

std::shared_ptr<const Potential> logreg_potential(const DataSet& data, std::size_t n_agents) {
  if (!data.binary_labels()) throw InvalidArgument("logistic regression labels must be 0 or 1");
  return std::make_shared<LogisticRegression>(data, n_agents);
}

double estimate_gradient_noise(const Potential& p, const ConstVectorRef& x, std::size_t batch,
                               std::size_t draws, RngStream& rng) {
  if (draws == 0) throw InvalidArgument("estimate_gradient_noise: need at least one draw");
  Vector exact(x.size());
  Vector noisy(x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < p.n_agents(); ++i) {
    p.gradient(i, x, exact);
    double acc = 0.0;
    for (std::size_t k = 0; k < draws; ++k) {
      p.stochastic_gradient(i, x, batch, rng, noisy);
      acc += (noisy - exact).squaredNorm();
    }
    worst = std::max(worst, acc / static_cast<double>(draws));
  }
  return worst;
}

}  // namespace depsgld
