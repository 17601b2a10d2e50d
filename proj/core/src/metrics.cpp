#include "depsgld/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "depsgld/error.hpp"

namespace depsgld {

Quantile1D::Quantile1D(std::vector<double> grid, std::vector<double> cdf)
    : grid_(std::move(grid)), cdf_(std::move(cdf)) {
  if (grid_.empty() || grid_.size() != cdf_.size()) {
    throw InvalidArgument("quantile table needs matching non-empty grid and cdf");
  }
}

double Quantile1D::operator()(double u) const {
  if (grid_.size() == 1) return grid_.front();
  u = std::clamp(u, 0.0, 1.0);
  // First node with cdf >= u; the cdf is nondecreasing.
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return grid_.front();
  if (it == cdf_.end()) return grid_.back();
  const auto hi = static_cast<std::size_t>(it - cdf_.begin());
  const std::size_t lo = hi - 1;
  const double span = cdf_[hi] - cdf_[lo];
  if (span <= 0.0) return grid_[hi];
  const double t = (u - cdf_[lo]) / span;
  return grid_[lo] + t * (grid_[hi] - grid_[lo]);
}

double Quantile1D::cdf(double x) const {
  if (x <= grid_.front()) return grid_.size() == 1 && x == grid_.front() ? 1.0 : 0.0;
  if (x >= grid_.back()) return 1.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const auto hi = static_cast<std::size_t>(it - grid_.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return cdf_[lo] + t * (cdf_[hi] - cdf_[lo]);
}

Quantile1D true_quantile_1d(const std::function<double(double)>& f, double lower, double upper,
                            std::size_t grid_size) {
  if (!(upper > lower)) throw InvalidArgument("true_quantile_1d needs upper > lower");
  if (grid_size < 1000) throw InvalidArgument("true_quantile_1d needs grid_size >= 1000");
  std::vector<double> grid(grid_size);
  std::vector<double> potential(grid_size);
  const double h = (upper - lower) / static_cast<double>(grid_size - 1);
  double fmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_size; ++i) {
    grid[i] = i + 1 == grid_size ? upper : lower + h * static_cast<double>(i);
    potential[i] = f(grid[i]);
    if (!std::isfinite(potential[i])) {
      throw NumericFailure("target potential is not finite at x = " + std::to_string(grid[i]));
    }
    fmin = std::min(fmin, potential[i]);
  }
  std::vector<double> cdf(grid_size, 0.0);
  double prev = std::exp(-(potential[0] - fmin));
  for (std::size_t i = 1; i < grid_size; ++i) {
    const double cur = std::exp(-(potential[i] - fmin));
    cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * (grid[i] - grid[i - 1]);
    prev = cur;
  }
  const double total = cdf.back();
  for (double& c : cdf) c /= total;
  cdf.back() = 1.0;
  return Quantile1D(std::move(grid), std::move(cdf));
}

Quantile1D point_mass_quantile(double at) { return Quantile1D({at}, {1.0}); }

double wasserstein2_1d(std::span<const double> samples, const Quantile1D& q) {
  if (samples.empty()) throw InvalidArgument("wasserstein2_1d needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double u = (static_cast<double>(k) + 0.5) / n;
    const double diff = q(u) - sorted[k];
    acc += diff * diff;
  }
  return std::sqrt(acc / n);
}

double wasserstein2_empirical(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || a.size() != b.size()) {
    throw InvalidArgument("wasserstein2_empirical needs two non-empty sets of equal size");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double acc = 0.0;
  for (std::size_t k = 0; k < sa.size(); ++k) acc += (sa[k] - sb[k]) * (sa[k] - sb[k]);
  return std::sqrt(acc / static_cast<double>(sa.size()));
}

double consensus_distance(const NetworkState& state) {
  if (state.n_agents() == 0) return 0.0;
  const Vector mean = state.mean();
  return (state.agents.colwise() - mean).colwise().squaredNorm().sum() /
         static_cast<double>(state.n_agents());
}

double consensus_distance(std::span<const NetworkState> bank) {
  if (bank.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : bank) acc += consensus_distance(s);
  return acc / static_cast<double>(bank.size());
}

FeasibilityStats feasibility_stats(std::span<const Vector> samples, const ConvexSet& set,
                                   double inside_tol) {
  if (samples.empty()) throw InvalidArgument("feasibility_stats needs at least one sample");
  std::size_t inside = 0;
  double sq = 0.0;
  for (const auto& x : samples) {
    const double dist = set.distance(x);
    if (dist <= inside_tol) ++inside;
    sq += dist * dist;
  }
  const double n = static_cast<double>(samples.size());
  return {static_cast<double>(inside) / n, sq / n};
}

double classification_accuracy(const ConstVectorRef& beta, const DataSet& data) {
  if (static_cast<std::size_t>(beta.size()) != data.n_features()) {
    throw InvalidArgument("classification_accuracy: beta has dimension " +
                          std::to_string(beta.size()) + ", data has " +
                          std::to_string(data.n_features()) + " features");
  }
  if (data.size() == 0) throw InvalidArgument("classification_accuracy: empty dataset");
  const Vector z = data.features * beta;
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double predicted = z[i] >= 0.0 ? 1.0 : 0.0;  // sigmoid(z) >= 1/2
    if (predicted == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double predictive_accuracy(std::span<const Vector> draws, const DataSet& data) {
  if (draws.empty()) throw InvalidArgument("predictive_accuracy needs at least one draw");
  Vector prob = Vector::Zero(static_cast<Eigen::Index>(data.size()));
  for (const auto& beta : draws) {
    if (static_cast<std::size_t>(beta.size()) != data.n_features()) {
      throw InvalidArgument("predictive_accuracy: dimension mismatch");
    }
    const Vector z = data.features * beta;
    prob += z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  }
  prob /= static_cast<double>(draws.size());
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < prob.size(); ++i) {
    if ((prob[i] >= 0.5 ? 1.0 : 0.0) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

MomentAccumulator::MomentAccumulator(std::size_t dim)
    : mean_(Vector::Zero(static_cast<Eigen::Index>(dim))),
      m2_(Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))) {}

void MomentAccumulator::add(const ConstVectorRef& x) {
  ++count_;
  const Vector delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_.noalias() += delta * (x - mean_).transpose();
}

PosteriorSummary MomentAccumulator::summary() const {
  PosteriorSummary s;
  s.mean = mean_;
  s.count = count_;
  s.covariance = count_ > 1 ? Matrix(m2_ / static_cast<double>(count_ - 1))
                            : Matrix::Zero(m2_.rows(), m2_.cols());
  return s;
}

PosteriorSummary posterior_summary(std::span<const Vector> samples) {
  if (samples.size() < 2) throw InvalidArgument("posterior_summary needs at least two samples");
  MomentAccumulator acc(static_cast<std::size_t>(samples.front().size()));
  for (const auto& x : samples) acc.add(x);
  return acc.summary();
}

}  // namespace depsgld
