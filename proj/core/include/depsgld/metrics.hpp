#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "depsgld/constraints.hpp"
#include "depsgld/data.hpp"
#include "depsgld/linalg.hpp"
#include "depsgld/samplers.hpp"

namespace depsgld {

/// Tabulated CDF of a 1-D density on [grid.front(), grid.back()] with a
/// piecewise-linear inverse.
class Quantile1D {
 public:
  Quantile1D(std::vector<double> grid, std::vector<double> cdf);

  /// Inverse CDF, u in [0, 1].
  double operator()(double u) const;
  double cdf(double x) const;

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& cdf_values() const { return cdf_; }

 private:
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

/// Quantile function of the density proportional to exp(-f) on [lower, upper],
/// by the trapezoid rule on grid_size uniform nodes (grid_size >= 1000).
Quantile1D true_quantile_1d(const std::function<double(double)>& f, double lower, double upper,
                            std::size_t grid_size = 20001);

/// Point mass at `at` (for degenerate targets).
Quantile1D point_mass_quantile(double at);

/// sqrt((1/n) sum_k (Q(u_k) - x_(k))^2) with u_k = (k - 1/2)/n and x_(k) the
/// order statistics of the samples.
double wasserstein2_1d(std::span<const double> samples, const Quantile1D& q);

/// W2 between two equal-size empirical measures on the line.
double wasserstein2_empirical(std::span<const double> a, std::span<const double> b);

/// (1/N) sum_i ||x_i - x_bar||^2.
double consensus_distance(const NetworkState& state);
/// Average over replicas.
double consensus_distance(std::span<const NetworkState> bank);

struct FeasibilityStats {
  double fraction_inside = 0.0;
  double mean_sq_distance = 0.0;
};
FeasibilityStats feasibility_stats(std::span<const Vector> samples, const ConvexSet& set,
                                   double inside_tol = 1e-9);

/// Fraction of rows with 1{sigmoid(x^T beta) >= 1/2} == y (ties predict 1).
double classification_accuracy(const ConstVectorRef& beta, const DataSet& data);
/// Same rule applied to the predictive probability averaged over draws.
double predictive_accuracy(std::span<const Vector> draws, const DataSet& data);

struct PosteriorSummary {
  Vector mean;
  Matrix covariance;  ///< unbiased (n - 1) normalization
  std::size_t count = 0;
};

/// Streaming mean/covariance (Welford), deterministic for a fixed input order.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t dim);
  void add(const ConstVectorRef& x);
  std::size_t count() const { return count_; }
  PosteriorSummary summary() const;

 private:
  std::size_t count_ = 0;
  Vector mean_;
  Matrix m2_;
};

/// Throws InvalidArgument for fewer than two samples.
PosteriorSummary posterior_summary(std::span<const Vector> samples);

}  // namespace depsgld
