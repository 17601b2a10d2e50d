#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "depsgld/data.hpp"
#include "depsgld/error.hpp"
#include "depsgld/models.hpp"

using namespace depsgld;

namespace {

DataSet logistic_data(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  DataSet d;
  d.features.resize(static_cast<Eigen::Index>(n), 3);
  d.labels.resize(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    for (Eigen::Index c = 0; c < 3; ++c) d.features(r, c) = rng.normal();
    const double z = d.features(r, 0) - 0.5 * d.features(r, 2);
    d.labels[r] = rng.uniform() < 1.0 / (1.0 + std::exp(-z)) ? 1.0 : 0.0;
  }
  return d;
}

}  // namespace

TEST(Quartic, ValuesAndGradient) {
  const auto p = quartic_1d(1);
  Vector x = Vector::Constant(1, 1.0);
  EXPECT_DOUBLE_EQ(p->total_value(x), 0.5 + 0.125 - 1.0);
  EXPECT_DOUBLE_EQ(p->total_gradient(x)[0], 0.5);
  x[0] = 0.0;
  EXPECT_DOUBLE_EQ(p->total_value(x), 0.0);
  EXPECT_DOUBLE_EQ(p->total_gradient(x)[0], -1.0);
}

TEST(Quartic, ShardsAddUp) {
  const auto whole = quartic_1d(1);
  const auto split = quartic_1d(30);
  for (double v : {-0.9, -0.1, 0.4, 1.0}) {
    const Vector x = Vector::Constant(1, v);
    EXPECT_NEAR(split->total_value(x), whole->total_value(x), 1e-14);
    EXPECT_NEAR(split->total_gradient(x)[0], whole->total_gradient(x)[0], 1e-14);
  }
  EXPECT_EQ(split->noise_sigma2().value_or(-1.0), 0.0);
}

TEST(Potentials, GradientsMatchFiniteDifferences) {
  RngStream rng(41);
  const DataSet blr = generate_blr_data(200, 3);
  const DataSet lr = logistic_data(90, 5);
  std::vector<Vector> centers{Vector::Constant(2, 1.0), Vector::Constant(2, -0.5)};
  const std::vector<std::shared_ptr<const Potential>> potentials{
      quartic_1d(4), quadratic_shards({1.5, 0.5}, centers), linreg_potential(blr, 4, 0.25),
      logreg_potential(lr, 3)};
  for (const auto& p : potentials) {
    for (int t = 0; t < 5; ++t) {
      Vector x(static_cast<Eigen::Index>(p->dim()));
      rng.fill_normal(x);
      for (std::size_t i = 0; i < p->n_agents(); ++i) {
        auto f = [&](const Eigen::VectorXd& z) { return p->value(i, z); };
        const Vector fd = oracle::fd_gradient(f, x, 1e-5);
        const Vector g = p->gradient(i, x);
        EXPECT_LE((fd - g).norm(), 1e-6 * std::max(1.0, g.norm())) << p->name();
      }
    }
  }
}

TEST(Linreg, GradientMatchesNormalEquations) {
  const DataSet d = generate_blr_data(400, 9);
  const auto p = linreg_potential(d, 4, 0.25);
  Vector b(2);
  b << 0.3, -0.7;
  const Matrix x = d.features;
  const Vector expected = (x.transpose() * (x * b - d.labels)) / 0.25;
  EXPECT_LE((p->total_gradient(b) - expected).norm(), 1e-9 * expected.norm());
  // Shard 1 holds rows [100, 200).
  const Matrix xs = x.middleRows(100, 100);
  const Vector shard = (xs.transpose() * (xs * b - d.labels.segment(100, 100))) / 0.25;
  EXPECT_LE((p->gradient(1, b) - shard).norm(), 1e-9 * shard.norm());
}

TEST(Logreg, GradientAtZeroForBalancedLabels) {
  DataSet d;
  d.features.resize(4, 2);
  d.features << 1, 2, -1, 0, 2, -1, -2, -1;  // columns sum to zero
  d.labels.resize(4);
  d.labels << 1, 0, 1, 0;
  const auto p = logreg_potential(d, 1);
  const Vector g = p->total_gradient(Vector::Zero(2));
  const Vector expected = 0.5 * Matrix(d.features).colwise().sum().transpose() -
                          Matrix(d.features).transpose() * d.labels;
  EXPECT_LE((g - expected).norm(), 1e-15);
}

TEST(Logreg, SmoothnessBoundsHessian) {
  const DataSet d = logistic_data(120, 13);
  const auto p = logreg_potential(d, 4);
  ASSERT_TRUE(p->l_smooth().has_value());
  EXPECT_FALSE(p->mu().has_value());
  // Hessian of each shard is X^T S X with S <= 1/4.
  for (std::size_t i = 0; i < 4; ++i) {
    const Matrix xs = Matrix(d.features).middleRows(static_cast<Eigen::Index>(30 * i), 30);
    const double lmax = oracle::jacobi_eigenvalues(xs.transpose() * xs).maxCoeff() / 4.0;
    EXPECT_LE(lmax, *p->l_smooth() + 1e-9);
  }
}

TEST(QuadraticShards, Constants) {
  std::vector<Vector> centers{Vector::Zero(2), Vector::Ones(2), Vector::Constant(2, 3.0)};
  const auto p = quadratic_shards({1.0, 2.0, 4.0}, centers);
  EXPECT_DOUBLE_EQ(*p->mu(), 1.0);
  EXPECT_DOUBLE_EQ(*p->l_smooth(), 4.0);
  // Minimizer of the sum is the weighted mean of the centers.
  const Vector m = Vector::Constant(2, (0.0 + 2.0 + 12.0) / 7.0);
  EXPECT_LE(p->total_gradient(m).norm(), 1e-14);
}

TEST(Minibatch, FullBatchIsExact) {
  const DataSet d = generate_blr_data(300, 2);
  const auto p = linreg_potential(d, 3, 0.25);
  RngStream rng(1);
  Vector x = Vector::Constant(2, 0.4), g(2);
  p->stochastic_gradient(2, x, 100, rng, g);
  EXPECT_EQ(g, p->gradient(2, x));
  EXPECT_THROW(p->stochastic_gradient(2, x, 101, rng, g), InvalidArgument);
  EXPECT_THROW(p->stochastic_gradient(2, x, 0, rng, g), InvalidArgument);
  EXPECT_EQ(estimate_gradient_noise(*p, x, 100, 10, rng), 0.0);
}

TEST(Minibatch, UnbiasedOnAverage) {
  const DataSet d = logistic_data(200, 21);
  const auto p = logreg_potential(d, 2);
  RngStream rng(77);
  Vector x(3);
  x << 0.2, -0.3, 0.5;
  const Vector exact = p->gradient(1, x);
  Vector acc = Vector::Zero(3), g(3);
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) {
    p->stochastic_gradient(1, x, 7, rng, g);
    acc += g;
  }
  EXPECT_LE((acc / draws - exact).norm(), 0.02 * exact.norm());
}

TEST(Minibatch, DrawsWithoutReplacement) {
  // One row per observation with a unit-vector feature: a duplicate index
  // would show up as a coefficient of 2.
  DataSet d;
  d.features = RowMatrix::Identity(6, 6);
  d.labels = Vector::Zero(6);
  const auto p = linreg_potential(d, 1, 1.0);
  RngStream rng(3);
  Vector g(6);
  for (int t = 0; t < 200; ++t) {
    p->stochastic_gradient(0, Vector::Ones(6), 4, rng, g);
    int picked = 0;
    for (Eigen::Index j = 0; j < 6; ++j) {
      EXPECT_TRUE(g[j] == 0.0 || std::abs(g[j] - 1.5) < 1e-15);
      picked += g[j] != 0.0;
    }
    EXPECT_EQ(picked, 4);
  }
}

TEST(Shards, TrailingRowsDroppedWithWarning) {
  const DataSet d = generate_blr_data(103, 4);
  const auto p = linreg_potential(d, 5, 0.25);
  EXPECT_EQ(p->shard_size(0), 20u);
  EXPECT_EQ(p->data_size(), 100u);
  ASSERT_EQ(p->warnings().size(), 1u);
  EXPECT_NE(p->warnings()[0].find("dropped 3"), std::string::npos);
  EXPECT_THROW(linreg_potential(generate_blr_data(3, 1), 5, 0.25), InvalidArgument);
}

TEST(Shards, LogregRejectsNonBinaryLabels) {
  DataSet d = logistic_data(10, 1);
  d.labels[3] = 0.5;
  EXPECT_THROW(logreg_potential(d, 2), InvalidArgument);
}
