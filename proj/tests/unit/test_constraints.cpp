#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "../oracles.hpp"
#include "depsgld/constraints.hpp"
#include "depsgld/error.hpp"

using namespace depsgld;

namespace {

std::vector<ConvexSet> reference_sets() {
  Vector lo(3), hi(3);
  lo << -1.0, -0.5, -2.0;
  hi << 1.0, 0.25, 0.5;
  Vector c(3);
  c << 0.3, -0.2, 0.1;
  return {ConvexSet::box(lo, hi), ConvexSet::l2_ball(3, 1.5), ConvexSet::l2_ball(c, 0.8),
          ConvexSet::l1_ball(3, 1.2)};
}

Vector random_point(RngStream& rng, std::size_t d, double scale) {
  Vector x(static_cast<Eigen::Index>(d));
  rng.fill_normal(x);
  return scale * x;
}

}  // namespace

TEST(Projection, BoxClamps) {
  const auto k = ConvexSet::box(2, -1.0, 1.0);
  Vector x(2);
  x << 3.0, -0.25;
  const Vector p = k.project(x);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_DOUBLE_EQ(p[1], -0.25);
  EXPECT_DOUBLE_EQ(k.distance(x), 2.0);
}

TEST(Projection, L2ScalesOntoSphere) {
  const auto k = ConvexSet::l2_ball(2, 1.0);
  Vector x(2);
  x << 3.0, 4.0;
  const Vector p = k.project(x);
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
  EXPECT_NEAR(k.distance(x), 4.0, 1e-15);
}

TEST(Projection, L1MatchesBisectionOracle) {
  RngStream rng(11);
  for (std::size_t d : {1u, 2u, 5u, 30u}) {
    const auto k = ConvexSet::l1_ball(d, 1.3);
    for (int t = 0; t < 200; ++t) {
      const Vector x = random_point(rng, d, 2.0);
      const Vector ref = oracle::l1_projection_bisect(x, 1.3);
      EXPECT_LE((k.project(x) - ref).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Projection, L1MatchesGridSearchIn2d) {
  const auto k = ConvexSet::l1_ball(2, 1.0);
  const double pts[][2] = {{2.0, 0.5}, {-0.7, 1.9}, {0.9, 0.9}, {-3.0, -0.1}};
  for (const auto& pt : pts) {
    Vector x(2);
    x << pt[0], pt[1];
    // Boundary of the cross-polytope parametrized by angle-like t in [0, 4).
    double best = 1e300;
    Vector arg(2);
    const int steps = 400000;
    for (int s = 0; s < steps; ++s) {
      const double t = 4.0 * s / steps;
      const int q = static_cast<int>(t);
      const double f = t - q;
      Vector b(2);
      if (q == 0) b << 1 - f, f;
      else if (q == 1) b << -f, 1 - f;
      else if (q == 2) b << -(1 - f), -f;
      else b << f, -(1 - f);
      const double dist = (b - x).squaredNorm();
      if (dist < best) best = dist, arg = b;
    }
    EXPECT_LE((k.project(x) - arg).norm(), 1e-4);
  }
}

TEST(Projection, IdempotentAndInside) {
  RngStream rng(3);
  for (const auto& k : reference_sets()) {
    for (int t = 0; t < 200; ++t) {
      const Vector x = random_point(rng, k.dim(), 3.0);
      const Vector p = k.project(x);
      EXPECT_TRUE(k.contains(p)) << k.describe();
      EXPECT_LE((k.project(p) - p).norm(), 1e-12);
    }
  }
}

// Property: ||P x - P y|| <= ||x - y||.
TEST(ProjectionProperty, NonexpansiveOverRandomPairs) {
  RngStream rng(5);
  for (const auto& k : reference_sets()) {
    for (int t = 0; t < 1000; ++t) {
      const Vector x = random_point(rng, k.dim(), 3.0);
      const Vector y = random_point(rng, k.dim(), 3.0);
      EXPECT_LE((k.project(x) - k.project(y)).norm(), (x - y).norm() + 1e-12) << k.describe();
    }
  }
}

TEST(Envelope, GradientMatchesFiniteDifferences) {
  RngStream rng(17);
  const ProxParams prox(0.3);
  for (const auto& k : reference_sets()) {
    int checked = 0;
    while (checked < 100) {
      const Vector x = random_point(rng, k.dim(), 2.5);
      if (k.distance(x) < 1e-2) continue;  // keep away from the boundary kink
      auto f = [&](const Eigen::VectorXd& z) { return moreau_envelope(k, prox, z); };
      const Vector fd = oracle::fd_gradient(f, x, 1e-6);
      const Vector g = moreau_gradient(k, prox, x);
      EXPECT_LE((fd - g).norm() / g.norm(), 1e-5) << k.describe();
      ++checked;
    }
  }
}

TEST(Envelope, ZeroInsideK) {
  const auto k = ConvexSet::l2_ball(2, 1.0);
  const ProxParams prox(0.1);
  Vector x(2);
  x << 0.3, -0.4;
  EXPECT_EQ(moreau_envelope(k, prox, x), 0.0);
  EXPECT_EQ(moreau_gradient(k, prox, x).norm(), 0.0);
  x << 3.0, 4.0;
  EXPECT_NEAR(moreau_envelope(k, prox, x), 16.0 / 0.2, 1e-12);
}

// Property: grad q is 1/gamma Lipschitz.
TEST(EnvelopeProperty, GradientLipschitz) {
  RngStream rng(23);
  const double gamma = 0.05;
  const ProxParams prox(gamma);
  for (const auto& k : reference_sets()) {
    for (int t = 0; t < 1000; ++t) {
      const Vector x = random_point(rng, k.dim(), 3.0);
      const Vector y = random_point(rng, k.dim(), 3.0);
      const double lhs = (moreau_gradient(k, prox, x) - moreau_gradient(k, prox, y)).norm();
      EXPECT_LE(lhs, (x - y).norm() / gamma + 1e-10);
    }
  }
}

TEST(ProxParams, Validation) {
  EXPECT_THROW(ProxParams(0.0), InvalidArgument);
  EXPECT_THROW(ProxParams(-1.0), InvalidArgument);
  EXPECT_FALSE(ProxParams(0.16).outside_bias_regime());
  EXPECT_TRUE(ProxParams(0.5).outside_bias_regime());
}

TEST(ConvexSet, Radii) {
  const auto box = ConvexSet::box(2, -1.0, 2.0);
  EXPECT_DOUBLE_EQ(box.inner_radius(), 1.0);
  EXPECT_NEAR(box.outer_radius(), std::sqrt(8.0), 1e-15);
  EXPECT_FALSE(ConvexSet::box(2, 0.5, 1.0).origin_interior());
  const auto l1 = ConvexSet::l1_ball(4, 2.0);
  EXPECT_DOUBLE_EQ(l1.inner_radius(), 1.0);
  EXPECT_DOUBLE_EQ(l1.outer_radius(), 2.0);
}

// Property: B(0, r) in K in B(0, R).
TEST(ConvexSetProperty, SandwichInequality) {
  RngStream rng(29);
  for (const auto& k : reference_sets()) {
    for (int t = 0; t < 500; ++t) {
      const Vector u = random_point(rng, k.dim(), 1.0);
      if (k.inner_radius() > 0.0) {
        EXPECT_TRUE(k.contains(0.999 * k.inner_radius() * u / u.norm())) << k.describe();
      }
      EXPECT_LE(k.sample_uniform(rng).norm(), k.outer_radius() + 1e-12);
    }
  }
}

TEST(ConvexSet, UniformSamplesFillTheSet) {
  RngStream rng(31);
  const auto ball = ConvexSet::l2_ball(3, 2.0);
  const auto l1 = ConvexSet::l1_ball(2, 1.0);
  int inner = 0, l1_inner = 0;
  const int n = 40000;
  for (int t = 0; t < n; ++t) {
    const Vector x = ball.sample_uniform(rng);
    ASSERT_TRUE(ball.contains(x));
    if (x.norm() <= 1.0) ++inner;
    const Vector y = l1.sample_uniform(rng);
    ASSERT_TRUE(l1.contains(y));
    if (y.lpNorm<1>() <= 0.5) ++l1_inner;
  }
  // Volume ratios: (1/2)^3 and (1/2)^2.
  EXPECT_NEAR(inner / static_cast<double>(n), 0.125, 0.01);
  EXPECT_NEAR(l1_inner / static_cast<double>(n), 0.25, 0.01);
}

TEST(ConvexSet, InvalidShapesRejected) {
  EXPECT_THROW(ConvexSet::box(2, 1.0, -1.0), InvalidArgument);
  EXPECT_THROW(ConvexSet::l2_ball(2, 0.0), InvalidArgument);
  EXPECT_THROW(ConvexSet::l1_ball(0, 1.0), InvalidArgument);
  const auto k = ConvexSet::l2_ball(2, 1.0);
  EXPECT_THROW(k.project(Vector::Zero(3)), InvalidArgument);
}
