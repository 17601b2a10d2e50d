#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "depsgld/error.hpp"
#include "depsgld/rng.hpp"
#include "depsgld/topology.hpp"

using namespace depsgld;

namespace {

const std::size_t kSizes[] = {4, 6, 20, 30};

}  // namespace

TEST(Graph, EdgeCountsAndDegrees) {
  EXPECT_EQ(build_graph(TopologyKind::kComplete, 6).edges.size(), 15u);
  EXPECT_EQ(build_graph(TopologyKind::kRing, 6).edges.size(), 6u);
  EXPECT_EQ(build_graph(TopologyKind::kStar, 6).edges.size(), 5u);
  EXPECT_TRUE(build_graph(TopologyKind::kDisconnected, 6).edges.empty());

  const auto star = build_graph(TopologyKind::kStar, 5).degrees();
  EXPECT_EQ(star[0], 4u);
  for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(star[i], 1u);
  for (auto d : build_graph(TopologyKind::kRing, 7).degrees()) EXPECT_EQ(d, 2u);
}

TEST(Graph, EdgesAreOrderedPairs) {
  for (auto kind : all_topologies()) {
    const auto g = build_graph(kind, 8);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      EXPECT_LT(g.edges[e].first, g.edges[e].second);
      if (e > 0) EXPECT_LT(g.edges[e - 1], g.edges[e]);
    }
  }
}

TEST(Graph, RejectsTooFewAgents) {
  EXPECT_THROW(build_graph(TopologyKind::kComplete, 1), InvalidArgument);
  EXPECT_THROW(build_graph(TopologyKind::kRing, 2), InvalidArgument);
  EXPECT_NO_THROW(build_graph(TopologyKind::kStar, 2));
}

TEST(Graph, ParseNames) {
  for (auto kind : all_topologies()) EXPECT_EQ(parse_topology(to_string(kind)), kind);
  EXPECT_THROW(parse_topology("mesh"), InvalidArgument);
}

TEST(Laplacian, SymmetricPsdWithZeroRowSums) {
  for (auto kind : all_topologies()) {
    for (auto n : kSizes) {
      const Matrix l = laplacian(build_graph(kind, n));
      EXPECT_LE((l - l.transpose()).cwiseAbs().maxCoeff(), 0.0);
      EXPECT_LE(l.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_GE(oracle::jacobi_eigenvalues(l)[0], -1e-10);
    }
  }
}

TEST(Mixing, SpectrumMatchesJacobiOracle) {
  for (auto kind : all_topologies()) {
    for (auto n : kSizes) {
      const auto m = mixing_matrix(build_graph(kind, n));
      const Eigen::VectorXd ref = oracle::jacobi_eigenvalues(m.w);
      ASSERT_EQ(m.spectrum.size(), ref.size());
      for (Eigen::Index i = 0; i < ref.size(); ++i) {
        EXPECT_NEAR(m.spectrum[i], ref[ref.size() - 1 - i], 1e-10) << to_string(kind) << " n=" << n;
      }
      EXPECT_NEAR(m.lambda_min, ref[0], 1e-10);
      const double rho_ref = n > 1 ? std::max(std::abs(ref[ref.size() - 2]), std::abs(ref[0])) : 0.0;
      EXPECT_NEAR(m.rho, rho_ref, 1e-10);
    }
  }
}

TEST(Mixing, ValidationPassesForAllReferenceNetworks) {
  for (auto kind : all_topologies()) {
    for (auto n : kSizes) {
      const auto report = validate_mixing(mixing_matrix(build_graph(kind, n)));
      EXPECT_TRUE(report.all_passed()) << to_string(kind) << " n=" << n << "\n" << report.to_string();
      EXPECT_EQ(report.non_contracting, kind == TopologyKind::kDisconnected);
    }
  }
}

TEST(Mixing, CompleteWithInverseNHasZeroRho) {
  for (auto n : kSizes) {
    const auto m = mixing_matrix(build_graph(TopologyKind::kComplete, n), 1.0 / static_cast<double>(n));
    EXPECT_NEAR(m.rho, 0.0, 1e-12);
    EXPECT_LE((m.w.array() - 1.0 / static_cast<double>(n)).abs().maxCoeff(), 1e-15);
  }
}

TEST(Mixing, RingOfFourQuarterDelta) {
  const auto m = mixing_matrix(build_graph(TopologyKind::kRing, 4), 0.25);
  EXPECT_NEAR(m.rho, 0.5, 1e-12);
  EXPECT_NEAR(m.lambda_min, 0.0, 1e-12);
}

TEST(Mixing, RingRhoMatchesClosedForm) {
  const std::size_t n = 6;
  const auto g = build_graph(TopologyKind::kRing, n);
  const auto m = mixing_matrix(g);
  // Ring Laplacian eigenvalues: 2 - 2 cos(2 pi i / n).
  double rho = 0.0, lmax = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    lmax = std::max(lmax, 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * i / n));
  }
  EXPECT_NEAR(m.delta, 1.0 / lmax, 1e-14);
  for (std::size_t i = 1; i < n; ++i) {
    rho = std::max(rho, std::abs(1.0 - m.delta * (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * i / n))));
  }
  EXPECT_NEAR(m.rho, rho, 1e-12);
}

TEST(Mixing, DisconnectedIsIdentity) {
  const auto m = mixing_matrix(build_graph(TopologyKind::kDisconnected, 5));
  EXPECT_TRUE(m.w.isIdentity(0.0));
  EXPECT_DOUBLE_EQ(m.rho, 1.0);
  EXPECT_FALSE(m.contracting());
  EXPECT_NE(validate_mixing(m).to_string().find("non-contracting"), std::string::npos);
}

TEST(Mixing, DeltaOutsideAdmissibleIntervalRejected) {
  const auto g = build_graph(TopologyKind::kRing, 6);
  const double lmax = oracle::jacobi_eigenvalues(laplacian(g)).maxCoeff();
  EXPECT_NEAR(default_delta(g), 1.0 / lmax, 1e-12);
  EXPECT_THROW(mixing_matrix(g, 0.0), InvalidArgument);
  EXPECT_THROW(mixing_matrix(g, -0.1), InvalidArgument);
  EXPECT_THROW(mixing_matrix(g, 0.5), InvalidArgument);  // lambda_max(ring 6) = 4
  EXPECT_NO_THROW(mixing_matrix(g, 1.99 / lmax));
}

TEST(Mixing, NeighborsFollowSparsity) {
  const auto m = mixing_matrix(build_graph(TopologyKind::kStar, 5));
  EXPECT_EQ(m.neighbors[0].size(), 5u);
  EXPECT_EQ(m.neighbors[3], (std::vector<std::size_t>{0, 3}));
}

TEST(Mixing, HandBuiltViolationsDetected) {
  Matrix w(3, 3);
  w << 0.5, 0.5, 0.0, 0.2, 0.6, 0.2, 0.3, 0.0, 0.7;
  const auto report = validate_mixing(mixing_from_weights(w));
  EXPECT_FALSE(report.all_passed());
  bool symmetry_failed = false;
  for (const auto& c : report.checks) {
    if (c.name.find("symmetr") != std::string::npos) symmetry_failed = !c.passed;
  }
  EXPECT_TRUE(symmetry_failed);

  Matrix neg(2, 2);
  neg << 1.2, -0.2, -0.2, 1.2;
  EXPECT_FALSE(validate_mixing(mixing_from_weights(neg)).all_passed());
}

// Property: ||W^k x - xbar 1|| <= rho^k ||x - xbar 1||.
TEST(MixingProperty, PowersContractDisagreement) {
  RngStream rng(7);
  for (auto kind : {TopologyKind::kComplete, TopologyKind::kRing, TopologyKind::kStar}) {
    const auto m = mixing_matrix(build_graph(kind, 10));
    for (int trial = 0; trial < 20; ++trial) {
      Vector x(10);
      rng.fill_normal(x);
      const Vector centered0 = x.array() - x.mean();
      Vector y = x;
      for (int k = 1; k <= 8; ++k) {
        y = m.w * y;
        EXPECT_NEAR(y.mean(), x.mean(), 1e-12);
        const Vector centered = y.array() - y.mean();
        EXPECT_LE(centered.norm(), std::pow(m.rho, k) * centered0.norm() + 1e-12);
      }
    }
  }
}
