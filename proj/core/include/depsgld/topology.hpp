#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depsgld/linalg.hpp"

namespace depsgld {

enum class TopologyKind { kComplete, kRing, kStar, kDisconnected };

std::string_view to_string(TopologyKind kind);
/// Accepts "complete", "ring", "star", "disconnected".
TopologyKind parse_topology(std::string_view name);
/// All four kinds in the order the experiments sweep them.
std::vector<TopologyKind> all_topologies();

/// Undirected simple graph on agents 0..n-1. Edges are stored once as (i, j)
/// with i < j, sorted lexicographically.
struct Graph {
  std::size_t n_agents = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  TopologyKind kind = TopologyKind::kDisconnected;

  std::vector<std::size_t> degrees() const;
  Matrix adjacency() const;
};

/// Builds one of the four reference networks. The star's hub is agent 0.
/// Throws InvalidArgument when n < 2, or n < 3 for a ring.
Graph build_graph(TopologyKind kind, std::size_t n);

/// L = D - A.
Matrix laplacian(const Graph& g);

/// Symmetric doubly stochastic gossip matrix W = I - delta * L together with
/// its spectrum.
struct MixingMatrix {
  Matrix w;
  /// Eigenvalues of w, descending: spectrum[0] == 1.
  Vector spectrum;
  /// max(|lambda_2|, |lambda_N|); equals 1 for a disconnected graph.
  double rho = 1.0;
  /// Smallest eigenvalue lambda_N of w.
  double lambda_min = 1.0;
  double delta = 0.0;
  TopologyKind kind = TopologyKind::kDisconnected;
  /// Per agent, the indices j with w(i, j) != 0 (including i), ascending.
  std::vector<std::vector<std::size_t>> neighbors;
  /// Graph the weights were built from; empty for hand-built matrices.
  std::optional<Graph> graph;

  std::size_t size() const { return static_cast<std::size_t>(w.rows()); }
  double spectral_gap() const { return 1.0 - rho; }
  bool contracting() const { return rho < 1.0 - 1e-12; }
};

/// 1 / lambda_max(L), the midpoint of the admissible interval (0, 2/lambda_max).
/// Returns 1 for an edgeless graph, where any delta gives W = I.
double default_delta(const Graph& g);

/// Throws InvalidArgument unless 0 < delta < 2/lambda_max(L) (edgeless graphs
/// accept any delta).
MixingMatrix mixing_matrix(const Graph& g, std::optional<double> delta = std::nullopt);

/// Wraps an arbitrary square matrix (for validation of hand-built weights).
MixingMatrix mixing_from_weights(const Matrix& w);

struct MixingCheck {
  std::string name;
  bool passed = false;
  double worst_residual = 0.0;
  std::string note;
};

struct MixingReport {
  std::vector<MixingCheck> checks;
  /// rho == 1: gossip does not contract disagreement.
  bool non_contracting = false;
  /// Some of lambda_2..lambda_N coincide, so only the non-strict ordering holds.
  bool repeated_eigenvalues = false;

  bool all_passed() const;
  std::string to_string() const;
};

/// Checks symmetry, row/column sums, nonnegativity, the sparsity pattern
/// against the source graph (when known), and 1 = l_1 >= l_2 >= ... >= l_N > -1.
MixingReport validate_mixing(const MixingMatrix& m, double tol = 1e-12);

}  // namespace depsgld
