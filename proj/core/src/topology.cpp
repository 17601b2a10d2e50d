#include "depsgld/topology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "depsgld/error.hpp"

namespace depsgld {

std::string_view to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kComplete: return "complete";
    case TopologyKind::kRing: return "ring";
    case TopologyKind::kStar: return "star";
    case TopologyKind::kDisconnected: return "disconnected";
  }
  return "unknown";
}

TopologyKind parse_topology(std::string_view name) {
  for (auto kind : all_topologies()) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown topology '" + std::string(name) +
                        "' (expected complete|ring|star|disconnected)");
}

std::vector<TopologyKind> all_topologies() {
  return {TopologyKind::kComplete, TopologyKind::kRing, TopologyKind::kStar,
          TopologyKind::kDisconnected};
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(n_agents, 0);
  for (auto [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

Matrix Graph::adjacency() const {
  const auto n = static_cast<Eigen::Index>(n_agents);
  Matrix a = Matrix::Zero(n, n);
  for (auto [i, j] : edges) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return a;
}

Graph build_graph(TopologyKind kind, std::size_t n) {
  const std::size_t minimum = kind == TopologyKind::kRing ? 3 : 2;
  if (n < minimum) {
    throw InvalidArgument(std::string(to_string(kind)) + " topology needs at least " +
                          std::to_string(minimum) + " agents, got " + std::to_string(n));
  }
  Graph g{n, {}, kind};
  switch (kind) {
    case TopologyKind::kComplete:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
      break;
    case TopologyKind::kRing:
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        g.edges.emplace_back(std::min(i, j), std::max(i, j));
      }
      break;
    case TopologyKind::kStar:
      for (std::size_t j = 1; j < n; ++j) g.edges.emplace_back(0, j);
      break;
    case TopologyKind::kDisconnected:
      break;
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

Matrix laplacian(const Graph& g) {
  Matrix l = -g.adjacency();
  const auto deg = g.degrees();
  for (std::size_t i = 0; i < g.n_agents; ++i) {
    l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = static_cast<double>(deg[i]);
  }
  return l;
}

namespace {

double laplacian_lambda_max(const Graph& g) {
  if (g.edges.empty()) return 0.0;
  return symmetric_eigenvalues(laplacian(g)).maxCoeff();
}

void fill_spectrum(MixingMatrix& m) {
  Vector ev = symmetric_eigenvalues(m.w);  // ascending
  m.spectrum = ev.reverse();
  const auto n = m.spectrum.size();
  m.lambda_min = m.spectrum[n - 1];
  m.rho = n > 1 ? std::max(std::abs(m.spectrum[1]), std::abs(m.spectrum[n - 1])) : 0.0;
  m.neighbors.assign(static_cast<std::size_t>(m.w.rows()), {});
  for (Eigen::Index i = 0; i < m.w.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.w.cols(); ++j) {
      if (m.w(i, j) != 0.0) m.neighbors[static_cast<std::size_t>(i)].push_back(static_cast<std::size_t>(j));
    }
  }
}

}  // namespace

double default_delta(const Graph& g) {
  const double lmax = laplacian_lambda_max(g);
  return lmax > 0.0 ? 1.0 / lmax : 1.0;
}

MixingMatrix mixing_matrix(const Graph& g, std::optional<double> delta) {
  const double lmax = laplacian_lambda_max(g);
  const double d = delta.value_or(lmax > 0.0 ? 1.0 / lmax : 1.0);
  if (lmax > 0.0 && !(d > 0.0 && d < (2.0 / lmax) * (1.0 - 1e-12))) {
    std::ostringstream os;
    os << "mixing delta " << d << " outside the admissible interval (0, " << 2.0 / lmax
       << ") = (0, 2/lambda_max(L))";
    throw InvalidArgument(os.str());
  }
  const auto n = static_cast<Eigen::Index>(g.n_agents);
  MixingMatrix m;
  m.w = Matrix::Identity(n, n) - d * laplacian(g);
  m.delta = d;
  m.kind = g.kind;
  m.graph = g;
  fill_spectrum(m);
  return m;
}

MixingMatrix mixing_from_weights(const Matrix& w) {
  if (w.rows() != w.cols() || w.rows() == 0) {
    throw InvalidArgument("mixing weights must be a non-empty square matrix");
  }
  MixingMatrix m;
  // The spectrum of a non-symmetric input is taken from its symmetric part;
  // the symmetry check reports the violation itself.
  m.w = w;
  Matrix sym = 0.5 * (w + w.transpose());
  Vector ev = symmetric_eigenvalues(sym);
  m.spectrum = ev.reverse();
  const auto n = m.spectrum.size();
  m.lambda_min = m.spectrum[n - 1];
  m.rho = n > 1 ? std::max(std::abs(m.spectrum[1]), std::abs(m.spectrum[n - 1])) : 0.0;
  m.neighbors.assign(static_cast<std::size_t>(n), {});
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (w(i, j) != 0.0) m.neighbors[static_cast<std::size_t>(i)].push_back(static_cast<std::size_t>(j));
  return m;
}

bool MixingReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string MixingReport::to_string() const {
  std::ostringstream os;
  os.precision(6);
  for (const auto& c : checks) {
    os << (c.passed ? "[pass] " : "[FAIL] ") << c.name << "  worst residual " << c.worst_residual;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << '\n';
  }
  if (non_contracting) os << "[warn] rho = 1, non-contracting: agents never reach consensus\n";
  if (repeated_eigenvalues) {
    os << "[note] repeated eigenvalues: only the non-strict ordering "
          "1 = l_1 > l_2 >= ... >= l_N > -1 holds\n";
  }
  return os.str();
}

MixingReport validate_mixing(const MixingMatrix& m, double tol) {
  MixingReport report;
  const Matrix& w = m.w;
  const auto n = w.rows();

  {
    const double r = (w - w.transpose()).cwiseAbs().maxCoeff();
    report.checks.push_back({"symmetry", r <= tol, r, ""});
  }
  {
    const Vector ones = Vector::Ones(n);
    const double rows = (w * ones - ones).cwiseAbs().maxCoeff();
    const double cols = (w.transpose() * ones - ones).cwiseAbs().maxCoeff();
    const double r = std::max(rows, cols);
    report.checks.push_back({"double stochasticity", r <= tol, r, "row and column sums"});
  }
  {
    const double r = std::max(0.0, -w.minCoeff());
    report.checks.push_back({"nonnegative entries", r <= tol, r, ""});
  }
  if (m.graph && m.graph->kind != TopologyKind::kDisconnected) {
    const Matrix a = m.graph->adjacency();
    double worst = 0.0;
    bool ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const bool linked = i == j || a(i, j) != 0.0;
        if (linked != (w(i, j) > 0.0)) {
          ok = false;
          worst = std::max(worst, std::abs(w(i, j)));
        }
      }
    }
    report.checks.push_back({"positivity pattern", ok, worst, "w_ij > 0 iff edge or i == j"});
  }
  {
    const Vector& ev = m.spectrum;
    const double top = std::abs(ev[0] - 1.0);
    double order = 0.0;
    for (Eigen::Index i = 1; i < ev.size(); ++i) order = std::max(order, ev[i] - ev[i - 1]);
    const double bottom = ev[ev.size() - 1] + 1.0;
    const bool ok = top <= 1e-10 && order <= 1e-10 && bottom > 0.0;
    std::string note = "lambda_N = " + std::to_string(ev[ev.size() - 1]);
    report.checks.push_back({"eigenvalue ordering", ok, std::max(top, order), note});
    for (Eigen::Index i = 2; i < ev.size(); ++i) {
      if (std::abs(ev[i] - ev[i - 1]) <= 1e-10) report.repeated_eigenvalues = true;
    }
  }
  report.non_contracting = !m.contracting();
  return report;
}

}  // namespace depsgld
