#include "depsgld/data.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <vector>

#include "depsgld/error.hpp"
#include "depsgld/rng.hpp"

namespace depsgld {

DataSet DataSet::slice(std::size_t first, std::size_t count) const {
  const auto f = static_cast<Eigen::Index>(first);
  const auto c = static_cast<Eigen::Index>(count);
  return DataSet{features.middleRows(f, c), labels.segment(f, c)};
}

bool DataSet::binary_labels() const {
  return (labels.array() == 0.0 || labels.array() == 1.0).all();
}

DataSet generate_blr_data(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("generate_blr_data: need at least one sample");
  RngStream rng(seed, StreamTag::kData, 0, 0);
  const auto rows = static_cast<Eigen::Index>(n);
  DataSet data{RowMatrix(rows, 2), Vector(rows)};
  constexpr double kNoiseSd = 0.5;  // variance 0.25
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double x1 = rng.normal();
    const double x2 = rng.normal();
    const double eps = kNoiseSd * rng.normal();
    data.features(i, 0) = x1;
    data.features(i, 1) = x2;
    data.labels[i] = x1 + x2 + eps;
  }
  return data;
}

void standardize_columns(RowMatrix& features) {
  const double n = static_cast<double>(features.rows());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    auto col = features.col(j);
    const double mean = col.sum() / n;
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / n);
    if (sd > 0.0) col /= sd;
  }
}

std::string WdbcIngestion::summary() const {
  std::ostringstream os;
  os << "wdbc: " << data.size() << " rows x " << data.n_features() << " features, "
     << positives << " malignant (1), " << negatives << " benign (0), "
     << (standardized ? "standardized" : "raw features");
  return os.str();
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

WdbcIngestion load_wdbc(const std::filesystem::path& path, bool standardize) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open WDBC file '" + path.string() + "'");

  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto fields = split_commas(trimmed);
    if (fields.size() != 2 + kWdbcFeatures) {
      throw DataError("WDBC line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size() < 2 ? 0 : fields.size() - 2) +
                      " features, expected 30 (569 x 30 table)");
    }
    const auto diagnosis = trim(fields[1]);
    if (diagnosis == "M") {
      labels.push_back(1.0);
    } else if (diagnosis == "B") {
      labels.push_back(0.0);
    } else {
      throw ParseError("WDBC diagnosis must be M or B, got '" + std::string(diagnosis) + "'", line_no);
    }
    std::vector<double> row(kWdbcFeatures);
    for (std::size_t j = 0; j < kWdbcFeatures; ++j) {
      const auto field = trim(fields[j + 2]);
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), row[j]);
      if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(row[j])) {
        throw ParseError("WDBC feature " + std::to_string(j + 1) + " is not a number: '" +
                             std::string(field) + "'",
                         line_no);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() != kWdbcRows) {
    throw DataError("WDBC file has " + std::to_string(rows.size()) +
                    " rows, expected 569 (569 x 30 table)");
  }

  WdbcIngestion out;
  out.data.features.resize(static_cast<Eigen::Index>(kWdbcRows), static_cast<Eigen::Index>(kWdbcFeatures));
  out.data.labels.resize(static_cast<Eigen::Index>(kWdbcRows));
  for (std::size_t i = 0; i < kWdbcRows; ++i) {
    for (std::size_t j = 0; j < kWdbcFeatures; ++j) {
      out.data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    out.data.labels[static_cast<Eigen::Index>(i)] = labels[i];
  }
  out.positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1.0));
  out.negatives = kWdbcRows - out.positives;
  out.standardized = standardize;
  if (standardize) standardize_columns(out.data.features);
  return out;
}

Vector fit_ols(const DataSet& data) {
  const Matrix gram = data.features.transpose() * data.features;
  const Vector ev = symmetric_eigenvalues(gram);
  const double lo = ev.size() ? ev.minCoeff() : 0.0;
  const double hi = ev.size() ? ev.maxCoeff() : 0.0;
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(lo > 0.0) || cond > 1e12) {
    std::ostringstream os;
    os << "fit_ols: Gram matrix is singular (condition estimate " << cond << ")";
    throw NumericFailure(os.str());
  }
  const Vector rhs = data.features.transpose() * data.labels;
  return gram.ldlt().solve(rhs);
}

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double logistic_nll(const DataSet& data, const Vector& beta) {
  const Vector z = data.features * beta;
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) total += softplus(z[i]) - data.labels[i] * z[i];
  return total;
}

Vector logistic_nll_gradient(const DataSet& data, const Vector& beta) {
  Vector r = data.features * beta;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    r[i] = 1.0 / (1.0 + std::exp(-r[i])) - data.labels[i];
  }
  return data.features.transpose() * r;
}

}  // namespace

MleFit fit_logreg_mle(const DataSet& data, double tol, std::size_t max_iterations) {
  if (!data.binary_labels()) throw InvalidArgument("fit_logreg_mle: labels must be 0 or 1");
  MleFit fit;
  fit.beta = Vector::Zero(static_cast<Eigen::Index>(data.n_features()));
  // 4 / lambda_max(X^T X) is a safe first step; backtracking adapts it.
  const Matrix gram = data.features.transpose() * data.features;
  double step = 4.0 / std::max(symmetric_eigenvalues(gram).maxCoeff(), 1e-300);
  double value = logistic_nll(data, fit.beta);
  Vector grad = logistic_nll_gradient(data, fit.beta);
  for (fit.iterations = 0; fit.iterations < max_iterations; ++fit.iterations) {
    fit.gradient_norm = grad.norm();
    if (fit.gradient_norm <= tol) {
      fit.converged = true;
      return fit;
    }
    const double g2 = grad.squaredNorm();
    step *= 2.0;
    Vector trial = fit.beta - step * grad;
    double trial_value = logistic_nll(data, trial);
    while (trial_value > value - 0.5 * step * g2) {
      step *= 0.5;
      if (step < 1e-300) throw NumericFailure("fit_logreg_mle: line search failed");
      trial = fit.beta - step * grad;
      trial_value = logistic_nll(data, trial);
    }
    fit.beta = std::move(trial);
    value = trial_value;
    grad = logistic_nll_gradient(data, fit.beta);
  }
  fit.gradient_norm = grad.norm();
  fit.converged = fit.gradient_norm <= tol;
  return fit;
}

std::pair<DataSet, DataSet> split_holdout(const DataSet& data, double test_frac,
                                          std::uint64_t seed) {
  if (!(test_frac > 0.0 && test_frac < 1.0)) {
    throw InvalidArgument("test fraction must lie in (0, 1)");
  }
  const std::size_t n = data.size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_frac * static_cast<double>(n)));
  if (n_test == 0 || n_test >= n) throw InvalidArgument("test fraction leaves an empty split");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RngStream rng(seed, StreamTag::kData, 1, 0);
  std::shuffle(order.begin(), order.end(), rng.engine());
  const std::size_t n_train = n - n_test;
  // Keep each part in original file order so sharding stays contiguous.
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  auto take = [&](std::size_t first, std::size_t count) {
    DataSet out{RowMatrix(static_cast<Eigen::Index>(count), data.features.cols()),
                Vector(static_cast<Eigen::Index>(count))};
    for (std::size_t k = 0; k < count; ++k) {
      const auto src = static_cast<Eigen::Index>(order[first + k]);
      out.features.row(static_cast<Eigen::Index>(k)) = data.features.row(src);
      out.labels[static_cast<Eigen::Index>(k)] = data.labels[src];
    }
    return out;
  };
  return {take(0, n_train), take(n_train, n_test)};
}

}  // namespace depsgld
