#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "depsgld/linalg.hpp"

namespace depsgld {

/// Design matrix (one observation per row) and responses.
struct DataSet {
  RowMatrix features;
  Vector labels;

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t n_features() const { return static_cast<std::size_t>(features.cols()); }
  /// Rows [first, first + count).
  DataSet slice(std::size_t first, std::size_t count) const;
  bool binary_labels() const;
};

/// y = x1 + x2 + eps with x ~ N(0, I_2), eps ~ N(0, 0.25). Deterministic in seed.
DataSet generate_blr_data(std::size_t n, std::uint64_t seed);

/// Column-wise zero mean and unit (population) variance, in place.
/// Constant columns are centered only.
void standardize_columns(RowMatrix& features);

struct WdbcIngestion {
  DataSet data;
  std::size_t positives = 0;  ///< malignant, label 1
  std::size_t negatives = 0;  ///< benign, label 0
  bool standardized = true;

  std::string summary() const;
};

inline constexpr std::size_t kWdbcRows = 569;
inline constexpr std::size_t kWdbcFeatures = 30;

/// Reads the UCI diagnostic layout: id, diagnosis (M|B), 30 real features.
/// Throws ParseError (with line number) on malformed fields and DataError
/// when the table is not 569 x 30.
WdbcIngestion load_wdbc(const std::filesystem::path& path, bool standardize = true);

/// Solves the normal equations. Throws NumericFailure for a singular or
/// numerically singular Gram matrix, naming its condition estimate.
Vector fit_ols(const DataSet& data);

struct MleFit {
  Vector beta;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Unpenalized logistic-regression MLE by full-batch gradient descent with
/// backtracking; stops at ||grad|| <= tol or after max_iterations (the cap is
/// what terminates on separable data).
MleFit fit_logreg_mle(const DataSet& data, double tol = 1e-6,
                      std::size_t max_iterations = 100000);

/// Random train/test split; test gets round(test_frac * n) rows.
std::pair<DataSet, DataSet> split_holdout(const DataSet& data, double test_frac,
                                          std::uint64_t seed);

}  // namespace depsgld
