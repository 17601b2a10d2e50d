#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "depsgld/linalg.hpp"

namespace depsgld {

/// Shortest round-trip decimal form ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);

/// One metric observation. `replica` is a replica index or "pooled";
/// `agent` is an agent index, "mean", or a centralized sampler name.
struct TraceRow {
  std::string replica;
  std::size_t iter = 0;
  std::string agent;
  std::string metric;
  double value = 0.0;
};

/// Append-only metric log; appends are serialized so concurrent writers are safe.
/// CSV: header `replica,iter,agent,metric,value`, LF line endings.
class RunTrace {
 public:
  RunTrace() = default;
  RunTrace(const RunTrace& other);
  RunTrace& operator=(const RunTrace& other);

  void append(TraceRow row);
  void append(std::string replica, std::size_t iter, std::string agent, std::string metric,
              double value);
  void append_all(const RunTrace& other);

  std::vector<TraceRow> rows() const;
  std::size_t size() const;
  /// Rows matching agent and metric, in append order.
  std::vector<TraceRow> series(const std::string& agent, const std::string& metric,
                               const std::string& replica = "pooled") const;

  /// Empty when valid; otherwise a description of the first duplicate key or
  /// decreasing iteration within a (replica, agent, metric) series.
  std::string validate() const;

  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  mutable std::mutex mutex_;
  std::vector<TraceRow> rows_;
};

/// Sample dump: `replica,iter,agent,dim0,dim1,...`.
class SampleTable {
 public:
  explicit SampleTable(std::size_t dim) : dim_(dim) {}
  void append(std::string replica, std::size_t iter, std::string agent, const ConstVectorRef& x);
  std::size_t size() const { return rows_.size(); }
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  struct Row {
    std::string replica;
    std::size_t iter;
    std::string agent;
    std::vector<double> x;
  };
  std::size_t dim_;
  std::vector<Row> rows_;
};

/// Writes `content` to `path` in binary mode (exact bytes), creating parents.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace depsgld
