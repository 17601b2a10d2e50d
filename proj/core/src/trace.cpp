#include "depsgld/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include "depsgld/error.hpp"

namespace depsgld {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericFailure("format_double: conversion failed");
  return std::string(buf, ptr);
}

RunTrace::RunTrace(const RunTrace& other) : rows_(other.rows()) {}

RunTrace& RunTrace::operator=(const RunTrace& other) {
  if (this != &other) {
    auto copy = other.rows();
    std::lock_guard lock(mutex_);
    rows_ = std::move(copy);
  }
  return *this;
}

void RunTrace::append(TraceRow row) {
  std::lock_guard lock(mutex_);
  rows_.push_back(std::move(row));
}

void RunTrace::append(std::string replica, std::size_t iter, std::string agent, std::string metric,
                      double value) {
  append(TraceRow{std::move(replica), iter, std::move(agent), std::move(metric), value});
}

void RunTrace::append_all(const RunTrace& other) {
  auto copy = other.rows();
  std::lock_guard lock(mutex_);
  rows_.insert(rows_.end(), std::make_move_iterator(copy.begin()),
               std::make_move_iterator(copy.end()));
}

std::vector<TraceRow> RunTrace::rows() const {
  std::lock_guard lock(mutex_);
  return rows_;
}

std::size_t RunTrace::size() const {
  std::lock_guard lock(mutex_);
  return rows_.size();
}

std::vector<TraceRow> RunTrace::series(const std::string& agent, const std::string& metric,
                                       const std::string& replica) const {
  std::lock_guard lock(mutex_);
  std::vector<TraceRow> out;
  for (const auto& r : rows_) {
    if (r.agent == agent && r.metric == metric && r.replica == replica) out.push_back(r);
  }
  return out;
}

std::string RunTrace::validate() const {
  std::lock_guard lock(mutex_);
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> last;
  for (const auto& r : rows_) {
    const auto key = std::make_tuple(r.replica, r.agent, r.metric);
    const auto it = last.find(key);
    if (it != last.end() && r.iter <= it->second) {
      return "series (" + r.replica + ", " + r.agent + ", " + r.metric + ") repeats or goes back at iter " +
             std::to_string(r.iter);
    }
    last[key] = r.iter;
  }
  return {};
}

std::string RunTrace::to_csv() const {
  std::lock_guard lock(mutex_);
  std::string out = "replica,iter,agent,metric,value\n";
  for (const auto& r : rows_) {
    out += r.replica;
    out += ',';
    out += std::to_string(r.iter);
    out += ',';
    out += r.agent;
    out += ',';
    out += r.metric;
    out += ',';
    out += format_double(r.value);
    out += '\n';
  }
  return out;
}

void RunTrace::write_csv(const std::filesystem::path& path) const { write_text_file(path, to_csv()); }

void SampleTable::append(std::string replica, std::size_t iter, std::string agent,
                         const ConstVectorRef& x) {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw InvalidArgument("sample dimension does not match the table");
  }
  rows_.push_back(Row{std::move(replica), iter, std::move(agent),
                      std::vector<double>(x.data(), x.data() + x.size())});
}

std::string SampleTable::to_csv() const {
  std::string out = "replica,iter,agent";
  for (std::size_t j = 0; j < dim_; ++j) out += ",dim" + std::to_string(j);
  out += '\n';
  for (const auto& r : rows_) {
    out += r.replica;
    out += ',';
    out += std::to_string(r.iter);
    out += ',';
    out += r.agent;
    for (double v : r.x) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void SampleTable::write_csv(const std::filesystem::path& path) const {
  write_text_file(path, to_csv());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("short write to '" + path.string() + "'");
}

}  // namespace depsgld
