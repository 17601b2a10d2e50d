#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "depsgld/linalg.hpp"

namespace depsgld {

/// Purpose tag mixed into every derived stream so that different consumers
/// drawing for the same (replica, agent) never share a sequence.
enum class StreamTag : std::uint32_t {
  kDecentralized = 1,
  kCentralized = 2,
  kInitialization = 3,
  kData = 4,
  kTest = 5,
};

/// One independent random stream. A stream is a pure function of
/// (seed, tag, replica, agent), so results never depend on which thread or in
/// which order streams are advanced.
class RngStream {
 public:
  using Engine = std::mt19937_64;

  explicit RngStream(std::uint64_t seed) : RngStream(seed, StreamTag::kTest, 0, 0) {}
  RngStream(std::uint64_t seed, StreamTag tag, std::uint64_t replica,
            std::uint64_t agent);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform integer in [lo, hi].
  std::size_t uniform_index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  void fill_normal(VectorRef out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal_(engine_);
  }

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace depsgld
