#include "depsgld/rng.hpp"

namespace depsgld {

RngStream::RngStream(std::uint64_t seed, StreamTag tag, std::uint64_t replica,
                     std::uint64_t agent) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed),    hi(seed),    static_cast<std::uint32_t>(tag),
                    lo(replica), hi(replica), lo(agent),
                    hi(agent)};
  engine_.seed(seq);
}

}  // namespace depsgld
