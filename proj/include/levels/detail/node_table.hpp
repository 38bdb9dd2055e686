#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace levels::detail {

struct SetNode {
  std::vector<std::uint32_t> canon;  // children in canonical order
  std::vector<std::uint32_t> by_id;  // same children sorted by id
  std::uint32_t depth = 0;
  std::uint8_t tag = 0;
};

// Hash-consing table for finite trees of sets. Interning is guarded by a
// mutex; node reads are lock-free because chunks never move once allocated
// and an id is only observable after its node has been published.
class NodeTable {
 public:
  NodeTable();
  NodeTable(const NodeTable&) = delete;
  NodeTable& operator=(const NodeTable&) = delete;

  // canon must be duplicate-free and already in canonical order.
  std::uint32_t intern(std::uint8_t tag, std::vector<std::uint32_t> canon);

  const SetNode& node(std::uint32_t id) const {
    return chunks_[id >> kChunkBits][id & kChunkMask];
  }

  std::size_t size() const;

 private:
  static constexpr unsigned kChunkBits = 16;
  static constexpr std::uint32_t kChunkMask = (1u << kChunkBits) - 1;
  static constexpr std::size_t kMaxChunks = 1u << 14;

  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& k) const noexcept;
  };

  mutable std::mutex mu_;
  std::uint32_t count_ = 0;
  std::array<std::unique_ptr<SetNode[]>, kMaxChunks> chunks_;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> index_;
};

}  // namespace levels::detail
