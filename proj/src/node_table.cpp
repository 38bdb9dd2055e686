#include "levels/detail/node_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace levels::detail {

NodeTable::NodeTable() = default;

std::size_t NodeTable::KeyHash::operator()(const std::vector<std::uint32_t>& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ k.size();
  for (std::uint32_t v : k) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

std::uint32_t NodeTable::intern(std::uint8_t tag, std::vector<std::uint32_t> canon) {
  std::vector<std::uint32_t> by_id = canon;
  std::sort(by_id.begin(), by_id.end());
  std::vector<std::uint32_t> key;
  key.reserve(by_id.size() + 1);
  key.push_back(tag);
  key.insert(key.end(), by_id.begin(), by_id.end());

  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = index_.find(key); it != index_.end()) return it->second;

  std::uint32_t depth = 0;
  for (std::uint32_t c : canon) depth = std::max(depth, node(c).depth + 1);

  const std::uint32_t id = count_;
  const std::size_t chunk = id >> kChunkBits;
  if (chunk >= kMaxChunks) throw std::length_error("set interner exhausted");
  if (!chunks_[chunk]) chunks_[chunk] = std::make_unique<SetNode[]>(std::size_t{1} << kChunkBits);
  SetNode& n = chunks_[chunk][id & kChunkMask];
  n.canon = std::move(canon);
  n.by_id = std::move(by_id);
  n.depth = depth;
  n.tag = tag;
  index_.emplace(std::move(key), id);
  ++count_;
  return id;
}

std::size_t NodeTable::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return count_;
}

}  // namespace levels::detail
