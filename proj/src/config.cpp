#include "levels/config.hpp"

#include <limits>

namespace levels {

Limits& limits() {
  static Limits l;
  return l;
}

CapExceeded::CapExceeded(const std::string& what, std::size_t requested, std::size_t cap)
    : std::runtime_error(what + ": size " + std::to_string(requested) + " exceeds cap " +
                         std::to_string(cap)),
      requested_(requested),
      cap_(cap) {}

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}

void require_within_cap(const char* what, std::size_t n) {
  if (n > limits().max_elements) throw CapExceeded(what, n, limits().max_elements);
}

std::size_t pow2_saturating(std::size_t k) {
  if (k >= std::numeric_limits<std::size_t>::digits) return std::numeric_limits<std::size_t>::max();
  return std::size_t{1} << k;
}

}  // namespace levels
