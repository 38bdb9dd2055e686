#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace levels {

// Process-wide resource bounds. Defaults are sized for desk-scale checks.
struct Limits {
  // Largest set (number of members) any operation may materialize.
  std::size_t max_elements = std::size_t{1} << 16;
  // Largest domain a one-sorted or Kripke structure may have.
  std::size_t max_structure = 4096;
  // Largest number of instances an unbounded predicate or function
  // quantifier may enumerate.
  std::size_t max_so_instances = std::size_t{1} << 22;
  // Default seed for every sampled check.
  std::uint64_t seed = 20240601;
  // Number of random cases drawn by each sampled game law.
  std::size_t game_samples = 1000;
  // Random cases for laws whose literal products grow too fast for
  // game_samples draws, such as distributivity over arbitrary carriers.
  std::size_t field_samples = 100;
  // Largest birthday in the dyadic ladder; also the deepest carrier
  // dyadic_value accepts.
  std::size_t dyadic_days = 3;
};

Limits& limits();

// Raised when an operation would exceed a configured cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::size_t requested, std::size_t cap);
  std::size_t requested() const { return requested_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

// Raised on malformed textual input; position is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Raised when an operation's precondition does not hold.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws CapExceeded unless n <= limits().max_elements.
void require_within_cap(const char* what, std::size_t n);

// 2^k, saturating at SIZE_MAX.
std::size_t pow2_saturating(std::size_t k);

}  // namespace levels
