#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace radixtiles {

struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(const std::string& what = "matrix is singular")
      : std::runtime_error(what) {}
};

struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

struct WrongCountError : std::invalid_argument {
  explicit WrongCountError(const std::string& what) : std::invalid_argument(what) {}
};

struct DuplicateCosetError : std::invalid_argument {
  std::size_t first_index;
  std::size_t second_index;
  DuplicateCosetError(std::size_t a, std::size_t b)
      : std::invalid_argument("digits " + std::to_string(a) + " and " +
                              std::to_string(b) + " lie in the same coset"),
        first_index(a),
        second_index(b) {}
};

struct MissingZeroError : std::invalid_argument {
  MissingZeroError() : std::invalid_argument("digit set does not contain the zero vector") {}
};

struct StepBudgetExceededError : std::runtime_error {
  std::uint64_t budget;
  explicit StepBudgetExceededError(std::uint64_t b)
      : std::runtime_error("expansion exceeded step budget of " + std::to_string(b)),
        budget(b) {}
};

struct NotTerminatedError : std::logic_error {
  NotTerminatedError() : std::logic_error("expansion did not terminate; nothing to reconstruct") {}
};

struct ResourceLimitError : std::runtime_error {
  std::uint64_t required;
  std::uint64_t cap;
  ResourceLimitError(const std::string& what, std::uint64_t required_, std::uint64_t cap_)
      : std::runtime_error(what + " (needs " + std::to_string(required_) +
                           ", cap " + std::to_string(cap_) + ")"),
        required(required_),
        cap(cap_) {}
};

struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

struct NoBetaFoundError : std::runtime_error {
  unsigned k_max;
  explicit NoBetaFoundError(unsigned k_max_)
      : std::runtime_error("no power up to " + std::to_string(k_max_) +
                           " yields a radix representation"),
        k_max(k_max_) {}
};

}  // namespace radixtiles
