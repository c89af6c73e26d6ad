#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jigsolve {

// Invalid argument values: out-of-range ids, non-permutations, bad shapes.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The operation exists but is not defined for this input kind (e.g. binary
// terms on a 3D grid).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed file content. `offset` is the byte position where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

// Well-formed file with wrong magic, version or layout.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent settings, e.g. a model trained for another grid.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jigsolve
