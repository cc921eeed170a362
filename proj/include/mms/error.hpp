#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mms {

/// Malformed or out-of-contract input (bad dimensions, odd vertices,
/// affinely dependent point sets, unparsable text).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File-level failure. Carries the offending path and the byte offset at
/// which reading or writing went wrong (0 when not applicable).
class IoError : public std::runtime_error {
 public:
  IoError(std::string path, std::uint64_t offset, const std::string& what)
      : std::runtime_error(path + " @" + std::to_string(offset) + ": " + what),
        path_(std::move(path)),
        offset_(offset) {}

  const std::string& path() const noexcept { return path_; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::string path_;
  std::uint64_t offset_;
};

/// Two computations that must agree did not (e.g. records sharing a key
/// with different MMS counts). Always a bug or a corrupted shard.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mms
