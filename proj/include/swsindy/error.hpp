#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace swsindy {

// Serialized input violates an on-disk format.  Carries the byte offset at
// which decoding failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t byte_offset)
      : std::runtime_error(what + " (byte offset " +
                           std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::uint64_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

// The surrogate ODE solve cannot be continued.  Carries the time at which
// integration failed.
class ReconstructionError : public std::runtime_error {
 public:
  ReconstructionError(const std::string& what, double failing_time)
      : std::runtime_error(what + " (t = " + std::to_string(failing_time) +
                           ")"),
        failing_time_(failing_time) {}

  double failing_time() const noexcept { return failing_time_; }

 private:
  double failing_time_;
};

// A configuration value is missing, malformed, or inconsistent with the data.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swsindy
