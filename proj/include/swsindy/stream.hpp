#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace swsindy {

// Uniformly sampled state sequence.  Snapshot indices are 1-based throughout;
// snapshot n sits at t_n = (n - 1) * dt.
struct SnapshotStream {
  double dt = 0.0;
  std::vector<Eigen::VectorXd> frames;

  Eigen::Index state_dim() const {
    return frames.empty() ? 0 : frames.front().size();
  }
  std::int64_t size() const { return static_cast<std::int64_t>(frames.size()); }
  double time_at(std::int64_t n) const {
    return static_cast<double>(n - 1) * dt;
  }
};

// One-pass frame supplier; yields std::nullopt once the stream ends.
using SnapshotSource = std::function<std::optional<Eigen::VectorXd>()>;

inline SnapshotSource make_source(const SnapshotStream& stream) {
  std::size_t next = 0;
  return [&stream, next]() mutable -> std::optional<Eigen::VectorXd> {
    if (next >= stream.frames.size()) return std::nullopt;
    return stream.frames[next++];
  };
}

// Lazily generated stream: frame(n) for n = 1..count.
inline SnapshotSource make_source(
    std::int64_t count, std::function<Eigen::VectorXd(std::int64_t)> frame) {
  std::int64_t next = 1;
  return [count, frame = std::move(frame),
          next]() mutable -> std::optional<Eigen::VectorXd> {
    if (next > count) return std::nullopt;
    return frame(next++);
  };
}

}  // namespace swsindy
