#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace swsindy {

// Closed composite Newton-Cotes rule on a uniform grid with spacing dt.
// nodes_per_panel() is the node count P of a single panel: 2 = trapezoid,
// 3 = Simpson, 4 = Simpson 3/8, 5 = Boole.  Adjacent panels share their
// boundary node, so a full panel advances the integration front by P - 1
// intervals.
class QuadratureRule {
 public:
  static constexpr int kMinNodes = 2;
  static constexpr int kMaxNodes = 5;

  QuadratureRule(int nodes_per_panel, double dt);

  static QuadratureRule trapezoid(double dt) { return {2, dt}; }
  static QuadratureRule simpson(double dt) { return {3, dt}; }
  static QuadratureRule simpson_38(double dt) { return {4, dt}; }
  static QuadratureRule boole(double dt) { return {5, dt}; }

  int nodes_per_panel() const noexcept { return nodes_; }
  double dt() const noexcept { return dt_; }

  // Absolute weight of node p (0-based) in a full panel of `nodes` nodes;
  // the rule prefactor and dt are folded in.  `nodes` defaults to a full
  // panel but may name a shorter closing panel.
  double panel_weight(int p, int nodes = 0) const;

  static double prefactor(int nodes);
  static const double* raw_weights(int nodes);

 private:
  int nodes_;
  double dt_;
};

namespace detail {

template <typename Value>
bool same_shape(const Value& a, const Value& b) {
  if constexpr (std::is_arithmetic_v<Value>) {
    (void)a;
    (void)b;
    return true;
  } else {
    return a.rows() == b.rows() && a.cols() == b.cols();
  }
}

template <typename Value>
std::size_t value_bytes(const Value& v) {
  if constexpr (std::is_arithmetic_v<Value>) {
    (void)v;
    return sizeof(Value);
  } else {
    return sizeof(Value) +
           static_cast<std::size_t>(v.size()) * sizeof(typename Value::Scalar);
  }
}

}  // namespace detail

// One-pass integral accumulator over a snapshot stream.  Memory use is
// bounded by one panel regardless of stream length, and the final sample
// count need not be known in advance: feed samples with add() and call
// finalize() at end of stream.  A trailing short panel is closed with the
// matching lower-degree rule; a lone trailing node is the shared endpoint of
// the previous panel and contributes nothing.  A one-sample stream
// integrates to zero.
//
// Value is double or a fixed-shape Eigen matrix/vector; the shape is pinned
// by the zero prototype at construction and never changes.
template <typename Value>
class StreamIntegrator {
 public:
  StreamIntegrator(const QuadratureRule& rule, Value zero_prototype)
      : rule_(rule), accum_(std::move(zero_prototype)) {
    pending_.reserve(static_cast<std::size_t>(rule_.nodes_per_panel()));
  }

  // Feeds the next snapshot in stream order.
  void add(const Value& sample) {
    require_open();
    require_shape(sample);
    set_mode(Mode::kAuto);
    ++count_;
    const int p = rule_.nodes_per_panel();
    if (p == 2) {
      // Trapezoid streams without buffering: overshoot on the running sample
      // is repaired at finalization.
      const double w = (count_ == 1) ? 0.5 * rule_.dt() : rule_.dt();
      accum_ += w * sample;
      last_ = sample;
      have_last_ = true;
      return;
    }
    pending_.push_back(sample);
    if (static_cast<int>(pending_.size()) == p) {
      for (int i = 0; i < p; ++i) accum_ += rule_.panel_weight(i) * pending_[i];
      // Shared-endpoint composite rule: the panel's last node seeds the next.
      pending_.front() = pending_.back();
      pending_.resize(1);
    }
  }

  // Trapezoid update for drivers that know the stream boundaries up front.
  // The first and last samples carry weight dt/2, interior samples dt, and a
  // stream of one sample (is_first && is_last) integrates to zero.  Not
  // mixable with add() on the same integrator.
  void trapezoid_update(const Value& sample, bool is_first, bool is_last) {
    require_open();
    require_shape(sample);
    if (rule_.nodes_per_panel() != 2)
      throw std::logic_error(
          "trapezoid_update requires a two-node quadrature rule");
    set_mode(Mode::kFlagged);
    ++count_;
    double w = rule_.dt();
    if (is_first && is_last)
      w = 0.0;
    else if (is_first || is_last)
      w = 0.5 * rule_.dt();
    accum_ += w * sample;
  }

  // Seals the integrator and returns the integral.
  const Value& finalize() {
    require_open();
    finalized_ = true;
    if (mode_ == Mode::kFlagged) return accum_;
    if (rule_.nodes_per_panel() == 2) {
      if (have_last_) accum_ -= 0.5 * rule_.dt() * last_;
      return accum_;
    }
    const int q = static_cast<int>(pending_.size());
    if (count_ > 1 && q >= 2) {
      for (int i = 0; i < q; ++i)
        accum_ += rule_.panel_weight(i, q) * pending_[i];
    }
    pending_.clear();
    return accum_;
  }

  const Value& value() const {
    if (!finalized_)
      throw std::logic_error("integral requested before finalization");
    return accum_;
  }

  std::int64_t count() const noexcept { return count_; }
  bool finalized() const noexcept { return finalized_; }

  // Allocated footprint in bytes; constant in the number of samples fed.
  std::size_t byte_footprint() const {
    std::size_t bytes = sizeof(*this) + detail::value_bytes(accum_);
    if (have_last_) bytes += detail::value_bytes(last_);
    bytes += pending_.capacity() * sizeof(Value);
    for (const Value& v : pending_) bytes += detail::value_bytes(v);
    return bytes;
  }

 private:
  enum class Mode { kUnset, kAuto, kFlagged };

  void require_open() const {
    if (finalized_)
      throw std::logic_error("update on a finalized stream integrator");
  }
  void require_shape(const Value& sample) const {
    if (!detail::same_shape(sample, accum_))
      throw std::invalid_argument(
          "sample shape does not match the integrator prototype");
  }
  void set_mode(Mode m) {
    if (mode_ == Mode::kUnset) mode_ = m;
    if (mode_ != m)
      throw std::logic_error(
          "add() and trapezoid_update() cannot be mixed on one integrator");
  }

  QuadratureRule rule_;
  Value accum_;
  Value last_{};
  bool have_last_ = false;
  std::vector<Value> pending_;
  std::int64_t count_ = 0;
  bool finalized_ = false;
  Mode mode_ = Mode::kUnset;
};

// Per-sample trapezoid weight sequence for one-pass drivers that learn the
// stream end only afterwards: the first sample weighs dt/2, every later one
// dt, and closing_correction() repairs the overshoot on the final sample.
class TrapezoidWeights {
 public:
  explicit TrapezoidWeights(double dt) : dt_(dt) {}

  double next() {
    if (first_) {
      first_ = false;
      return 0.5 * dt_;
    }
    return dt_;
  }

  double closing_correction() const { return -0.5 * dt_; }
  double dt() const { return dt_; }

 private:
  double dt_;
  bool first_ = true;
};

}  // namespace swsindy
