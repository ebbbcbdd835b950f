#include "swsindy/wsindy.hpp"

#include <stdexcept>
#include <utility>

namespace swsindy {

WeakFormAccumulator::WeakFormAccumulator(FourierTestBasis test_basis,
                                         MonomialBasis projection,
                                         Eigen::Index state_dim)
    : test_(std::move(test_basis)), projection_(std::move(projection)) {
  if (state_dim < 1)
    throw std::invalid_argument("state dimension must be positive");
  if (projection_.dim() != state_dim)
    throw std::invalid_argument(
        "projection basis dimension does not match the state dimension");
  const Eigen::Index k = test_.size();
  features_ = Eigen::MatrixXd::Zero(k, projection_.size());
  targets_ = Eigen::MatrixXd::Zero(k, state_dim);
  psi_.resize(k);
  dpsi_.resize(k);
  phi_.resize(projection_.size());
}

void WeakFormAccumulator::require(Stage stage, const char* what) const {
  if (stage_ != stage) throw std::logic_error(what);
}

void WeakFormAccumulator::check_state(
    const Eigen::Ref<const Eigen::VectorXd>& state) const {
  if (state.size() != targets_.cols())
    throw std::invalid_argument("state dimension changed mid-segment");
}

void WeakFormAccumulator::begin_segment(
    double t, const Eigen::Ref<const Eigen::VectorXd>& state) {
  require(Stage::kFresh, "segment already opened");
  check_state(state);
  test_.eval(t, psi_);
  targets_.noalias() -= psi_ * state.transpose();
  stage_ = Stage::kOpen;
}

void WeakFormAccumulator::update(
    double t, const Eigen::Ref<const Eigen::VectorXd>& state, double weight) {
  require(Stage::kOpen, "update outside an open segment");
  check_state(state);
  test_.eval(t, psi_);
  test_.eval_derivative(t, dpsi_);
  projection_.eval(state, phi_);
  features_.noalias() += weight * (psi_ * phi_.transpose());
  targets_.noalias() -= weight * (dpsi_ * state.transpose());
  ++updates_;
}

void WeakFormAccumulator::end_segment(
    double t, const Eigen::Ref<const Eigen::VectorXd>& state) {
  require(Stage::kOpen, "closing a segment that is not open");
  check_state(state);
  test_.eval(t, psi_);
  targets_.noalias() += psi_ * state.transpose();
  stage_ = Stage::kSealed;
}

std::size_t WeakFormAccumulator::byte_footprint() const {
  const auto scalars = static_cast<std::size_t>(
      features_.size() + targets_.size() + psi_.size() + dpsi_.size() +
      phi_.size());
  std::size_t exponent_ints = 0;
  for (const auto& tuple : projection_.exponents())
    exponent_ints += tuple.size();
  return sizeof(*this) + scalars * sizeof(double) +
         exponent_ints * sizeof(int);
}

AssembledProblem assemble_stream(SnapshotSource source, double dt,
                                 const FourierTestBasis& test_basis,
                                 const MonomialBasis& projection) {
  auto first = source();
  if (!first.has_value())
    throw std::invalid_argument("cannot assemble an empty stream");

  WeakFormAccumulator acc(test_basis, projection, first->size());
  TrapezoidWeights weights(dt);

  acc.begin_segment(0.0, *first);
  acc.update(0.0, *first, weights.next());

  double last_t = 0.0;
  Eigen::VectorXd last_u = *first;
  std::int64_t n = 1;
  while (auto frame = source()) {
    const double t = static_cast<double>(n) * dt;
    acc.update(t, *frame, weights.next());
    last_t = t;
    last_u = std::move(*frame);
    ++n;
  }
  acc.update(last_t, last_u, weights.closing_correction());
  acc.end_segment(last_t, last_u);

  return {acc.features(), acc.targets(), n};
}

}  // namespace swsindy
