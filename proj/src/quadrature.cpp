#include "swsindy/quadrature.hpp"

#include <array>
#include <cmath>

namespace swsindy {

namespace {

// Closed Newton-Cotes prefactors and node weights, indexed by node count.
constexpr std::array<double, 6> kPrefactor = {0.0,      0.0,       1.0 / 2.0,
                                              1.0 / 3.0, 3.0 / 8.0, 2.0 / 45.0};

constexpr std::array<std::array<double, 5>, 6> kWeights = {{
    {0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 4, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {7, 32, 12, 32, 7},
}};

}  // namespace

QuadratureRule::QuadratureRule(int nodes_per_panel, double dt)
    : nodes_(nodes_per_panel), dt_(dt) {
  if (nodes_ < kMinNodes || nodes_ > kMaxNodes)
    throw std::invalid_argument("panel node count must be between 2 and 5");
  if (!(dt_ > 0.0) || !std::isfinite(dt_))
    throw std::invalid_argument("grid spacing must be positive and finite");
}

double QuadratureRule::prefactor(int nodes) {
  if (nodes < kMinNodes || nodes > kMaxNodes)
    throw std::invalid_argument("panel node count must be between 2 and 5");
  return kPrefactor[static_cast<std::size_t>(nodes)];
}

const double* QuadratureRule::raw_weights(int nodes) {
  if (nodes < kMinNodes || nodes > kMaxNodes)
    throw std::invalid_argument("panel node count must be between 2 and 5");
  return kWeights[static_cast<std::size_t>(nodes)].data();
}

double QuadratureRule::panel_weight(int p, int nodes) const {
  if (nodes == 0) nodes = nodes_;
  if (nodes < kMinNodes || nodes > nodes_)
    throw std::invalid_argument("closing panel cannot exceed the full panel");
  if (p < 0 || p >= nodes) throw std::invalid_argument("node index out of range");
  return prefactor(nodes) * dt_ * raw_weights(nodes)[p];
}

}  // namespace swsindy
