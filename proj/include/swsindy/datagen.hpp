#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <vector>

#include "swsindy/ode.hpp"
#include "swsindy/stream.hpp"

namespace swsindy {

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  Eigen::Vector3d x0{-8.0, 7.0, 27.0};
};

// Samples a Lorenz trajectory at n uniform snapshots spaced dt apart,
// starting from x0 at t = 0.  Same arguments, bit-identical output.
SnapshotStream lorenz_stream(std::int64_t n, double dt,
                             const LorenzParams& params = {},
                             const OdeOptions& options = {});

// Synthetic low-rank grid field: a sum of fixed spatial patterns driven by
// temporal signals, plus an optional additive overlay for structures that
// drift through the grid.
struct FieldComponent {
  Eigen::VectorXd pattern;               // length height * width
  std::function<double(double)> signal;  // amplitude at time t
};

struct FieldSpec {
  int height = 1;
  int width = 1;
  std::int64_t n_snapshots = 0;
  double dt = 0.0;
  std::vector<FieldComponent> components;
  std::function<void(double, Eigen::VectorXd&)> overlay;  // may be empty

  Eigen::Index state_dim() const {
    return static_cast<Eigen::Index>(height) * width;
  }
};

Eigen::VectorXd field_frame(const FieldSpec& spec, std::int64_t n);  // 1-based
SnapshotStream generate_field(const FieldSpec& spec);
SnapshotSource field_source(const FieldSpec& spec);

// Deterministic pattern builders on an h x w grid, flattened row-major and
// normalized to unit Euclidean norm.
Eigen::VectorXd gaussian_pattern(int h, int w, double cx, double cy,
                                 double sigma);
// Separable cosine sheet; distinct (kx, ky) pairs are exactly orthogonal on
// the grid.
Eigen::VectorXd cosine_pattern(int h, int w, int kx, int ky);

// In-place modified Gram-Schmidt; vectors must be linearly independent.
void orthonormalize(std::vector<Eigen::VectorXd>& vectors);

// Builds a field specification from its JSON description; see the generator
// documentation for the schema.
FieldSpec field_spec_from_json(const nlohmann::json& doc);

}  // namespace swsindy
