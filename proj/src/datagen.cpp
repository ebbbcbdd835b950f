#include "swsindy/datagen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "swsindy/error.hpp"

namespace swsindy {

SnapshotStream lorenz_stream(std::int64_t n, double dt,
                             const LorenzParams& params,
                             const OdeOptions& options) {
  if (n < 1) throw std::invalid_argument("snapshot count must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");

  auto rhs = [params](double, const Eigen::VectorXd& u, Eigen::VectorXd& du) {
    du.resize(3);
    du(0) = params.sigma * (u(1) - u(0));
    du(1) = u(0) * (params.rho - u(2)) - u(1);
    du(2) = u(0) * u(1) - params.beta * u(2);
  };

  SnapshotStream stream;
  stream.dt = dt;
  stream.frames.reserve(static_cast<std::size_t>(n));
  Eigen::VectorXd u = params.x0;
  stream.frames.push_back(u);
  AdaptiveRk45 solver(rhs, options);
  for (std::int64_t i = 1; i < n; ++i) {
    solver.advance(static_cast<double>(i - 1) * dt,
                   static_cast<double>(i) * dt, u);
    stream.frames.push_back(u);
  }
  return stream;
}

Eigen::VectorXd field_frame(const FieldSpec& spec, std::int64_t n) {
  if (n < 1 || n > spec.n_snapshots)
    throw std::invalid_argument("snapshot index out of range");
  const double t = static_cast<double>(n - 1) * spec.dt;
  Eigen::VectorXd frame = Eigen::VectorXd::Zero(spec.state_dim());
  for (const auto& component : spec.components) {
    if (component.pattern.size() != spec.state_dim())
      throw std::invalid_argument("pattern length does not match the grid");
    frame += component.signal(t) * component.pattern;
  }
  if (spec.overlay) spec.overlay(t, frame);
  return frame;
}

SnapshotStream generate_field(const FieldSpec& spec) {
  if (spec.n_snapshots < 1)
    throw std::invalid_argument("snapshot count must be positive");
  if (!(spec.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  SnapshotStream stream;
  stream.dt = spec.dt;
  stream.frames.reserve(static_cast<std::size_t>(spec.n_snapshots));
  for (std::int64_t n = 1; n <= spec.n_snapshots; ++n)
    stream.frames.push_back(field_frame(spec, n));
  return stream;
}

SnapshotSource field_source(const FieldSpec& spec) {
  return make_source(spec.n_snapshots, [spec](std::int64_t n) {
    return field_frame(spec, n);
  });
}

Eigen::VectorXd gaussian_pattern(int h, int w, double cx, double cy,
                                 double sigma) {
  if (h < 1 || w < 1) throw std::invalid_argument("grid must be non-empty");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  Eigen::VectorXd pattern(static_cast<Eigen::Index>(h) * w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const double dr = (r - cy) / sigma;
      const double dc = (c - cx) / sigma;
      pattern(static_cast<Eigen::Index>(r) * w + c) =
          std::exp(-0.5 * (dr * dr + dc * dc));
    }
  return pattern / pattern.norm();
}

Eigen::VectorXd cosine_pattern(int h, int w, int kx, int ky) {
  if (h < 1 || w < 1) throw std::invalid_argument("grid must be non-empty");
  if (kx < 0 || kx >= w || ky < 0 || ky >= h)
    throw std::invalid_argument("wavenumber outside the grid range");
  Eigen::VectorXd pattern(static_cast<Eigen::Index>(h) * w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      pattern(static_cast<Eigen::Index>(r) * w + c) =
          std::cos(M_PI * kx * (c + 0.5) / w) *
          std::cos(M_PI * ky * (r + 0.5) / h);
  return pattern / pattern.norm();
}

void orthonormalize(std::vector<Eigen::VectorXd>& vectors) {
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      vectors[i] -= vectors[j].dot(vectors[i]) * vectors[j];
    const double norm = vectors[i].norm();
    if (norm < 1e-12)
      throw std::invalid_argument("vectors are not linearly independent");
    vectors[i] /= norm;
  }
}

namespace {

std::function<double(double)> signal_from_json(const nlohmann::json& doc) {
  const std::string type = doc.at("type").get<std::string>();
  const double a = doc.value("amplitude", 1.0);
  if (type == "constant") return [a](double) { return a; };
  if (type == "ramp") return [a](double t) { return a * t; };
  if (type == "sin" || type == "cos") {
    const double f = doc.at("frequency").get<double>();
    const double phase = doc.value("phase", 0.0);
    if (type == "sin")
      return [a, f, phase](double t) {
        return a * std::sin(2 * M_PI * f * t + phase);
      };
    return [a, f, phase](double t) {
      return a * std::cos(2 * M_PI * f * t + phase);
    };
  }
  if (type == "onset-exp") {
    const double onset = doc.at("onset").get<double>();
    const double rate = doc.at("rate").get<double>();
    return [a, onset, rate](double t) {
      return t < onset ? 0.0 : a * (1.0 - std::exp(-rate * (t - onset)));
    };
  }
  throw ConfigError("unknown signal type: " + type);
}

Eigen::VectorXd pattern_from_json(const nlohmann::json& doc, int h, int w) {
  const std::string type = doc.at("type").get<std::string>();
  if (type == "gaussian")
    return gaussian_pattern(h, w, doc.at("cx").get<double>(),
                            doc.at("cy").get<double>(),
                            doc.at("sigma").get<double>());
  if (type == "cosine")
    return cosine_pattern(h, w, doc.at("kx").get<int>(),
                          doc.at("ky").get<int>());
  throw ConfigError("unknown pattern type: " + type);
}

}  // namespace

FieldSpec field_spec_from_json(const nlohmann::json& doc) {
  FieldSpec spec;
  try {
    spec.height = doc.at("height").get<int>();
    spec.width = doc.at("width").get<int>();
    spec.n_snapshots = doc.at("snapshots").get<std::int64_t>();
    spec.dt = doc.at("dt").get<double>();
    for (const auto& item : doc.value("components", nlohmann::json::array())) {
      FieldComponent component;
      component.pattern =
          pattern_from_json(item.at("pattern"), spec.height, spec.width);
      component.signal = signal_from_json(item.at("signal"));
      spec.components.push_back(std::move(component));
    }
    if (doc.contains("traveling_bump")) {
      const auto& bump = doc.at("traveling_bump");
      const double amplitude = bump.value("amplitude", 1.0);
      const double sigma = bump.at("sigma").get<double>();
      const double row = bump.value("row", 0.0);
      const double c0 = bump.at("start_col").get<double>();
      const double c1 = bump.at("end_col").get<double>();
      const double t0 = bump.at("start_time").get<double>();
      const double t1 = bump.at("end_time").get<double>();
      if (!(t1 > t0)) throw ConfigError("bump times must be increasing");
      const int h = spec.height;
      const int w = spec.width;
      spec.overlay = [=](double t, Eigen::VectorXd& frame) {
        const double phase = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
        const double col = c0 + phase * (c1 - c0);
        for (int r = 0; r < h; ++r)
          for (int c = 0; c < w; ++c) {
            const double dr = (r - row) / sigma;
            const double dc = (c - col) / sigma;
            frame(static_cast<Eigen::Index>(r) * w + c) +=
                amplitude * std::exp(-0.5 * (dr * dr + dc * dc));
          }
      };
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed field specification: ") +
                      e.what());
  }
  return spec;
}

}  // namespace swsindy
