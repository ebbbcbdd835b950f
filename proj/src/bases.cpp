#include "swsindy/bases.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swsindy {

namespace {

// Emits all exponent tuples with the given total degree, per-coordinate cap,
// and descending lexicographic order within the degree class.
void emit_with_sum(int dim, int pos, int remaining, int cap,
                   std::vector<int>& tuple,
                   std::vector<std::vector<int>>& out) {
  if (pos == dim - 1) {
    if (remaining <= cap) {
      tuple[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(tuple);
    }
    return;
  }
  for (int e = std::min(cap, remaining); e >= 0; --e) {
    tuple[static_cast<std::size_t>(pos)] = e;
    emit_with_sum(dim, pos + 1, remaining - e, cap, tuple, out);
  }
}

std::vector<std::vector<int>> enumerate_terms(int dim, DegreePolicy policy,
                                              int degree) {
  const int max_sum =
      (policy == DegreePolicy::kMaxDegree) ? degree * dim : degree;
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(static_cast<std::size_t>(dim), 0);
  for (int g = 0; g <= max_sum; ++g)
    emit_with_sum(dim, 0, g, degree, tuple, out);
  return out;
}

}  // namespace

std::string to_string(DegreePolicy policy) {
  return policy == DegreePolicy::kTotalDegree ? "total-degree" : "max-degree";
}

DegreePolicy degree_policy_from_string(const std::string& name) {
  if (name == "total-degree") return DegreePolicy::kTotalDegree;
  if (name == "max-degree") return DegreePolicy::kMaxDegree;
  throw std::invalid_argument("unknown degree policy: " + name);
}

MonomialBasis::MonomialBasis(int dim, DegreePolicy policy, int degree)
    : dim_(dim), policy_(policy), degree_(degree) {
  if (dim < 1) throw std::invalid_argument("state dimension must be positive");
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  dim_history_.push_back(dim);
  exponents_ = enumerate_terms(dim, policy, degree);
}

Eigen::Index MonomialBasis::extend(int new_dim) {
  if (new_dim <= dim_)
    throw std::invalid_argument(
        "extension must increase the state dimension");
  for (auto& e : exponents_) e.resize(static_cast<std::size_t>(new_dim), 0);
  const auto full = enumerate_terms(new_dim, policy_, degree_);
  Eigen::Index added = 0;
  for (const auto& tuple : full) {
    bool uses_new = false;
    for (int i = dim_; i < new_dim; ++i)
      uses_new |= tuple[static_cast<std::size_t>(i)] != 0;
    if (uses_new) {
      exponents_.push_back(tuple);
      ++added;
    }
  }
  dim_ = new_dim;
  dim_history_.push_back(new_dim);
  return added;
}

void MonomialBasis::eval(const Eigen::Ref<const Eigen::VectorXd>& state,
                         Eigen::Ref<Eigen::VectorXd> out) const {
  if (state.size() != dim_)
    throw std::invalid_argument("state dimension does not match the basis");
  if (out.size() != size())
    throw std::invalid_argument("output size does not match the basis");
  for (Eigen::Index j = 0; j < size(); ++j) {
    const auto& tuple = exponents_[static_cast<std::size_t>(j)];
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) {
      const int e = tuple[static_cast<std::size_t>(i)];
      for (int r = 0; r < e; ++r) v *= state(i);
    }
    out(j) = v;
  }
}

Eigen::VectorXd MonomialBasis::eval(
    const Eigen::Ref<const Eigen::VectorXd>& state) const {
  Eigen::VectorXd out(size());
  eval(state, out);
  return out;
}

nlohmann::json MonomialBasis::descriptor() const {
  return {{"type", "monomial"},
          {"policy", to_string(policy_)},
          {"degree", degree_},
          {"dims", dim_history_}};
}

MonomialBasis MonomialBasis::from_descriptor(const nlohmann::json& desc) {
  if (desc.at("type").get<std::string>() != "monomial")
    throw std::invalid_argument("descriptor does not name a monomial basis");
  const auto dims = desc.at("dims").get<std::vector<int>>();
  if (dims.empty()) throw std::invalid_argument("empty dimension history");
  MonomialBasis basis(dims[0],
                      degree_policy_from_string(
                          desc.at("policy").get<std::string>()),
                      desc.at("degree").get<int>());
  for (std::size_t i = 1; i < dims.size(); ++i) basis.extend(dims[i]);
  return basis;
}

FourierTestBasis::FourierTestBasis(int pair_count, double horizon)
    : pair_count_(pair_count), horizon_(horizon) {
  if (pair_count < 0)
    throw std::invalid_argument("pair count must be non-negative");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("horizon must be positive and finite");
}

double FourierTestBasis::boundary_slack() const {
  return 1e-9 * std::max(horizon_, 1.0);
}

void FourierTestBasis::check_domain(double t) const {
  const double slack = boundary_slack();
  if (!(t >= -slack && t <= horizon_ + slack))
    throw std::invalid_argument("evaluation time outside [0, T]");
}

void FourierTestBasis::eval(double t, Eigen::Ref<Eigen::VectorXd> out) const {
  check_domain(t);
  if (out.size() != size())
    throw std::invalid_argument("output size does not match the basis");
  const double amp = std::sqrt(2.0 / horizon_);
  const double theta = 2.0 * M_PI * t / horizon_;
  for (int k = 1; k <= pair_count_; ++k) {
    out(k - 1) = amp * std::sin(k * theta);
    out(pair_count_ + k - 1) = amp * std::cos(k * theta);
  }
  out(2 * pair_count_) = 1.0 / std::sqrt(horizon_);
}

void FourierTestBasis::eval_derivative(double t,
                                       Eigen::Ref<Eigen::VectorXd> out) const {
  check_domain(t);
  if (out.size() != size())
    throw std::invalid_argument("output size does not match the basis");
  const double amp = std::sqrt(2.0 / horizon_);
  const double theta = 2.0 * M_PI * t / horizon_;
  for (int k = 1; k <= pair_count_; ++k) {
    const double omega = 2.0 * M_PI * k / horizon_;
    out(k - 1) = amp * omega * std::cos(k * theta);
    out(pair_count_ + k - 1) = -amp * omega * std::sin(k * theta);
  }
  out(2 * pair_count_) = 0.0;
}

Eigen::VectorXd FourierTestBasis::eval(double t) const {
  Eigen::VectorXd out(size());
  eval(t, out);
  return out;
}

Eigen::VectorXd FourierTestBasis::eval_derivative(double t) const {
  Eigen::VectorXd out(size());
  eval_derivative(t, out);
  return out;
}

nlohmann::json FourierTestBasis::descriptor() const {
  return {{"type", "fourier"},
          {"pair_count", pair_count_},
          {"horizon", horizon_}};
}

FourierTestBasis FourierTestBasis::from_descriptor(const nlohmann::json& desc) {
  if (desc.at("type").get<std::string>() != "fourier")
    throw std::invalid_argument("descriptor does not name a Fourier basis");
  return FourierTestBasis(desc.at("pair_count").get<int>(),
                          desc.at("horizon").get<double>());
}

}  // namespace swsindy
