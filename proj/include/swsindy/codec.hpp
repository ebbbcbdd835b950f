#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <vector>

#include "swsindy/bases.hpp"
#include "swsindy/pipeline.hpp"
#include "swsindy/regression.hpp"
#include "swsindy/stream.hpp"

namespace swsindy {

// Snapshot stream file: "SWSY", version u32, state dimension u64, spacing
// f64, then frames of state_dim little-endian f64 values until end of file.
// The frame count is intentionally absent; streams end when they end.
void write_stream(const std::filesystem::path& path, const SnapshotStream& s);
SnapshotStream read_stream(const std::filesystem::path& path);

// One-pass reader over a snapshot stream file; frames decode lazily so a
// consumer never holds more than one in memory.
class StreamReader {
 public:
  explicit StreamReader(const std::filesystem::path& path);

  Eigen::Index state_dim() const noexcept { return state_dim_; }
  double dt() const noexcept { return dt_; }
  std::optional<Eigen::VectorXd> next();

 private:
  std::ifstream in_;
  Eigen::Index state_dim_ = 0;
  double dt_ = 0.0;
  std::uint64_t offset_ = 0;
};

SnapshotSource make_source(std::shared_ptr<StreamReader> reader);

// Append-only writer for the same format, for emitters that produce frames
// one at a time.
class StreamWriter {
 public:
  StreamWriter(const std::filesystem::path& path, Eigen::Index state_dim,
               double dt);
  void append(const Eigen::Ref<const Eigen::VectorXd>& frame);

 private:
  std::ofstream out_;
  Eigen::Index state_dim_;
};

// Intermediate problem file: everything the offline solve needs, so the
// online and offline phases can run on different machines.
void write_problems(const std::filesystem::path& path,
                    const CompressionResult& result);
CompressionResult read_problems(const std::filesystem::path& path);

// The compressed representation: spatial modes, per-mode sparse coefficient
// vectors, restart and seam samples, and the manifest that binds them.
struct Archive {
  MonomialBasis basis;            // final projection dictionary
  nlohmann::json test_descriptor;
  std::vector<std::int64_t> mode_birth;
  std::vector<SparseCoefficients> coefficients;  // dense length basis.size()
  Eigen::MatrixXd spatial_modes;                 // S x L; 0 x 0 without modes
  std::vector<RestartSample> restarts;
  std::vector<RestartSample> seams;
  Eigen::VectorXd seed_singular_values;
  double dt = 0.0;
  double horizon = 0.0;
  std::int64_t n_snapshots = 0;
  std::int64_t restart_stride = 0;
  bool pod_enabled = true;
  bool truncated_seed = false;
  Eigen::Index state_dim = 0;

  Eigen::Index mode_count() const {
    return static_cast<Eigen::Index>(mode_birth.size());
  }
  // Number of modes already born at a snapshot; restart and seam samples
  // store exactly this many values and are zero-padded on disk.
  Eigen::Index modes_alive_at(std::int64_t snapshot) const;
};

Archive make_archive(const CompressionResult& result,
                     std::vector<SparseCoefficients> coefficients);

void write_archive(const std::filesystem::path& path, const Archive& archive);
Archive read_archive(const std::filesystem::path& path);

// Entry counts held while streaming, against the raw data seen so far.  The
// online representation only pays off while it stays smaller than the data.
struct OnlineStorageReport {
  Eigen::Index feature_entries = 0;
  Eigen::Index target_entries = 0;
  Eigen::Index data_entries = 0;

  Eigen::Index total() const { return feature_entries + target_entries; }
  bool efficient() const { return total() < data_entries; }
};

OnlineStorageReport account_online(const ProblemSet& problems,
                                   Eigen::Index state_dim);

// The same counts recomputed from the archive alone.  Segment widths follow
// from the birth order (modes append one at a time after the seed) and the
// dictionary policy, so reporting does not need the problem file.
OnlineStorageReport account_online(const Archive& archive);

// Entry counts of the final archive.  Coefficients are stored sparsely
// (support index + value per surviving term); the dense equivalent is
// reported alongside for comparison against full coefficient tables.
struct OfflineStorageReport {
  Eigen::Index mode_entries = 0;               // S * L
  Eigen::Index coefficient_entries = 0;        // sum over modes of 2|support|
  Eigen::Index coefficient_dense_entries = 0;  // L * J
  Eigen::Index restart_entries = 0;            // padded, count * L
  Eigen::Index seam_entries = 0;               // padded, count * L
  Eigen::Index data_entries = 0;               // S * N
  std::uint64_t manifest_bytes = 0;

  Eigen::Index total() const {
    return mode_entries + coefficient_entries + restart_entries + seam_entries;
  }
};

OfflineStorageReport account_offline(const Archive& archive);

}  // namespace swsindy
