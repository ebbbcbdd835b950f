#include "swsindy/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>
#include <utility>

#include "swsindy/error.hpp"

namespace swsindy {

namespace {

constexpr char kStreamMagic[4] = {'S', 'W', 'S', 'Y'};
constexpr char kProblemsMagic[4] = {'S', 'W', 'S', 'P'};
constexpr char kArchiveMagic[4] = {'S', 'W', 'S', 'A'};
constexpr std::uint32_t kVersion = 1;

// Fixed container prefix: magic, version u32, manifest length u64.
constexpr std::uint64_t kMagicOffset = 0;
constexpr std::uint64_t kVersionOffset = 4;
constexpr std::uint64_t kManifestLenOffset = 8;
constexpr std::uint64_t kManifestOffset = 16;

// Stream header layout: magic, version u32, state dim u64, dt f64.
constexpr std::uint64_t kStreamStateDimOffset = 8;
constexpr std::uint64_t kStreamDtOffset = 16;
constexpr std::uint64_t kStreamPayloadOffset = 24;

template <typename T>
T byte_reversed(T v) {
  auto* p = reinterpret_cast<unsigned char*>(&v);
  std::reverse(p, p + sizeof(T));
  return v;
}

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return byte_reversed(v);
}

template <typename T>
T from_little(T v) {
  return to_little(v);
}

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  if (!out) throw std::runtime_error("write to output file failed");
}

void put_u32(std::ostream& out, std::uint32_t v) {
  v = to_little(v);
  put_bytes(out, &v, sizeof(v));
}

void put_u64(std::ostream& out, std::uint64_t v) {
  v = to_little(v);
  put_bytes(out, &v, sizeof(v));
}

void put_f64(std::ostream& out, double v) {
  const auto bits = to_little(std::bit_cast<std::uint64_t>(v));
  put_bytes(out, &bits, sizeof(bits));
}

void put_f64_span(std::ostream& out, const double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    put_bytes(out, data, n * sizeof(double));
  } else {
    for (std::size_t i = 0; i < n; ++i) put_f64(out, data[i]);
  }
}

void decode_f64_span(const char* src, double* dst, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(dst, src, n * sizeof(double));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, src + i * sizeof(bits), sizeof(bits));
      dst[i] = std::bit_cast<double>(from_little(bits));
    }
  }
}

// Named raw arrays staged behind a manifest.  Offsets are relative to the
// end of the manifest text so the manifest length never feeds back into the
// values it declares.
class ArrayBundle {
 public:
  void add_matrix(const std::string& name,
                  const Eigen::Ref<const Eigen::MatrixXd>& m) {
    std::vector<char> bytes(static_cast<std::size_t>(m.size()) * 8);
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                        Eigen::RowMajor>
        row_major = m;
    if (m.size() > 0)
      encode_f64(bytes.data(), row_major.data(),
                 static_cast<std::size_t>(m.size()));
    push(name, m.rows(), m.cols(), "f64", std::move(bytes));
  }

  void add_vector(const std::string& name,
                  const Eigen::Ref<const Eigen::VectorXd>& v) {
    std::vector<char> bytes(static_cast<std::size_t>(v.size()) * 8);
    if (v.size() > 0)
      encode_f64(bytes.data(), v.data(), static_cast<std::size_t>(v.size()));
    push(name, v.size(), 1, "f64", std::move(bytes));
  }

  void add_indices(const std::string& name,
                   const std::vector<std::int64_t>& v) {
    std::vector<char> bytes(v.size() * 8);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto le = to_little(static_cast<std::uint64_t>(v[i]));
      std::memcpy(bytes.data() + i * 8, &le, 8);
    }
    push(name, static_cast<Eigen::Index>(v.size()), 1, "i64",
         std::move(bytes));
  }

  nlohmann::json manifest() const {
    nlohmann::json arrays = nlohmann::json::object();
    std::uint64_t offset = 0;
    for (const auto& rec : records_) {
      arrays[rec.name] = {{"offset", offset},
                          {"rows", rec.rows},
                          {"cols", rec.cols},
                          {"dtype", rec.dtype}};
      offset += rec.bytes.size();
    }
    return arrays;
  }

  void write(std::ostream& out) const {
    for (const auto& rec : records_)
      if (!rec.bytes.empty()) put_bytes(out, rec.bytes.data(), rec.bytes.size());
  }

 private:
  struct Record {
    std::string name;
    Eigen::Index rows;
    Eigen::Index cols;
    const char* dtype;
    std::vector<char> bytes;
  };

  static void encode_f64(char* dst, const double* src, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(dst, src, n * sizeof(double));
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const auto bits = to_little(std::bit_cast<std::uint64_t>(src[i]));
        std::memcpy(dst + i * sizeof(bits), &bits, sizeof(bits));
      }
    }
  }

  void push(const std::string& name, Eigen::Index rows, Eigen::Index cols,
            const char* dtype, std::vector<char> bytes) {
    records_.push_back({name, rows, cols, dtype, std::move(bytes)});
  }

  std::vector<Record> records_;
};

void write_container(const std::filesystem::path& path, const char magic[4],
                     nlohmann::json manifest, const ArrayBundle& arrays) {
  manifest["arrays"] = arrays.manifest();
  const std::string text = manifest.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  put_bytes(out, magic, 4);
  put_u32(out, kVersion);
  put_u64(out, text.size());
  put_bytes(out, text.data(), text.size());
  arrays.write(out);
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

class ContainerReader {
 public:
  ContainerReader(const std::filesystem::path& path, const char magic[4]) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string(), 0);
    bytes_.assign(std::istreambuf_iterator<char>(in),
                  std::istreambuf_iterator<char>());
    if (bytes_.size() < kManifestOffset)
      throw FormatError("file shorter than its fixed header", bytes_.size());
    if (std::memcmp(bytes_.data(), magic, 4) != 0)
      throw FormatError("unrecognized magic bytes", kMagicOffset);
    std::uint32_t version;
    std::memcpy(&version, bytes_.data() + kVersionOffset, 4);
    if (from_little(version) != kVersion)
      throw FormatError("unsupported format version", kVersionOffset);
    std::uint64_t manifest_len;
    std::memcpy(&manifest_len, bytes_.data() + kManifestLenOffset, 8);
    manifest_len = from_little(manifest_len);
    if (kManifestOffset + manifest_len > bytes_.size())
      throw FormatError("manifest extends past end of file",
                        kManifestLenOffset);
    payload_ = kManifestOffset + manifest_len;
    try {
      manifest_ = nlohmann::json::parse(
          bytes_.data() + kManifestOffset, bytes_.data() + payload_);
    } catch (const nlohmann::json::exception&) {
      throw FormatError("manifest is not valid JSON", kManifestOffset);
    }
  }

  const nlohmann::json& manifest() const { return manifest_; }

  Eigen::MatrixXd matrix(const std::string& name) const {
    const auto [rec, abs] = locate(name, "f64");
    const auto rows = rec.at("rows").get<Eigen::Index>();
    const auto cols = rec.at("cols").get<Eigen::Index>();
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        row_major(rows, cols);
    if (row_major.size() > 0)
      decode_f64_span(bytes_.data() + abs, row_major.data(),
                      static_cast<std::size_t>(row_major.size()));
    return row_major;
  }

  Eigen::VectorXd vector(const std::string& name) const {
    const Eigen::MatrixXd m = matrix(name);
    if (m.cols() != 1 && m.size() != 0)
      throw FormatError("array " + name + " is not a column vector",
                        kManifestOffset);
    return m.col(0);
  }

  std::vector<std::int64_t> indices(const std::string& name) const {
    const auto [rec, abs] = locate(name, "i64");
    const auto rows = rec.at("rows").get<Eigen::Index>();
    std::vector<std::int64_t> out(static_cast<std::size_t>(rows));
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::uint64_t raw;
      std::memcpy(&raw, bytes_.data() + abs + i * 8, 8);
      out[i] = static_cast<std::int64_t>(from_little(raw));
    }
    return out;
  }

 private:
  // Returns the manifest record and the validated absolute byte offset.
  std::pair<nlohmann::json, std::uint64_t> locate(const std::string& name,
                                                  const char* dtype) const {
    const auto& arrays = manifest_.at("arrays");
    if (!arrays.contains(name))
      throw FormatError("manifest declares no array named " + name,
                        kManifestOffset);
    const nlohmann::json& rec = arrays.at(name);
    if (rec.at("dtype").get<std::string>() != dtype)
      throw FormatError("array " + name + " has unexpected element type",
                        kManifestOffset);
    const auto rows = rec.at("rows").get<std::int64_t>();
    const auto cols = rec.at("cols").get<std::int64_t>();
    const auto rel = rec.at("offset").get<std::uint64_t>();
    if (rows < 0 || cols < 0)
      throw FormatError("array " + name + " declares a negative shape",
                        kManifestOffset);
    const std::uint64_t abs = payload_ + rel;
    const std::uint64_t len =
        static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols) * 8;
    if (abs + len > bytes_.size())
      throw FormatError("array " + name + " extends past end of file", abs);
    return {rec, abs};
  }

  std::vector<char> bytes_;
  nlohmann::json manifest_;
  std::uint64_t payload_ = 0;
};

// Restart and seam samples carry as many values as there are live modes at
// their snapshot; on disk every row is zero-padded to the final mode count.
Eigen::MatrixXd pack_samples(const std::vector<RestartSample>& samples,
                             Eigen::Index width,
                             const std::vector<std::int64_t>& birth) {
  Eigen::MatrixXd packed = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(samples.size()), width);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Eigen::Index alive = 0;
    for (const std::int64_t b : birth)
      if (b <= samples[i].snapshot) ++alive;
    if (samples[i].values.size() != alive)
      throw std::invalid_argument(
          "sample width disagrees with the modes alive at its snapshot");
    packed.row(static_cast<Eigen::Index>(i)).head(alive) = samples[i].values;
  }
  return packed;
}

std::vector<RestartSample> unpack_samples(
    const std::vector<std::int64_t>& snapshots, const Eigen::MatrixXd& packed,
    const std::vector<std::int64_t>& birth) {
  if (packed.rows() != static_cast<Eigen::Index>(snapshots.size()))
    throw FormatError("sample index and value arrays disagree on length",
                      kManifestOffset);
  std::vector<RestartSample> samples;
  samples.reserve(snapshots.size());
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    Eigen::Index alive = 0;
    for (const std::int64_t b : birth)
      if (b <= snapshots[i]) ++alive;
    samples.push_back(
        {snapshots[i],
         packed.row(static_cast<Eigen::Index>(i)).head(alive).transpose()});
  }
  return samples;
}

std::vector<std::int64_t> sample_snapshots(
    const std::vector<RestartSample>& samples) {
  std::vector<std::int64_t> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.snapshot);
  return out;
}

// Shared by write_archive and the storage report so the manifest byte count
// in the report is the byte count on disk.
std::pair<nlohmann::json, ArrayBundle> archive_payload(const Archive& a) {
  const Eigen::Index width = a.mode_count();
  nlohmann::json manifest{{"format", "swsa"},
                          {"dt", a.dt},
                          {"horizon", a.horizon},
                          {"n_snapshots", a.n_snapshots},
                          {"restart_stride", a.restart_stride},
                          {"pod_enabled", a.pod_enabled},
                          {"truncated_seed", a.truncated_seed},
                          {"state_dim", a.state_dim},
                          {"mode_birth", a.mode_birth},
                          {"projection", a.basis.descriptor()},
                          {"test", a.test_descriptor},
                          {"restart_index", sample_snapshots(a.restarts)},
                          {"seam_index", sample_snapshots(a.seams)}};

  ArrayBundle arrays;
  arrays.add_matrix("spatial_modes", a.spatial_modes);
  arrays.add_matrix("restart_values", pack_samples(a.restarts, width, a.mode_birth));
  arrays.add_matrix("seam_values", pack_samples(a.seams, width, a.mode_birth));
  arrays.add_vector("seed_singular_values", a.seed_singular_values);
  for (std::size_t mode = 0; mode < a.coefficients.size(); ++mode) {
    const SparseCoefficients& c = a.coefficients[mode];
    std::vector<std::int64_t> support;
    Eigen::VectorXd values(c.nonzero_count());
    for (std::size_t i = 0; i < c.support.size(); ++i) {
      support.push_back(static_cast<std::int64_t>(c.support[i]));
      values[static_cast<Eigen::Index>(i)] = c.dense[c.support[i]];
    }
    const std::string tag = std::to_string(mode);
    arrays.add_indices("support_" + tag, support);
    arrays.add_vector("coefficients_" + tag, values);
  }
  return {std::move(manifest), std::move(arrays)};
}

}  // namespace

void write_stream(const std::filesystem::path& path, const SnapshotStream& s) {
  if (s.frames.empty())
    throw std::invalid_argument(
        "state dimension of an empty stream is unknown; use StreamWriter");
  StreamWriter writer(path, s.frames.front().size(), s.dt);
  for (const auto& frame : s.frames) writer.append(frame);
}

SnapshotStream read_stream(const std::filesystem::path& path) {
  StreamReader reader(path);
  SnapshotStream s;
  s.dt = reader.dt();
  while (auto frame = reader.next()) s.frames.push_back(std::move(*frame));
  return s;
}

StreamReader::StreamReader(const std::filesystem::path& path)
    : in_(path, std::ios::binary) {
  if (!in_) throw FormatError("cannot open " + path.string(), 0);
  char magic[4];
  in_.read(magic, 4);
  if (in_.gcount() != 4 || std::memcmp(magic, kStreamMagic, 4) != 0)
    throw FormatError("unrecognized magic bytes", kMagicOffset);
  std::uint32_t version;
  in_.read(reinterpret_cast<char*>(&version), 4);
  if (in_.gcount() != 4 || from_little(version) != kVersion)
    throw FormatError("unsupported format version", kVersionOffset);
  std::uint64_t dim;
  in_.read(reinterpret_cast<char*>(&dim), 8);
  if (in_.gcount() != 8)
    throw FormatError("truncated header", kStreamStateDimOffset);
  state_dim_ = static_cast<Eigen::Index>(from_little(dim));
  if (state_dim_ < 1)
    throw FormatError("state dimension must be positive",
                      kStreamStateDimOffset);
  std::uint64_t dt_bits;
  in_.read(reinterpret_cast<char*>(&dt_bits), 8);
  if (in_.gcount() != 8) throw FormatError("truncated header", kStreamDtOffset);
  dt_ = std::bit_cast<double>(from_little(dt_bits));
  if (!(dt_ > 0.0) || !std::isfinite(dt_))
    throw FormatError("snapshot spacing must be positive and finite",
                      kStreamDtOffset);
  offset_ = kStreamPayloadOffset;
}

std::optional<Eigen::VectorXd> StreamReader::next() {
  const std::uint64_t frame_start = offset_;
  const std::size_t frame_bytes = static_cast<std::size_t>(state_dim_) * 8;
  std::vector<char> raw(frame_bytes);
  in_.read(raw.data(), static_cast<std::streamsize>(frame_bytes));
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got == 0 && in_.eof()) return std::nullopt;
  if (got != frame_bytes)
    throw FormatError("truncated frame", frame_start);
  offset_ += frame_bytes;
  Eigen::VectorXd frame(state_dim_);
  decode_f64_span(raw.data(), frame.data(),
                  static_cast<std::size_t>(state_dim_));
  return frame;
}

SnapshotSource make_source(std::shared_ptr<StreamReader> reader) {
  return [reader]() { return reader->next(); };
}

StreamWriter::StreamWriter(const std::filesystem::path& path,
                           Eigen::Index state_dim, double dt)
    : out_(path, std::ios::binary | std::ios::trunc), state_dim_(state_dim) {
  if (!out_) throw std::runtime_error("cannot open " + path.string());
  put_bytes(out_, kStreamMagic, 4);
  put_u32(out_, kVersion);
  put_u64(out_, static_cast<std::uint64_t>(state_dim));
  put_f64(out_, dt);
}

void StreamWriter::append(const Eigen::Ref<const Eigen::VectorXd>& frame) {
  if (frame.size() != state_dim_)
    throw std::invalid_argument("frame dimension differs from the header");
  put_f64_span(out_, frame.data(), static_cast<std::size_t>(frame.size()));
}

void write_problems(const std::filesystem::path& path,
                    const CompressionResult& result) {
  const ProblemSet& p = result.problems;
  nlohmann::json segments = nlohmann::json::array();
  for (const ProblemSegment& s : p.segments)
    segments.push_back({{"first", s.first_snapshot}, {"last", s.last_snapshot}});
  nlohmann::json manifest{
      {"format", "swsp"},
      {"dt", p.dt},
      {"n_snapshots", p.n_snapshots},
      {"pod_enabled", p.pod_enabled},
      {"state_dim", result.state_dim},
      {"truncated_seed", result.truncated_seed},
      {"restart_stride", result.restart_stride},
      {"projection", p.basis.descriptor()},
      {"test", p.test_basis.descriptor()},
      {"mode_birth", p.mode_birth},
      {"segments", segments},
      {"restart_index", sample_snapshots(result.restarts)},
      {"seam_index", sample_snapshots(result.seams)}};

  ArrayBundle arrays;
  const Eigen::Index width = p.mode_count();
  arrays.add_matrix("spatial_modes", result.spatial_modes);
  arrays.add_matrix("restart_values",
             pack_samples(result.restarts, width, p.mode_birth));
  arrays.add_matrix("seam_values", pack_samples(result.seams, width, p.mode_birth));
  arrays.add_vector("seed_singular_values", result.seed_singular_values);
  for (std::size_t m = 0; m < p.segments.size(); ++m) {
    const std::string tag = std::to_string(m);
    arrays.add_matrix("features_" + tag, p.segments[m].features);
    arrays.add_matrix("targets_" + tag, p.segments[m].targets);
  }
  write_container(path, kProblemsMagic, std::move(manifest), arrays);
}

CompressionResult read_problems(const std::filesystem::path& path) {
  const ContainerReader reader(path, kProblemsMagic);
  const nlohmann::json& m = reader.manifest();
  try {
    auto basis = MonomialBasis::from_descriptor(m.at("projection"));
    auto test = FourierTestBasis::from_descriptor(m.at("test"));
    const auto mode_birth = m.at("mode_birth").get<std::vector<std::int64_t>>();

    std::vector<ProblemSegment> segments;
    for (std::size_t i = 0; i < m.at("segments").size(); ++i) {
      const std::string tag = std::to_string(i);
      const nlohmann::json& rec = m.at("segments").at(i);
      segments.push_back({reader.matrix("features_" + tag),
                          reader.matrix("targets_" + tag),
                          rec.at("first").get<std::int64_t>(),
                          rec.at("last").get<std::int64_t>()});
    }

    const auto restart_index =
        m.at("restart_index").get<std::vector<std::int64_t>>();
    const auto seam_index = m.at("seam_index").get<std::vector<std::int64_t>>();
    return CompressionResult{
        ProblemSet{std::move(basis), std::move(test), std::move(segments),
                   mode_birth, m.at("dt").get<double>(),
                   m.at("n_snapshots").get<std::int64_t>(),
                   m.at("pod_enabled").get<bool>()},
        reader.matrix("spatial_modes"),
        unpack_samples(restart_index, reader.matrix("restart_values"),
                       mode_birth),
        unpack_samples(seam_index, reader.matrix("seam_values"), mode_birth),
        m.at("restart_stride").get<std::int64_t>(),
        m.at("state_dim").get<Eigen::Index>(),
        m.at("truncated_seed").get<bool>(),
        reader.vector("seed_singular_values"),
        {},
        {},
        {}};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest field error: ") + e.what(),
                      kManifestOffset);
  }
}

Eigen::Index Archive::modes_alive_at(std::int64_t snapshot) const {
  Eigen::Index alive = 0;
  for (const std::int64_t b : mode_birth)
    if (b <= snapshot) ++alive;
  return alive;
}

Archive make_archive(const CompressionResult& result,
                     std::vector<SparseCoefficients> coefficients) {
  const ProblemSet& p = result.problems;
  if (static_cast<Eigen::Index>(coefficients.size()) != p.mode_count())
    throw std::invalid_argument("one coefficient vector per mode required");
  for (const SparseCoefficients& c : coefficients)
    if (c.dense.size() != p.basis.size())
      throw std::invalid_argument(
          "coefficient length differs from the dictionary size");
  return Archive{p.basis,
                 p.test_basis.descriptor(),
                 p.mode_birth,
                 std::move(coefficients),
                 result.spatial_modes,
                 result.restarts,
                 result.seams,
                 result.seed_singular_values,
                 p.dt,
                 p.test_basis.horizon(),
                 p.n_snapshots,
                 result.restart_stride,
                 p.pod_enabled,
                 result.truncated_seed,
                 result.state_dim};
}

void write_archive(const std::filesystem::path& path, const Archive& archive) {
  auto [manifest, arrays] = archive_payload(archive);
  write_container(path, kArchiveMagic, std::move(manifest), arrays);
}

Archive read_archive(const std::filesystem::path& path) {
  const ContainerReader reader(path, kArchiveMagic);
  const nlohmann::json& m = reader.manifest();
  try {
    auto basis = MonomialBasis::from_descriptor(m.at("projection"));
    const Eigen::Index dictionary = basis.size();
    const auto mode_birth = m.at("mode_birth").get<std::vector<std::int64_t>>();

    std::vector<SparseCoefficients> coefficients;
    for (std::size_t mode = 0; mode < mode_birth.size(); ++mode) {
      const std::string tag = std::to_string(mode);
      const auto support = reader.indices("support_" + tag);
      const Eigen::VectorXd values = reader.vector("coefficients_" + tag);
      if (static_cast<std::size_t>(values.size()) != support.size())
        throw FormatError("support and value arrays disagree on length",
                          kManifestOffset);
      SparseCoefficients c;
      c.dense = Eigen::VectorXd::Zero(dictionary);
      for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] < 0 || support[i] >= dictionary)
          throw FormatError("support index outside the dictionary",
                            kManifestOffset);
        c.support.push_back(static_cast<Eigen::Index>(support[i]));
        c.dense[c.support.back()] = values[static_cast<Eigen::Index>(i)];
      }
      c.emptied = c.support.empty();
      coefficients.push_back(std::move(c));
    }

    const auto restart_index =
        m.at("restart_index").get<std::vector<std::int64_t>>();
    const auto seam_index = m.at("seam_index").get<std::vector<std::int64_t>>();
    return Archive{std::move(basis),
                   m.at("test"),
                   mode_birth,
                   std::move(coefficients),
                   reader.matrix("spatial_modes"),
                   unpack_samples(restart_index,
                                  reader.matrix("restart_values"), mode_birth),
                   unpack_samples(seam_index, reader.matrix("seam_values"),
                                  mode_birth),
                   reader.vector("seed_singular_values"),
                   m.at("dt").get<double>(),
                   m.at("horizon").get<double>(),
                   m.at("n_snapshots").get<std::int64_t>(),
                   m.at("restart_stride").get<std::int64_t>(),
                   m.at("pod_enabled").get<bool>(),
                   m.at("truncated_seed").get<bool>(),
                   m.at("state_dim").get<Eigen::Index>()};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest field error: ") + e.what(),
                      kManifestOffset);
  }
}

OnlineStorageReport account_online(const ProblemSet& problems,
                                   Eigen::Index state_dim) {
  OnlineStorageReport report;
  report.feature_entries = problems.feature_entry_count();
  report.target_entries = problems.target_entry_count();
  report.data_entries = state_dim * problems.n_snapshots;
  return report;
}

OnlineStorageReport account_online(const Archive& archive) {
  OnlineStorageReport report;
  report.data_entries = archive.state_dim * archive.n_snapshots;
  if (archive.mode_birth.empty()) return report;

  const Eigen::Index k =
      FourierTestBasis::from_descriptor(archive.test_descriptor).size();
  const std::int64_t first = archive.mode_birth.front();
  Eigen::Index seed = 0;
  for (const std::int64_t b : archive.mode_birth)
    if (b == first) ++seed;
  for (Eigen::Index alive = seed; alive <= archive.mode_count(); ++alive) {
    const MonomialBasis stage(alive, archive.basis.policy(),
                              archive.basis.degree());
    report.feature_entries += k * stage.size();
    report.target_entries += k * alive;
  }
  return report;
}

OfflineStorageReport account_offline(const Archive& archive) {
  OfflineStorageReport report;
  report.mode_entries = archive.spatial_modes.size();
  for (const SparseCoefficients& c : archive.coefficients)
    report.coefficient_entries += 2 * c.nonzero_count();
  report.coefficient_dense_entries =
      archive.mode_count() * archive.basis.size();
  report.restart_entries =
      static_cast<Eigen::Index>(archive.restarts.size()) * archive.mode_count();
  report.seam_entries =
      static_cast<Eigen::Index>(archive.seams.size()) * archive.mode_count();
  report.data_entries = archive.state_dim * archive.n_snapshots;
  auto [manifest, arrays] = archive_payload(archive);
  manifest["arrays"] = arrays.manifest();
  report.manifest_bytes = manifest.dump().size();
  return report;
}

}  // namespace swsindy
