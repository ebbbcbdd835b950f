#include "swsindy/codec.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <vector>

#include "swsindy/datagen.hpp"
#include "swsindy/error.hpp"
#include "swsindy/pipeline.hpp"

namespace {

namespace fs = std::filesystem;

using swsindy::account_offline;
using swsindy::account_online;
using swsindy::Archive;
using swsindy::build_block_system;
using swsindy::CompressionResult;
using swsindy::cosine_pattern;
using swsindy::DegreePolicy;
using swsindy::FieldSpec;
using swsindy::field_source;
using swsindy::FitConfig;
using swsindy::FormatError;
using swsindy::lorenz_stream;
using swsindy::make_archive;
using swsindy::make_source;
using swsindy::PipelineConfig;
using swsindy::ProblemSegment;
using swsindy::ProblemSet;
using swsindy::process_stream;
using swsindy::read_archive;
using swsindy::read_problems;
using swsindy::read_stream;
using swsindy::SnapshotStream;
using swsindy::solve_block_system;
using swsindy::StreamReader;
using swsindy::StreamWriter;
using swsindy::write_archive;
using swsindy::write_problems;
using swsindy::write_stream;

class CodecTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("swsindy-codec-" +
            std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "-" + ::testing::UnitTest::GetInstance()
                      ->current_test_info()
                      ->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

SnapshotStream random_stream(Eigen::Index dim, std::int64_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 3.0);
  SnapshotStream s;
  s.dt = 0.125;
  for (std::int64_t i = 0; i < n; ++i) {
    Eigen::VectorXd frame(dim);
    for (Eigen::Index j = 0; j < dim; ++j) frame[j] = gauss(rng);
    s.frames.push_back(std::move(frame));
  }
  return s;
}

// Two steady components plus one switching on at snapshot 31, so the
// compression result carries two segments, a seam, and a grown dictionary.
CompressionResult field_result() {
  FieldSpec spec;
  spec.height = 5;
  spec.width = 8;
  spec.n_snapshots = 60;
  spec.dt = 0.02;
  spec.components.push_back({cosine_pattern(5, 8, 1, 0), [](double t) {
                               return 1.0 + 0.4 * std::sin(2 * M_PI * t);
                             }});
  spec.components.push_back({cosine_pattern(5, 8, 0, 1), [](double t) {
                               return 0.7 * std::cos(2 * M_PI * t);
                             }});
  spec.components.push_back({cosine_pattern(5, 8, 1, 1), [](double t) {
                               return t < 0.59 ? 0.0 : 0.8;
                             }});

  PipelineConfig config;
  config.dt = spec.dt;
  config.horizon = static_cast<double>(spec.n_snapshots - 1) * spec.dt;
  config.test_pair_count = 2;
  config.degree = 2;
  config.window = 12;
  config.eps_spectral = 1e-6;
  config.eps_residual = 0.1;
  config.restart_stride = 10;
  return process_stream(field_source(spec), config);
}

TEST_F(CodecTest, StreamRoundTripIsBitIdentical) {
  const SnapshotStream original = random_stream(7, 100, 42);
  write_stream(file("s.swsy"), original);
  const SnapshotStream loaded = read_stream(file("s.swsy"));
  EXPECT_EQ(loaded.dt, original.dt);
  ASSERT_EQ(loaded.frames.size(), original.frames.size());
  for (std::size_t i = 0; i < loaded.frames.size(); ++i)
    EXPECT_EQ(loaded.frames[i], original.frames[i]) << "frame " << i;
}

TEST_F(CodecTest, HeaderOnlyFileIsAnEmptyStream) {
  { StreamWriter writer(file("empty.swsy"), 4, 0.5); }
  const SnapshotStream loaded = read_stream(file("empty.swsy"));
  EXPECT_EQ(loaded.dt, 0.5);
  EXPECT_TRUE(loaded.frames.empty());
  EXPECT_THROW(write_stream(file("x.swsy"), SnapshotStream{}),
               std::invalid_argument);
}

TEST_F(CodecTest, FileSizeIsHeaderPlusPayload) {
  const auto stream = lorenz_stream(101, 0.01);
  write_stream(file("l.swsy"), stream);
  EXPECT_EQ(fs::file_size(file("l.swsy")), 24u + 101u * 3u * 8u);
}

TEST_F(CodecTest, LazyReaderMatchesMaterializedRead) {
  const SnapshotStream original = random_stream(5, 33, 7);
  write_stream(file("s.swsy"), original);
  auto reader = std::make_shared<StreamReader>(file("s.swsy"));
  EXPECT_EQ(reader->state_dim(), 5);
  EXPECT_EQ(reader->dt(), 0.125);
  auto source = make_source(reader);
  for (const auto& frame : original.frames) {
    const auto got = source();
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, frame);
  }
  EXPECT_FALSE(source().has_value());
}

TEST_F(CodecTest, BadMagicAndVersionReportTheirOffsets) {
  {
    std::ofstream out(file("junk.swsy"), std::ios::binary);
    out.write("JUNKJUNKJUNKJUNKJUNKJUNKJUNK", 28);
  }
  try {
    read_stream(file("junk.swsy"));
    FAIL() << "bad magic accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.byte_offset(), 0u);
  }

  {
    std::ofstream out(file("v9.swsy"), std::ios::binary);
    out.write("SWSY", 4);
    const std::uint32_t version = 9;
    out.write(reinterpret_cast<const char*>(&version), 4);
    const std::uint64_t dim = 3;
    out.write(reinterpret_cast<const char*>(&dim), 8);
    const double dt = 0.1;
    out.write(reinterpret_cast<const char*>(&dt), 8);
  }
  try {
    read_stream(file("v9.swsy"));
    FAIL() << "future version accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.byte_offset(), 4u);
  }
}

TEST_F(CodecTest, TruncatedFrameReportsWhereTheFrameBegan) {
  write_stream(file("t.swsy"), random_stream(3, 5, 3));
  // Keep the header, two whole frames, and five stray bytes of the third.
  fs::resize_file(file("t.swsy"), 24 + 2 * 24 + 5);
  try {
    read_stream(file("t.swsy"));
    FAIL() << "truncated frame accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.byte_offset(), 24u + 2u * 24u);
  }

  fs::resize_file(file("t.swsy"), 8);
  EXPECT_THROW(read_stream(file("t.swsy")), FormatError);
}

TEST_F(CodecTest, ProblemsRoundTrip) {
  const CompressionResult original = field_result();
  write_problems(file("p.swsp"), original);
  const CompressionResult loaded = read_problems(file("p.swsp"));

  EXPECT_EQ(loaded.problems.dt, original.problems.dt);
  EXPECT_EQ(loaded.problems.n_snapshots, original.problems.n_snapshots);
  EXPECT_EQ(loaded.problems.pod_enabled, original.problems.pod_enabled);
  EXPECT_EQ(loaded.problems.mode_birth, original.problems.mode_birth);
  EXPECT_EQ(loaded.restart_stride, original.restart_stride);
  EXPECT_EQ(loaded.state_dim, original.state_dim);
  EXPECT_EQ(loaded.truncated_seed, original.truncated_seed);

  EXPECT_EQ(loaded.problems.basis.exponents(),
            original.problems.basis.exponents());
  EXPECT_EQ(loaded.problems.test_basis.pair_count(),
            original.problems.test_basis.pair_count());
  EXPECT_EQ(loaded.problems.test_basis.horizon(),
            original.problems.test_basis.horizon());

  ASSERT_EQ(loaded.problems.segments.size(), original.problems.segments.size());
  for (std::size_t m = 0; m < loaded.problems.segments.size(); ++m) {
    const ProblemSegment& a = loaded.problems.segments[m];
    const ProblemSegment& b = original.problems.segments[m];
    EXPECT_EQ(a.first_snapshot, b.first_snapshot);
    EXPECT_EQ(a.last_snapshot, b.last_snapshot);
    EXPECT_EQ(a.features, b.features);
    EXPECT_EQ(a.targets, b.targets);
  }

  EXPECT_EQ(loaded.spatial_modes, original.spatial_modes);
  EXPECT_EQ(loaded.seed_singular_values, original.seed_singular_values);
  ASSERT_EQ(loaded.restarts.size(), original.restarts.size());
  for (std::size_t i = 0; i < loaded.restarts.size(); ++i) {
    EXPECT_EQ(loaded.restarts[i].snapshot, original.restarts[i].snapshot);
    EXPECT_EQ(loaded.restarts[i].values, original.restarts[i].values);
  }
  ASSERT_EQ(loaded.seams.size(), original.seams.size());
  for (std::size_t i = 0; i < loaded.seams.size(); ++i) {
    EXPECT_EQ(loaded.seams[i].snapshot, original.seams[i].snapshot);
    EXPECT_EQ(loaded.seams[i].values, original.seams[i].values);
  }
}

TEST_F(CodecTest, ArchiveRoundTrip) {
  const CompressionResult result = field_result();
  const auto fits =
      solve_block_system(build_block_system(result.problems),
                         {FitConfig{1e-6, 0.05, 0}});
  const Archive original = make_archive(result, fits);
  write_archive(file("a.swsa"), original);
  const Archive loaded = read_archive(file("a.swsa"));

  EXPECT_EQ(loaded.dt, original.dt);
  EXPECT_EQ(loaded.horizon, original.horizon);
  EXPECT_EQ(loaded.n_snapshots, original.n_snapshots);
  EXPECT_EQ(loaded.restart_stride, original.restart_stride);
  EXPECT_EQ(loaded.pod_enabled, original.pod_enabled);
  EXPECT_EQ(loaded.truncated_seed, original.truncated_seed);
  EXPECT_EQ(loaded.state_dim, original.state_dim);
  EXPECT_EQ(loaded.mode_birth, original.mode_birth);
  EXPECT_EQ(loaded.basis.exponents(), original.basis.exponents());
  EXPECT_EQ(loaded.test_descriptor, original.test_descriptor);
  EXPECT_EQ(loaded.spatial_modes, original.spatial_modes);
  EXPECT_EQ(loaded.seed_singular_values, original.seed_singular_values);

  ASSERT_EQ(loaded.coefficients.size(), original.coefficients.size());
  for (std::size_t mode = 0; mode < loaded.coefficients.size(); ++mode) {
    EXPECT_EQ(loaded.coefficients[mode].support,
              original.coefficients[mode].support);
    EXPECT_EQ(loaded.coefficients[mode].dense,
              original.coefficients[mode].dense);
  }
  ASSERT_EQ(loaded.restarts.size(), original.restarts.size());
  for (std::size_t i = 0; i < loaded.restarts.size(); ++i)
    EXPECT_EQ(loaded.restarts[i].values, original.restarts[i].values);
  ASSERT_EQ(loaded.seams.size(), original.seams.size());
  for (std::size_t i = 0; i < loaded.seams.size(); ++i)
    EXPECT_EQ(loaded.seams[i].values, original.seams[i].values);
}

TEST_F(CodecTest, ContainersRejectForeignAndCorruptFiles) {
  const CompressionResult result = field_result();
  write_problems(file("p.swsp"), result);

  // An archive reader pointed at a problems file stops at the magic.
  try {
    read_archive(file("p.swsp"));
    FAIL() << "foreign magic accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.byte_offset(), 0u);
  }

  // Garbage manifest bytes.
  {
    std::ofstream out(file("bad.swsa"), std::ios::binary);
    out.write("SWSA", 4);
    const std::uint32_t version = 1;
    out.write(reinterpret_cast<const char*>(&version), 4);
    const std::uint64_t len = 5;
    out.write(reinterpret_cast<const char*>(&len), 8);
    out.write("hello", 5);
  }
  try {
    read_archive(file("bad.swsa"));
    FAIL() << "non-JSON manifest accepted";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.byte_offset(), 16u);
  }

  // A declared array that runs past the end of the file.
  const auto fits = solve_block_system(build_block_system(result.problems),
                                       {FitConfig{0.0, 0.05, 0}});
  write_archive(file("cut.swsa"), make_archive(result, fits));
  fs::resize_file(file("cut.swsa"), fs::file_size(file("cut.swsa")) - 9);
  EXPECT_THROW(read_archive(file("cut.swsa")), FormatError);
}

TEST_F(CodecTest, OnlineAccountingTracksProblemEntries) {
  const CompressionResult result = field_result();
  const auto report = account_online(result.problems, result.state_dim);
  // 5 test functions; dictionary widths 6 and 10; mode counts 2 and 3.
  EXPECT_EQ(report.feature_entries, 5 * (6 + 10));
  EXPECT_EQ(report.target_entries, 5 * (2 + 3));
  EXPECT_EQ(report.data_entries, 40 * 60);
  EXPECT_TRUE(report.efficient());
}

TEST_F(CodecTest, OnlineAccountingFromTheArchiveMatchesTheProblems) {
  const CompressionResult result = field_result();
  const auto fits = solve_block_system(build_block_system(result.problems),
                                       {FitConfig{0.0, 0.0, 0}});
  const Archive archive = make_archive(result, fits);
  const auto from_problems = account_online(result.problems, result.state_dim);
  const auto from_archive = account_online(archive);
  EXPECT_EQ(from_archive.feature_entries, from_problems.feature_entries);
  EXPECT_EQ(from_archive.target_entries, from_problems.target_entries);
  EXPECT_EQ(from_archive.data_entries, from_problems.data_entries);
}

TEST_F(CodecTest, OnlineAccountingFlagsInefficiency) {
  const auto stream = lorenz_stream(3, 0.01);
  PipelineConfig config;
  config.dt = stream.dt;
  config.horizon = 0.02;
  config.test_pair_count = 20;
  config.policy = DegreePolicy::kMaxDegree;
  config.degree = 1;
  config.pod_enabled = false;
  const CompressionResult tiny = process_stream(make_source(stream), config);
  const auto report = account_online(tiny.problems, tiny.state_dim);
  EXPECT_GE(report.total(), report.data_entries);
  EXPECT_FALSE(report.efficient());
}

TEST_F(CodecTest, OfflineAccountingSeparatesSparseAndDenseCounts) {
  const CompressionResult result = field_result();
  const auto fits = solve_block_system(build_block_system(result.problems),
                                       {FitConfig{1e-6, 0.05, 0}});
  const Archive archive = make_archive(result, fits);
  const auto report = account_offline(archive);

  EXPECT_EQ(report.mode_entries, 40 * 3);
  Eigen::Index sparse = 0;
  for (const auto& fit : fits) sparse += 2 * fit.nonzero_count();
  EXPECT_EQ(report.coefficient_entries, sparse);
  EXPECT_EQ(report.coefficient_dense_entries, 3 * 10);
  EXPECT_EQ(report.restart_entries,
            static_cast<Eigen::Index>(archive.restarts.size()) * 3);
  EXPECT_EQ(report.seam_entries, 1 * 3);
  EXPECT_EQ(report.data_entries, 40 * 60);
  EXPECT_GT(report.manifest_bytes, 0u);
  EXPECT_EQ(report.total(), report.mode_entries + sparse +
                                report.restart_entries + report.seam_entries);
}

// Entry-count bookkeeping against the closed forms for growth one mode at a
// time: features K * sum(J_m), targets K * (L0 (M+1) + M (M+1) / 2).
TEST_F(CodecTest, EntryCountsMatchClosedFormsOnSampledShapes) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> k_dist(1, 40);
  std::uniform_int_distribution<int> l_dist(1, 6);
  std::uniform_int_distribution<int> m_dist(0, 4);
  std::uniform_int_distribution<int> j_step(1, 25);

  for (int trial = 0; trial < 50; ++trial) {
    const int k = k_dist(rng);
    const int l0 = l_dist(rng);
    const int m = m_dist(rng);
    std::vector<ProblemSegment> segments;
    Eigen::Index width = 1 + j_step(rng);
    Eigen::Index expected_features = 0;
    for (int seg = 0; seg <= m; ++seg) {
      ProblemSegment s;
      s.features = Eigen::MatrixXd::Zero(k, width);
      s.targets = Eigen::MatrixXd::Zero(k, l0 + seg);
      expected_features += k * width;
      width += j_step(rng);
      segments.push_back(std::move(s));
    }
    ProblemSet problems{swsindy::MonomialBasis(1, DegreePolicy::kTotalDegree, 1),
                        swsindy::FourierTestBasis(1, 1.0),
                        std::move(segments),
                        std::vector<std::int64_t>(
                            static_cast<std::size_t>(l0 + m), 1),
                        0.1,
                        10,
                        true};
    EXPECT_EQ(problems.feature_entry_count(), expected_features);
    EXPECT_EQ(problems.target_entry_count(),
              k * (l0 * (m + 1) + m * (m + 1) / 2));
  }
}

}  // namespace
