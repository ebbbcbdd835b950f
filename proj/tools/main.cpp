#include <CLI11.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "swsindy/codec.hpp"
#include "swsindy/datagen.hpp"
#include "swsindy/error.hpp"
#include "swsindy/pipeline.hpp"
#include "swsindy/reconstruct.hpp"

namespace {

namespace fs = std::filesystem;

using swsindy::account_offline;
using swsindy::account_online;
using swsindy::Archive;
using swsindy::build_block_system;
using swsindy::CompressionResult;
using swsindy::ConfigError;
using swsindy::DegreePolicy;
using swsindy::error_metrics;
using swsindy::evolve_surrogate;
using swsindy::field_source;
using swsindy::field_spec_from_json;
using swsindy::FieldSpec;
using swsindy::FitConfig;
using swsindy::FormatError;
using swsindy::lorenz_stream;
using swsindy::LorenzParams;
using swsindy::make_archive;
using swsindy::make_source;
using swsindy::PipelineConfig;
using swsindy::process_stream;
using swsindy::project_stream;
using swsindy::read_archive;
using swsindy::read_problems;
using swsindy::read_stream;
using swsindy::ReconstructionError;
using swsindy::reconstruct_stream;
using swsindy::SnapshotStream;
using swsindy::solve_block_system;
using swsindy::StreamReader;
using swsindy::StreamWriter;
using swsindy::surrogate_from_archive;
using swsindy::synthesize;
using swsindy::write_archive;
using swsindy::write_problems;
using swsindy::write_stream;

nlohmann::json parse_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    nlohmann::json doc;
    in >> doc;
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

FitConfig fit_from_json(const nlohmann::json& doc) {
  FitConfig fit;
  fit.lambda = doc.value("lambda", 0.0);
  fit.threshold = doc.value("threshold", 0.0);
  fit.max_iterations = doc.value("max_iterations", 0);
  return fit;
}

// "fit" holds one shared config; "fit_per_mode" overrides it with one entry
// per mode.  Both absent means a plain unthresholded least-squares fit.
std::vector<FitConfig> fits_from_json(const nlohmann::json& doc) {
  try {
    if (doc.contains("fit_per_mode")) {
      std::vector<FitConfig> fits;
      for (const auto& item : doc.at("fit_per_mode"))
        fits.push_back(fit_from_json(item));
      if (fits.empty()) throw ConfigError("fit_per_mode must not be empty");
      return fits;
    }
    if (doc.contains("fit")) return {fit_from_json(doc.at("fit"))};
    return {FitConfig{}};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

struct ToolConfig {
  PipelineConfig pipeline;
  std::vector<FitConfig> fits;
  double declared_dt = 0.0;  // optional; cross-checked against the stream
};

ToolConfig config_from_json(const nlohmann::json& doc) {
  ToolConfig config;
  PipelineConfig& p = config.pipeline;
  try {
    config.declared_dt = doc.value("dt", 0.0);
    p.horizon = doc.at("horizon").get<double>();
    p.test_pair_count = doc.at("test_pairs").get<int>();

    if (doc.contains("dictionary")) {
      const auto& d = doc.at("dictionary");
      const std::string policy = d.value("policy", "total-degree");
      if (policy == "total-degree") {
        p.policy = DegreePolicy::kTotalDegree;
      } else if (policy == "max-degree") {
        p.policy = DegreePolicy::kMaxDegree;
      } else {
        throw ConfigError("unknown dictionary policy: " + policy);
      }
      p.degree = d.value("degree", 2);
    }

    // Omitting the projection table keeps the raw state as the coordinates,
    // the right choice for low-dimensional inputs.
    p.pod_enabled = doc.contains("projection");
    if (p.pod_enabled) {
      const auto& j = doc.at("projection");
      p.pod_enabled = j.value("enabled", true);
      p.window = j.value("window", std::int64_t{0});
      p.eps_spectral = j.value("eps_spectral", 0.0);
      p.eps_residual = j.value("eps_residual", 0.1);
      if (j.contains("reinit")) {
        const auto& r = j.at("reinit");
        p.reinit.enabled = r.value("enabled", true);
        p.reinit.mode_cap = r.value("mode_cap", std::int64_t{0});
        p.reinit.eps_residual = r.value("eps_residual", 0.15);
      }
    }

    p.restart_stride = doc.value("restart_stride", std::int64_t{1000});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  config.fits = fits_from_json(doc);
  return config;
}

int run_gen_lorenz(const fs::path& output, std::int64_t count, double dt,
                   const LorenzParams& params) {
  if (count < 1) throw ConfigError("snapshot count must be positive");
  if (!(dt > 0.0)) throw ConfigError("snapshot spacing must be positive");
  write_stream(output, lorenz_stream(count, dt, params));
  std::cout << "wrote " << count << " snapshots to " << output.string()
            << "\n";
  return 0;
}

int run_gen_field(const fs::path& output, const fs::path& spec_path) {
  const FieldSpec spec = field_spec_from_json(parse_json_file(spec_path));
  if (spec.n_snapshots < 1)
    throw ConfigError("field specification yields no snapshots");
  StreamWriter writer(output, spec.state_dim(), spec.dt);
  auto source = field_source(spec);
  while (const auto frame = source()) writer.append(*frame);
  std::cout << "wrote " << spec.n_snapshots << " snapshots ("
            << spec.height << "x" << spec.width << ") to " << output.string()
            << "\n";
  return 0;
}

int run_compress(const fs::path& input, const fs::path& output,
                 const fs::path& config_path, bool split_offline) {
  ToolConfig config = config_from_json(parse_json_file(config_path));
  const auto reader = std::make_shared<StreamReader>(input);
  if (config.declared_dt > 0.0 &&
      std::abs(config.declared_dt - reader->dt()) >
          1e-9 * std::max(config.declared_dt, reader->dt()))
    throw ConfigError("config dt disagrees with the stream header");
  config.pipeline.dt = reader->dt();

  const CompressionResult result =
      process_stream(make_source(reader), config.pipeline);
  if (split_offline) {
    write_problems(output, result);
    std::cout << "wrote problem set (" << result.problems.segments.size()
              << " segments, " << result.problems.mode_count() << " modes) to "
              << output.string() << "\n";
    return 0;
  }

  const auto fits =
      solve_block_system(build_block_system(result.problems), config.fits);
  const Archive archive = make_archive(result, fits);
  write_archive(output, archive);
  std::cout << "wrote archive (" << archive.mode_count() << " modes, "
            << account_offline(archive).total() << " entries) to "
            << output.string() << "\n";
  return 0;
}

int run_solve(const fs::path& input, const fs::path& output,
              const fs::path& config_path) {
  std::vector<FitConfig> fits{FitConfig{}};
  if (!config_path.empty()) fits = fits_from_json(parse_json_file(config_path));
  const CompressionResult result = read_problems(input);
  const auto coefficients =
      solve_block_system(build_block_system(result.problems), fits);
  const Archive archive = make_archive(result, coefficients);
  write_archive(output, archive);
  std::cout << "wrote archive (" << archive.mode_count() << " modes, "
            << account_offline(archive).total() << " entries) to "
            << output.string() << "\n";
  return 0;
}

int run_decompress(const fs::path& input, const fs::path& output) {
  const Archive archive = read_archive(input);
  const Eigen::MatrixXd temporal =
      evolve_surrogate(surrogate_from_archive(archive));
  StreamWriter writer(output,
                      archive.pod_enabled ? archive.spatial_modes.rows()
                                          : temporal.rows(),
                      archive.dt);
  if (archive.pod_enabled) {
    synthesize(temporal, archive.spatial_modes,
               [&writer](std::int64_t, const Eigen::VectorXd& frame) {
                 writer.append(frame);
               });
  } else {
    for (Eigen::Index n = 0; n < temporal.cols(); ++n)
      writer.append(temporal.col(n));
  }
  std::cout << "wrote " << temporal.cols() << " snapshots to "
            << output.string() << "\n";
  return 0;
}

void print_row(const std::string& label, Eigen::Index value) {
  std::cout << "  " << std::left << std::setw(22) << label << std::right
            << std::setw(14) << value << "\n";
}

int run_report(const fs::path& input, const fs::path& truth_path,
               const fs::path& csv_path) {
  const Archive archive = read_archive(input);

  std::cout << "archive " << input.string() << "\n";
  std::cout << "  snapshots " << archive.n_snapshots << ", state dimension "
            << archive.state_dim << ", spacing " << archive.dt << "\n";
  if (archive.pod_enabled) {
    std::cout << "  projection: " << archive.mode_count() << " modes, births";
    for (const std::int64_t b : archive.mode_birth) std::cout << " " << b;
    if (archive.truncated_seed) std::cout << " (seed window truncated)";
    std::cout << "\n";
  } else {
    std::cout << "  projection disabled; raw components are the coordinates\n";
  }
  std::cout << "  restart samples " << archive.restarts.size() << " (stride "
            << archive.restart_stride << "), seam samples "
            << archive.seams.size() << "\n";

  const auto online = account_online(archive);
  std::cout << "\nonline phase (entries held while streaming)\n";
  print_row("weak-form features", online.feature_entries);
  print_row("weak-form targets", online.target_entries);
  print_row("total", online.total());
  print_row("raw data seen", online.data_entries);
  std::cout << "  " << std::left << std::setw(22) << "footprint" << std::right
            << std::setw(13) << std::fixed << std::setprecision(2)
            << 100.0 * static_cast<double>(online.total()) /
                   static_cast<double>(online.data_entries)
            << "%" << (online.efficient() ? "" : "  (exceeds the data)")
            << "\n";

  const auto offline = account_offline(archive);
  std::cout << "\narchive (entries stored)\n";
  print_row("spatial modes", offline.mode_entries);
  print_row("coefficients", offline.coefficient_entries);
  print_row("  dense equivalent", offline.coefficient_dense_entries);
  print_row("restart samples", offline.restart_entries);
  print_row("seam samples", offline.seam_entries);
  print_row("total", offline.total());
  print_row("raw data", offline.data_entries);
  std::cout << "  " << std::left << std::setw(22) << "footprint" << std::right
            << std::setw(13) << std::fixed << std::setprecision(2)
            << 100.0 * static_cast<double>(offline.total()) /
                   static_cast<double>(offline.data_entries)
            << "%\n";
  std::cout << "  manifest bytes        " << std::setw(14)
            << offline.manifest_bytes << "\n";
  std::cout.unsetf(std::ios::fixed);

  if (truth_path.empty()) return 0;

  const SnapshotStream truth = read_stream(truth_path);
  if (truth.state_dim() != archive.state_dim ||
      truth.size() != archive.n_snapshots)
    throw ConfigError("truth stream does not match the archive shape");
  const SnapshotStream rebuilt = reconstruct_stream(archive);
  const SnapshotStream projected =
      archive.pod_enabled ? project_stream(truth, archive.spatial_modes)
                          : truth;
  const auto metrics = error_metrics(truth, rebuilt, projected);

  std::ofstream file;
  if (!csv_path.empty()) {
    file.open(csv_path);
    if (!file) throw ConfigError("cannot open " + csv_path.string());
  } else {
    std::cout << "\n";
  }
  std::ostream& csv = csv_path.empty() ? std::cout : file;
  csv << "snapshot,time,error_pct,projection_gap_pct,fit_excess_pct\n";
  csv << std::setprecision(10);
  for (std::size_t i = 0; i < metrics.total.size(); ++i) {
    const auto n = static_cast<std::int64_t>(i) + 1;
    csv << n << "," << truth.time_at(n) << "," << metrics.total[i] << ","
        << metrics.projection[i] << "," << metrics.fit_excess[i] << "\n";
  }
  if (!csv_path.empty())
    std::cout << "\nwrote metrics for " << metrics.total.size()
              << " snapshots to " << csv_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming weak-form compression for time-series data"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic snapshot stream");
  gen->require_subcommand(1);

  fs::path gen_out;
  std::int64_t lorenz_count = 10'001;
  double lorenz_dt = 1e-3;
  LorenzParams lorenz_params;
  std::vector<double> lorenz_x0;
  auto* gen_lorenz =
      gen->add_subcommand("lorenz", "Chaotic three-component test trajectory");
  gen_lorenz->add_option("-o,--output", gen_out, "Output stream file")
      ->required();
  gen_lorenz->add_option("--count", lorenz_count, "Number of snapshots");
  gen_lorenz->add_option("--dt", lorenz_dt, "Snapshot spacing");
  gen_lorenz->add_option("--sigma", lorenz_params.sigma, "Lorenz sigma");
  gen_lorenz->add_option("--rho", lorenz_params.rho, "Lorenz rho");
  gen_lorenz->add_option("--beta", lorenz_params.beta, "Lorenz beta");
  gen_lorenz
      ->add_option("--x0", lorenz_x0, "Initial state (three values)")
      ->expected(3);

  fs::path field_spec_path;
  auto* gen_field =
      gen->add_subcommand("field", "Low-rank grid field from a JSON spec");
  gen_field->add_option("-o,--output", gen_out, "Output stream file")
      ->required();
  gen_field->add_option("--spec", field_spec_path, "Field specification JSON")
      ->required();

  // compress
  fs::path compress_in, compress_out, compress_config;
  bool split_offline = false;
  auto* compress = app.add_subcommand(
      "compress", "Stream a snapshot file into a compressed archive");
  compress->add_option("input", compress_in, "Input stream file")->required();
  compress->add_option("-o,--output", compress_out, "Output archive")
      ->required();
  compress->add_option("--config", compress_config, "Configuration JSON")
      ->required();
  compress->add_flag("--split-offline", split_offline,
                     "Write the intermediate problem set instead of solving");

  // solve
  fs::path solve_in, solve_out, solve_config;
  auto* solve = app.add_subcommand(
      "solve", "Fit coefficients for a saved problem set");
  solve->add_option("input", solve_in, "Problem set file")->required();
  solve->add_option("-o,--output", solve_out, "Output archive")->required();
  solve->add_option("--config", solve_config,
                    "Configuration JSON (fit section only)");

  // decompress
  fs::path decompress_in, decompress_out;
  auto* decompress = app.add_subcommand(
      "decompress", "Rebuild the snapshot stream from an archive");
  decompress->add_option("input", decompress_in, "Input archive")->required();
  decompress->add_option("-o,--output", decompress_out, "Output stream file")
      ->required();

  // report
  fs::path report_in, report_truth, report_csv;
  auto* report = app.add_subcommand(
      "report", "Storage accounting and reconstruction quality");
  report->add_option("input", report_in, "Input archive")->required();
  report->add_option("--truth", report_truth,
                     "Original stream for error metrics");
  report->add_option("--csv", report_csv,
                     "Write the metric time series here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  }

  try {
    if (gen_lorenz->parsed()) {
      if (!lorenz_x0.empty())
        lorenz_params.x0 = Eigen::Vector3d(lorenz_x0[0], lorenz_x0[1],
                                           lorenz_x0[2]);
      return run_gen_lorenz(gen_out, lorenz_count, lorenz_dt, lorenz_params);
    }
    if (gen_field->parsed()) return run_gen_field(gen_out, field_spec_path);
    if (compress->parsed())
      return run_compress(compress_in, compress_out, compress_config,
                          split_offline);
    if (solve->parsed()) return run_solve(solve_in, solve_out, solve_config);
    if (decompress->parsed())
      return run_decompress(decompress_in, decompress_out);
    if (report->parsed())
      return run_report(report_in, report_truth, report_csv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const FormatError& e) {
    std::cerr << "format error at byte " << e.byte_offset() << ": " << e.what()
              << "\n";
    return 2;
  } catch (const ReconstructionError& e) {
    std::cerr << "numerical failure at t = " << e.failing_time() << ": "
              << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
