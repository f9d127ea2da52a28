#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmtlab/entry_laws.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/spectral.hpp"
#include "rmtlab/stieltjes.hpp"

namespace rmtlab {

// Declarative sweep description; mirrored one-to-one by the key=value
// config file format (see from_file).
struct ExperimentConfig {
  std::string law_spec = "gaussian";
  std::optional<TruncationSpec> trunc;
  std::vector<int> n_values;          // strictly increasing
  std::vector<int> replicas_per_n;    // same length, each >= 2
  std::uint64_t base_seed = 1;
  int grid_nu = 21;
  int grid_nv = 8;
  double a0 = 2.0;
  double a_param = 1.0;
  std::string output_dir = ".";
  int threads = default_threads();

  void validate() const;
  EntryLaw law() const { return EntryLaw::parse(law_spec); }

  // Flat "key = value" text, '#' comments.  Keys: law, truncate, n,
  // replicas, seed, grid, a0, a, out, threads.
  static ExperimentConfig from_file(const std::string& path);
  void apply_kv(const std::string& key, const std::string& value);
};

// The raw key/value pairs of a config file, in file order.
std::vector<std::pair<std::string, std::string>> config_file_entries(
    const std::string& path);

struct RateFit {
  std::vector<std::pair<double, double>> points;  // (log n, log delta)
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

// Log-log least squares; TooFewPoints under 3 points, NonpositiveDelta if
// any delta <= 0.
RateFit fit_rate(const std::vector<std::pair<double, double>>& n_delta);

struct DeltaRow {
  int n = 0;
  int replicas = 0;
  double delta_hat = 0.0;
  double mc_stderr = 0.0;  // half-sample bootstrap
  std::uint64_t seed = 0;
  bool stderr_ok = true;  // advisory: mc_stderr <= delta_hat / 5
};

struct DeltaSweepReport {
  ExperimentConfig cfg;
  std::vector<DeltaRow> rows;
  std::optional<RateFit> fit;  // absent with fewer than 3 n-values
  std::vector<std::string> warnings;
};

// Pools replicas_per_n[i] spectra per n into the averaged spectral CDF,
// takes its sup-distance to the semicircle, bootstraps the standard error
// over 200 random replica halves, and fits the log-log rate.  Persists
// delta_scan.csv and summary.json under cfg.output_dir.
DeltaSweepReport run_delta_sweep(const ExperimentConfig& cfg);

struct StieltjesRow {
  int n = 0;
  double u = 0.0;
  double v = 0.0;
  cd m_bar;  // replica average of the empirical transform
  cd s;
  double abs_diff = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct StieltjesSweepReport {
  ExperimentConfig cfg;
  std::vector<StieltjesRow> rows;                // ordered (n, u, v)
  std::vector<std::pair<int, double>> c_hat;     // per-n max ratio
};

// Replica-averaged transform against the bound shape over the spectral
// window grid.  Persists stieltjes_scan.csv and summary.json.
StieltjesSweepReport run_stieltjes_sweep(const ExperimentConfig& cfg);

// CSV bodies (also used by determinism checks).
std::string delta_csv(const DeltaSweepReport& rep);
std::string stieltjes_csv(const StieltjesSweepReport& rep);
std::string delta_summary_json(const DeltaSweepReport& rep);
std::string stieltjes_summary_json(const StieltjesSweepReport& rep);

// Shortest exact decimal form of a double ("%.17g" trimmed).
std::string format_double(double v);

// Writes via a temp file and renames, so an interrupted run never leaves a
// partial file at the target path.
void write_text_atomic(const std::string& path, const std::string& body);

std::vector<int> parse_int_list(const std::string& text);  // "100,200,400"

}  // namespace rmtlab
