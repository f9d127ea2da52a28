#include "rmtlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmtlab/errors.hpp"

namespace rmtlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::uint64_t replica_seed(std::uint64_t base, std::size_t n_index,
                           std::size_t replica) {
  return base ^ (static_cast<std::uint64_t>(n_index) << 32) ^
         static_cast<std::uint64_t>(replica);
}

// Salt keeps the bootstrap streams away from the replica streams.
constexpr std::uint64_t kBootstrapSalt = 0x626f6f7473747261ULL;

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream is(text);
  std::string field;
  while (std::getline(is, field, ',')) {
    field = trim(field);
    if (field.empty()) continue;
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(field, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad integer '" + field + "' in list '" + text + "'");
    }
    if (pos != field.size()) {
      throw UsageError("bad integer '" + field + "' in list '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty integer list '" + text + "'");
  return out;
}

void ExperimentConfig::validate() const {
  EntryLaw::parse(law_spec);
  if (trunc) trunc->validate();
  if (n_values.empty()) throw UsageError("config needs at least one n");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw UsageError("matrix sizes must be >= 1");
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw UsageError("n values must be strictly increasing");
    }
  }
  if (replicas_per_n.size() != n_values.size()) {
    throw UsageError("replicas list must match the n list length");
  }
  for (int r : replicas_per_n) {
    if (r < 2) throw UsageError("each n needs at least 2 replicas");
  }
  if (grid_nu < 2 || grid_nv < 2) throw UsageError("grid must be >= 2x2");
  if (!(a0 > 0.0) || !(a_param > 0.0)) {
    throw UsageError("window constants A0 and a must be positive");
  }
  if (threads < 1) throw UsageError("threads must be >= 1");
}

void ExperimentConfig::apply_kv(const std::string& key,
                                const std::string& value) {
  try {
    if (key == "law") {
      law_spec = value;
    } else if (key == "truncate") {
      trunc = TruncationSpec::parse(value);
    } else if (key == "n") {
      n_values = parse_int_list(value);
    } else if (key == "replicas") {
      replicas_per_n = parse_int_list(value);
    } else if (key == "seed") {
      base_seed = std::stoull(value);
    } else if (key == "grid") {
      const auto x = value.find('x');
      if (x == std::string::npos) {
        throw UsageError("grid expects <n_u>x<n_v>, got '" + value + "'");
      }
      grid_nu = std::stoi(value.substr(0, x));
      grid_nv = std::stoi(value.substr(x + 1));
    } else if (key == "a0") {
      a0 = std::stod(value);
    } else if (key == "a") {
      a_param = std::stod(value);
    } else if (key == "out") {
      output_dir = value;
    } else if (key == "threads") {
      threads = std::stoi(value);
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("bad value '" + value + "' for config key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> config_file_entries(
    const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(lineno) +
                       " is not key = value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : config_file_entries(path)) {
    cfg.apply_kv(key, value);
  }
  return cfg;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& n_delta) {
  if (n_delta.size() < 3) {
    throw TooFewPoints("rate fit needs at least 3 points, got " +
                       std::to_string(n_delta.size()));
  }
  RateFit fit;
  for (const auto& [n, delta] : n_delta) {
    if (!(delta > 0.0)) {
      throw NonpositiveDelta("rate fit saw delta = " + std::to_string(delta));
    }
    fit.points.emplace_back(std::log(n), std::log(delta));
  }
  const double m = static_cast<double>(fit.points.size());
  double xbar = 0.0;
  double ybar = 0.0;
  for (const auto& [x, y] : fit.points) {
    xbar += x;
    ybar += y;
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - xbar) * (x - xbar);
    sxy += (x - xbar) * (y - ybar);
  }
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double rss = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double e = y - (fit.intercept + fit.slope * x);
    rss += e * e;
  }
  fit.slope_stderr = std::sqrt(rss / (m - 2.0) / sxx);
  return fit;
}

namespace {

// Half-sample bootstrap of the pooled sup-distance: 200 random replica
// halves, each rescanned against the semicircle CDF; the half-size spread
// shrinks by sqrt(2) toward the full-sample error.
double bootstrap_half_stderr(const std::vector<Spectrum>& spectra,
                             std::uint64_t base_seed, std::size_t n_index,
                             int threads) {
  const int reps = static_cast<int>(spectra.size());
  const int half = reps / 2;
  constexpr int kResamples = 200;

  struct Tagged {
    double v;
    int rep;
  };
  std::size_t total = 0;
  for (const Spectrum& s : spectra) total += s.lambda.size();
  std::vector<Tagged> all;
  all.reserve(total);
  for (int r = 0; r < reps; ++r) {
    for (double v : spectra[r].lambda) all.push_back({v, r});
  }
  std::sort(all.begin(), all.end(),
            [](const Tagged& a, const Tagged& b) { return a.v < b.v; });

  // Group equal values once and cache the limit CDF there.
  struct Group {
    std::size_t begin, end;
    double g;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].v == all[i].v) ++j;
    groups.push_back({i, j, semicircle_cdf(all[i].v)});
    i = j;
  }

  std::vector<double> deltas(kResamples, 0.0);
  parallel_for(kResamples, threads, [&](std::size_t b) {
    RngStream rng(base_seed ^ kBootstrapSalt ^
                  (static_cast<std::uint64_t>(n_index) << 32) ^
                  static_cast<std::uint64_t>(b));
    std::vector<int> idx(reps);
    for (int i = 0; i < reps; ++i) idx[i] = i;
    std::vector<char> included(reps, 0);
    for (int i = 0; i < half; ++i) {
      const int j = i + static_cast<int>(rng.next_u64() %
                                         static_cast<std::uint64_t>(reps - i));
      std::swap(idx[i], idx[j]);
      included[idx[i]] = 1;
    }
    const double total_inc =
        static_cast<double>(half) *
        static_cast<double>(spectra.front().lambda.size());
    double running = 0.0;
    double worst = 0.0;
    for (const Group& grp : groups) {
      int cnt = 0;
      for (std::size_t i = grp.begin; i < grp.end; ++i) {
        cnt += included[all[i].rep];
      }
      if (cnt == 0) continue;
      const double before = running / total_inc;
      running += cnt;
      const double after = running / total_inc;
      worst = std::max(worst, std::abs(before - grp.g));
      worst = std::max(worst, std::abs(after - grp.g));
    }
    deltas[b] = worst;
  });

  double mean = 0.0;
  for (double d : deltas) mean += d;
  mean /= kResamples;
  double var = 0.0;
  for (double d : deltas) var += (d - mean) * (d - mean);
  var /= (kResamples - 1);
  return std::sqrt(var) / std::sqrt(2.0);
}

ExperimentConfig normalized(const ExperimentConfig& cfg) {
  ExperimentConfig out = cfg;
  if (out.replicas_per_n.size() == 1 && out.n_values.size() > 1) {
    out.replicas_per_n.assign(out.n_values.size(), out.replicas_per_n[0]);
  }
  out.validate();
  return out;
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["law"] = cfg.law_spec;
  j["truncate"] = cfg.trunc ? nlohmann::json(cfg.trunc->id())
                            : nlohmann::json(nullptr);
  j["n"] = cfg.n_values;
  j["replicas"] = cfg.replicas_per_n;
  j["seed"] = cfg.base_seed;
  j["grid"] = std::to_string(cfg.grid_nu) + "x" + std::to_string(cfg.grid_nv);
  j["a0"] = cfg.a0;
  j["a"] = cfg.a_param;
  j["out"] = cfg.output_dir;
  j["threads"] = cfg.threads;
  return j;
}

}  // namespace

DeltaSweepReport run_delta_sweep(const ExperimentConfig& raw_cfg) {
  const ExperimentConfig cfg = normalized(raw_cfg);
  const EntryLaw law = cfg.law();
  DeltaSweepReport rep;
  rep.cfg = cfg;

  std::vector<std::pair<double, double>> fit_points;
  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
    const int n = cfg.n_values[ni];
    const int reps = cfg.replicas_per_n[ni];
    std::vector<Spectrum> spectra(reps);
    parallel_for(reps, cfg.threads, [&](std::size_t r) {
      const WignerMatrix w =
          build_wigner(n, law, replica_seed(cfg.base_seed, ni, r), cfg.trunc);
      spectra[r] = eigenvalues(w);
    });
    const double delta = kolmogorov_distance(pool(spectra));
    const double se =
        bootstrap_half_stderr(spectra, cfg.base_seed, ni, cfg.threads);
    DeltaRow row;
    row.n = n;
    row.replicas = reps;
    row.delta_hat = delta;
    row.mc_stderr = se;
    row.seed = cfg.base_seed;
    row.stderr_ok = se <= delta / 5.0;
    if (!row.stderr_ok) {
      rep.warnings.push_back("InsufficientReplicas: stderr " +
                             format_double(se) + " exceeds delta/5 at n=" +
                             std::to_string(n));
    }
    rep.rows.push_back(row);
    fit_points.emplace_back(static_cast<double>(n), delta);
  }

  if (fit_points.size() >= 3) {
    rep.fit = fit_rate(fit_points);
  } else {
    rep.warnings.push_back("rate fit skipped: needs at least 3 n values");
  }

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  write_text_atomic((dir / "delta_scan.csv").string(), delta_csv(rep));
  write_text_atomic((dir / "summary.json").string(), delta_summary_json(rep));
  return rep;
}

StieltjesSweepReport run_stieltjes_sweep(const ExperimentConfig& raw_cfg) {
  const ExperimentConfig cfg = normalized(raw_cfg);
  const EntryLaw law = cfg.law();
  StieltjesSweepReport rep;
  rep.cfg = cfg;

  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
    const int n = cfg.n_values[ni];
    const int reps = cfg.replicas_per_n[ni];
    const DomainG dom(cfg.a0, cfg.a_param, n);
    const std::vector<cd> grid = domain_grid(dom, cfg.grid_nu, cfg.grid_nv);

    std::vector<std::vector<cd>> vals(reps);
    parallel_for(reps, cfg.threads, [&](std::size_t r) {
      const WignerMatrix w =
          build_wigner(n, law, replica_seed(cfg.base_seed, ni, r), cfg.trunc);
      const Spectrum spec = eigenvalues(w);
      std::vector<cd> row(grid.size());
      for (std::size_t g = 0; g < grid.size(); ++g) {
        row[g] = empirical_stieltjes(spec, grid[g]);
      }
      vals[r] = std::move(row);
    });

    double worst_ratio = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      cd mbar = 0.0;
      for (int r = 0; r < reps; ++r) mbar += vals[r][g];
      mbar /= static_cast<double>(reps);
      StieltjesRow row;
      row.n = n;
      row.u = grid[g].real();
      row.v = grid[g].imag();
      row.m_bar = mbar;
      row.s = semicircle_stieltjes(grid[g]);
      row.abs_diff = std::abs(mbar - row.s);
      row.bound = stieltjes_bound(dom, grid[g]);
      row.ratio = row.abs_diff / row.bound;
      worst_ratio = std::max(worst_ratio, row.ratio);
      rep.rows.push_back(row);
    }
    rep.c_hat.emplace_back(n, worst_ratio);
  }

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  write_text_atomic((dir / "stieltjes_scan.csv").string(), stieltjes_csv(rep));
  write_text_atomic((dir / "summary.json").string(),
                    stieltjes_summary_json(rep));
  return rep;
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string delta_csv(const DeltaSweepReport& rep) {
  std::string body = "n,replicas,delta_hat,mc_stderr,seed\n";
  for (const DeltaRow& r : rep.rows) {
    body += std::to_string(r.n) + "," + std::to_string(r.replicas) + "," +
            format_double(r.delta_hat) + "," + format_double(r.mc_stderr) +
            "," + std::to_string(r.seed) + "\n";
  }
  return body;
}

std::string stieltjes_csv(const StieltjesSweepReport& rep) {
  std::string body = "n,u,v,re_m,im_m,re_s,im_s,abs_diff,bound,ratio\n";
  for (const StieltjesRow& r : rep.rows) {
    body += std::to_string(r.n) + "," + format_double(r.u) + "," +
            format_double(r.v) + "," + format_double(r.m_bar.real()) + "," +
            format_double(r.m_bar.imag()) + "," + format_double(r.s.real()) +
            "," + format_double(r.s.imag()) + "," +
            format_double(r.abs_diff) + "," + format_double(r.bound) + "," +
            format_double(r.ratio) + "\n";
  }
  return body;
}

std::string delta_summary_json(const DeltaSweepReport& rep) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = "delta_sweep";
  j["config"] = config_json(rep.cfg);
  nlohmann::json rows = nlohmann::json::array();
  for (const DeltaRow& r : rep.rows) {
    rows.push_back({{"n", r.n},
                    {"replicas", r.replicas},
                    {"delta_hat", r.delta_hat},
                    {"mc_stderr", r.mc_stderr},
                    {"stderr_ok", r.stderr_ok}});
  }
  j["rows"] = rows;
  if (rep.fit) {
    j["fit"] = {{"slope", rep.fit->slope},
                {"intercept", rep.fit->intercept},
                {"slope_stderr", rep.fit->slope_stderr}};
  } else {
    j["fit"] = nullptr;
  }
  j["warnings"] = rep.warnings;
  j["notes"] =
      "fitted slope is desk-scale evidence for this entry law only; the 1/n "
      "decay is an upper envelope, not a proven two-sided rate";
  return j.dump(2) + "\n";
}

std::string stieltjes_summary_json(const StieltjesSweepReport& rep) {
  nlohmann::json j;
  j["schema"] = 1;
  j["kind"] = "stieltjes_sweep";
  j["config"] = config_json(rep.cfg);
  nlohmann::json ch = nlohmann::json::array();
  for (const auto& [n, c] : rep.c_hat) {
    ch.push_back({{"n", n}, {"c_hat", c}});
  }
  j["c_hat"] = ch;
  nlohmann::json ratios = nlohmann::json::array();
  for (std::size_t i = 1; i < rep.c_hat.size(); ++i) {
    ratios.push_back({{"n_from", rep.c_hat[i - 1].first},
                      {"n_to", rep.c_hat[i].first},
                      {"ratio", rep.c_hat[i].second / rep.c_hat[i - 1].second}});
  }
  j["c_hat_growth"] = ratios;
  return j.dump(2) + "\n";
}

void write_text_atomic(const std::string& path, const std::string& body) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!os) throw IoError("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace rmtlab
