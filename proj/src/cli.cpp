#include "rmtlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rmtlab/errors.hpp"
#include "rmtlab/experiments.hpp"
#include "rmtlab/resolvent_lab.hpp"
#include "rmtlab/spectral.hpp"
#include "rmtlab/wigner.hpp"

namespace rmtlab::cli {

namespace {

double parse_double_strict(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad " + what + " '" + text + "'");
  }
  if (pos != text.size()) throw UsageError("bad " + what + " '" + text + "'");
  return v;
}

std::optional<TruncationSpec> resolve_trunc(const std::string& truncate_s,
                                            const std::optional<double>& d,
                                            const std::optional<double>& k) {
  std::optional<TruncationSpec> trunc;
  if (!truncate_s.empty()) trunc = TruncationSpec::parse(truncate_s);
  if (d || k) {
    if (!trunc) {
      if (!(d && k)) {
        throw UsageError(
            "truncation needs both --d-const and --kappa (or --truncate)");
      }
      trunc = TruncationSpec{};
    }
    if (d) trunc->d_const = *d;
    if (k) trunc->kappa = *k;
    trunc->validate();
  }
  return trunc;
}

std::string spectrum_csv(const Spectrum& s) {
  std::string body = "lambda\n";
  for (double l : s.lambda) body += format_double(l) + "\n";
  return body;
}

// Sweep-style flag block shared by delta and stieltjes-scan.
struct SweepFlags {
  std::string config_path;
  std::string law;
  std::string truncate_s;
  std::optional<double> d_const;
  std::optional<double> kappa;
  std::string n_list;
  std::string replicas_list;
  std::optional<std::uint64_t> seed;
  std::string grid;
  std::optional<double> a0;
  std::optional<double> a_param;
  std::string out_dir;
  std::optional<int> threads;

  void add_common(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "config file of key = value lines; explicit flags win");
    cmd->add_option("--law", law,
                    "entry law: rademacher | gaussian | pareto:<beta>");
    cmd->add_option("--truncate", truncate_s,
                    "entry truncation 'D=<d>,kappa=<k>' (threshold D n^alpha, "
                    "alpha = 2/(4+kappa))");
    cmd->add_option("--d-const", d_const, "truncation constant D");
    cmd->add_option("--kappa", kappa, "truncation kappa in (0,4]");
    cmd->add_option("--n", n_list, "matrix sizes, e.g. 100,200,400");
    cmd->add_option("--replicas", replicas_list,
                    "replica counts, one per n or a single shared count");
    cmd->add_option("--seed", seed, "base seed (default 1)");
    cmd->add_option("--out", out_dir, "output directory (default .)");
    cmd->add_option("--threads", threads,
                    "worker threads (default: hardware)");
  }

  // Config file first, explicit flags on top.
  ExperimentConfig build(bool need_grid) const {
    ExperimentConfig cfg;
    bool have_law = false;
    bool have_n = false;
    bool have_replicas = false;
    if (!config_path.empty()) {
      for (const auto& [key, value] : config_file_entries(config_path)) {
        cfg.apply_kv(key, value);
        if (key == "law") have_law = true;
        if (key == "n") have_n = true;
        if (key == "replicas") have_replicas = true;
      }
    }
    if (!law.empty()) {
      cfg.apply_kv("law", law);
      have_law = true;
    }
    const auto trunc = resolve_trunc(truncate_s, d_const, kappa);
    if (trunc) cfg.trunc = trunc;
    if (!n_list.empty()) {
      cfg.apply_kv("n", n_list);
      have_n = true;
    }
    if (!replicas_list.empty()) {
      cfg.apply_kv("replicas", replicas_list);
      have_replicas = true;
    }
    if (seed) cfg.base_seed = *seed;
    if (!grid.empty()) cfg.apply_kv("grid", grid);
    if (a0) cfg.a0 = *a0;
    if (a_param) cfg.a_param = *a_param;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (threads) cfg.threads = *threads;

    if (!have_law) throw UsageError("missing --law (or a config entry)");
    if (!have_n) throw UsageError("missing --n (or a config entry)");
    if (!have_replicas) {
      throw UsageError("missing --replicas (or a config entry)");
    }
    (void)need_grid;
    return cfg;
  }
};

void run_sample(const std::string& law_s, int n, std::uint64_t seed,
                const std::optional<TruncationSpec>& trunc,
                const std::string& out) {
  const WignerMatrix w = build_wigner(n, EntryLaw::parse(law_s), seed, trunc);
  save_wigner(w, out);
  std::cout << "sample: n=" << n << " law=" << w.law.id() << " seed=" << seed
            << (trunc ? " truncate=" + trunc->id() : "") << " -> " << out
            << "\n";
}

void run_spectrum(const std::string& in, const std::string& law_s, int n,
                  std::uint64_t seed,
                  const std::optional<TruncationSpec>& trunc,
                  const std::string& out) {
  WignerMatrix w =
      in.empty() ? build_wigner(n, EntryLaw::parse(law_s), seed, trunc)
                 : load_wigner(in);
  const Spectrum s = eigenvalues(w);
  const std::string csv = spectrum_csv(s);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_text_atomic(out, csv);
    std::cout << "spectrum: n=" << w.n() << " law=" << w.law.id() << " seed="
              << w.seed << " -> " << out << "\n";
  }
}

int run_identity_check(const std::string& law_s, int n, cd z,
                       std::uint64_t seed,
                       const std::optional<TruncationSpec>& trunc, double tol,
                       int direct_checks, const std::string& out) {
  const WignerMatrix w = build_wigner(n, EntryLaw::parse(law_s), seed, trunc);
  const IdentityReport rep = identity_suite(w, z, direct_checks);
  const bool bad = rep.max_residual_schur > tol ||
                   rep.max_residual_rjj1 > tol ||
                   rep.max_residual_trace > tol || rep.residual_73 > tol ||
                   rep.residual_lambda > tol || rep.minor_xcheck > tol ||
                   rep.max_eps4_ratio > 1.0 || rep.m_route_diff > 1e-9;
  std::cout << "identity-check: n=" << n << " z=" << z.real() << "+"
            << z.imag() << "i schur=" << format_double(rep.max_residual_schur)
            << " rjj1=" << format_double(rep.max_residual_rjj1)
            << " trace=" << format_double(rep.max_residual_trace)
            << " e73=" << format_double(rep.residual_73)
            << " lambda=" << format_double(rep.residual_lambda)
            << " eps4max=" << format_double(rep.max_eps4_ratio)
            << " xcheck=" << format_double(rep.minor_xcheck)
            << " mdiff=" << format_double(rep.m_route_diff)
            << (bad ? " [VIOLATION]" : " [ok]") << "\n";
  if (!out.empty()) {
    namespace fs = std::filesystem;
    std::string body =
        "n,seed,u,v,max_residual_schur,max_residual_rjj1,max_eps4_ratio,"
        "residual_73,residual_lambda\n";
    body += std::to_string(n) + "," + std::to_string(seed) + "," +
            format_double(z.real()) + "," + format_double(z.imag()) + "," +
            format_double(rep.max_residual_schur) + "," +
            format_double(rep.max_residual_rjj1) + "," +
            format_double(rep.max_eps4_ratio) + "," +
            format_double(rep.residual_73) + "," +
            format_double(rep.residual_lambda) + "\n";
    write_text_atomic((fs::path(out) / "identity_report.csv").string(), body);
  }
  return bad ? 2 : 0;
}

int run_inequality_check(const std::string& dims_s, const std::string& qs_s,
                         const std::string& law_s, std::uint64_t seed,
                         int probes, int samples, const std::string& out) {
  const EntryLaw law = EntryLaw::parse(law_s);
  const std::vector<int> dims = parse_int_list(dims_s);
  const std::vector<int> qs = parse_int_list(qs_s);
  std::string body = "dim,q,law,mc,stderr,exact,rhs,k_hat\n";
  bool violation = false;
  double worst_pull = 0.0;
  int rows = 0;
  for (int dim : dims) {
    for (int p = 0; p < probes; ++p) {
      RngStream coeff_rng(seed ^ (static_cast<std::uint64_t>(dim) << 24) ^
                          (static_cast<std::uint64_t>(p) << 8));
      const SymMatrix coeffs = random_coefficients(dim, coeff_rng);
      for (int q : qs) {
        QuadraticFormProbe probe;
        probe.coefficients = coeffs;
        probe.law = law;
        probe.q = q;
        fill_quadratic_form_probe(
            probe, samples,
            seed ^ (static_cast<std::uint64_t>(dim) << 40) ^
                (static_cast<std::uint64_t>(p) << 16) ^
                static_cast<std::uint64_t>(q));
        body += std::to_string(dim) + "," + std::to_string(q) + "," +
                law.id() + "," + format_double(probe.mc_estimate) + "," +
                format_double(probe.mc_stderr) + "," +
                (probe.exact_value ? format_double(*probe.exact_value) : "") +
                "," + format_double(probe.rhs_value) + "," +
                format_double(probe.k_hat) + "\n";
        ++rows;
        if (probe.exact_value) {
          const double pull =
              std::abs(probe.mc_estimate - *probe.exact_value) /
              std::max(probe.mc_stderr, 1e-300);
          worst_pull = std::max(worst_pull, pull);
          if (pull > 3.0) violation = true;
        }
      }
    }
  }
  if (!out.empty()) {
    namespace fs = std::filesystem;
    write_text_atomic((fs::path(out) / "inequality_scan.csv").string(), body);
  } else {
    std::cout << body;
  }
  std::cout << "inequality-check: " << rows
            << " rows, worst |mc-exact|/stderr = " << format_double(worst_pull)
            << (violation ? " [VIOLATION]" : " [ok]") << "\n";
  return violation ? 2 : 0;
}

int run_rate_fit(const std::string& in) {
  std::ifstream is(in);
  if (!is) throw IoError("cannot open " + in);
  std::string line;
  if (!std::getline(is, line)) throw IoError(in + " is empty");
  std::vector<std::pair<double, double>> points;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() < 3) throw IoError("bad row in " + in + ": " + line);
    points.emplace_back(parse_double_strict(fields[0], "n"),
                        parse_double_strict(fields[2], "delta"));
  }
  const RateFit fit = fit_rate(points);
  std::cout << "rate-fit: points=" << fit.points.size()
            << " slope=" << format_double(fit.slope)
            << " intercept=" << format_double(fit.intercept)
            << " slope_stderr=" << format_double(fit.slope_stderr) << "\n";
  return 0;
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
  const std::string t = text;
  if (t.empty()) throw UsageError("empty complex literal");
  if (t.back() != 'i') {
    return {parse_double_strict(t, "complex literal"), 0.0};
  }
  const std::string body = t.substr(0, t.size() - 1);
  // Split at the last sign that is neither leading nor an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    const char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double_strict(s, "imaginary part");
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {parse_double_strict(body.substr(0, split), "real part"),
          imag_of(body.substr(split))};
}

int dispatch(std::vector<std::string> args) {
  CLI::App app{"numerical laboratory for symmetric random matrix spectra"};
  app.name("rmt");
  app.require_subcommand(1);
  int exit_code = 0;

  // sample
  auto* sample = app.add_subcommand("sample", "draw one matrix to a file");
  std::string s_law;
  int s_n = 0;
  std::uint64_t s_seed = 1;
  std::string s_trunc;
  std::optional<double> s_d, s_k;
  std::string s_out;
  sample->add_option("--law", s_law, "entry law")->required();
  sample->add_option("--n", s_n, "matrix size")->required();
  sample->add_option("--seed", s_seed, "seed (default 1)");
  sample->add_option("--truncate", s_trunc, "truncation 'D=<d>,kappa=<k>'");
  sample->add_option("--d-const", s_d, "truncation constant D");
  sample->add_option("--kappa", s_k, "truncation kappa in (0,4]");
  sample->add_option("--out", s_out, "output matrix file")->required();
  sample->callback([&] {
    run_sample(s_law, s_n, s_seed, resolve_trunc(s_trunc, s_d, s_k), s_out);
  });

  // spectrum
  auto* spectrum =
      app.add_subcommand("spectrum", "eigenvalues of one matrix as CSV");
  std::string p_in, p_law, p_trunc, p_out;
  int p_n = 0;
  std::uint64_t p_seed = 1;
  std::optional<double> p_d, p_k;
  spectrum->add_option("--in", p_in, "matrix file from 'sample'");
  spectrum->add_option("--law", p_law, "entry law (when drawing fresh)");
  spectrum->add_option("--n", p_n, "matrix size (when drawing fresh)");
  spectrum->add_option("--seed", p_seed, "seed (default 1)");
  spectrum->add_option("--truncate", p_trunc, "truncation 'D=<d>,kappa=<k>'");
  spectrum->add_option("--d-const", p_d, "truncation constant D");
  spectrum->add_option("--kappa", p_k, "truncation kappa in (0,4]");
  spectrum->add_option("--out", p_out, "CSV path (default: stdout)");
  spectrum->callback([&] {
    if (p_in.empty()) {
      if (p_law.empty() || p_n == 0) {
        throw UsageError("spectrum needs --in, or --law with --n");
      }
    }
    run_spectrum(p_in, p_law, p_n, p_seed, resolve_trunc(p_trunc, p_d, p_k),
                 p_out);
  });

  // delta
  auto* delta = app.add_subcommand(
      "delta", "sup-distance of pooled spectra to the semicircle, per n");
  SweepFlags d_flags;
  d_flags.add_common(delta);
  delta->callback([&] {
    const DeltaSweepReport rep = run_delta_sweep(d_flags.build(false));
    std::cout << "delta: law=" << rep.cfg.law_spec << " n=";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      std::cout << (i ? "," : "") << rep.rows[i].n;
    }
    std::cout << " -> " << rep.cfg.output_dir << "/delta_scan.csv";
    if (rep.fit) std::cout << " slope=" << format_double(rep.fit->slope);
    for (const auto& w : rep.warnings) std::cout << " [warn: " << w << "]";
    std::cout << "\n";
  });

  // stieltjes-scan
  auto* sscan = app.add_subcommand(
      "stieltjes-scan", "transform gap against the bound over the window");
  SweepFlags t_flags;
  t_flags.add_common(sscan);
  sscan->add_option("--grid", t_flags.grid,
                    "window grid '<n_u>x<n_v>' (default 21x8)");
  sscan->add_option("--a0", t_flags.a0, "window constant A0 (default 2)");
  sscan->add_option("--a", t_flags.a_param, "window constant a (default 1)");
  sscan->callback([&] {
    const StieltjesSweepReport rep = run_stieltjes_sweep(t_flags.build(true));
    std::cout << "stieltjes-scan: law=" << rep.cfg.law_spec << " c_hat=";
    for (std::size_t i = 0; i < rep.c_hat.size(); ++i) {
      std::cout << (i ? "," : "") << "n" << rep.c_hat[i].first << ":"
                << format_double(rep.c_hat[i].second);
    }
    std::cout << " -> " << rep.cfg.output_dir << "/stieltjes_scan.csv\n";
  });

  // rate-fit
  auto* ratefit =
      app.add_subcommand("rate-fit", "log-log slope of a delta_scan.csv");
  std::string r_in;
  ratefit->add_option("--in", r_in, "delta_scan.csv path")->required();
  ratefit->callback([&] { exit_code = run_rate_fit(r_in); });

  // identity-check
  auto* idcheck = app.add_subcommand(
      "identity-check", "machine-precision residuals of the exact identities");
  std::string i_law = "gaussian";
  int i_n = 0;
  std::string i_z;
  std::uint64_t i_seed = 1;
  std::string i_trunc;
  std::optional<double> i_d, i_k;
  double i_tol = 1e-8;
  int i_checks = 4;
  std::string i_out;
  idcheck->add_option("--n", i_n, "matrix size")->required();
  idcheck->add_option("--z", i_z, "evaluation point 'a+bi', Im > 0")
      ->required();
  idcheck->add_option("--law", i_law, "entry law (default gaussian)");
  idcheck->add_option("--seed", i_seed, "seed (default 1)");
  idcheck->add_option("--truncate", i_trunc, "truncation 'D=<d>,kappa=<k>'");
  idcheck->add_option("--d-const", i_d, "truncation constant D");
  idcheck->add_option("--kappa", i_k, "truncation kappa in (0,4]");
  idcheck->add_option("--tol", i_tol, "residual tolerance (default 1e-8)");
  idcheck->add_option("--direct-checks", i_checks,
                      "minors re-solved from scratch (default 4)");
  idcheck->add_option("--out", i_out, "directory for identity_report.csv");
  idcheck->callback([&] {
    exit_code =
        run_identity_check(i_law, i_n, parse_complex(i_z), i_seed,
                           resolve_trunc(i_trunc, i_d, i_k), i_tol, i_checks,
                           i_out);
  });

  // inequality-check
  auto* ineq = app.add_subcommand(
      "inequality-check",
      "off-diagonal quadratic form moments: MC vs enumeration vs bracket");
  std::string q_dims = "4,6,8,10";
  std::string q_qs = "4,6";
  std::string q_law = "rademacher";
  std::uint64_t q_seed = 1;
  int q_probes = 5;
  int q_samples = 200000;
  std::string q_out;
  ineq->add_option("--dim", q_dims, "dimensions (default 4,6,8,10)");
  ineq->add_option("--q", q_qs, "even moment orders >= 4 (default 4,6)");
  ineq->add_option("--law", q_law, "entry law (default rademacher)");
  ineq->add_option("--seed", q_seed, "seed (default 1)");
  ineq->add_option("--probes", q_probes,
                   "coefficient matrices per dim (default 5)");
  ineq->add_option("--samples", q_samples, "MC samples (default 200000)");
  ineq->add_option("--out", q_out, "directory for inequality_scan.csv");
  ineq->callback([&] {
    exit_code = run_inequality_check(q_dims, q_qs, q_law, q_seed, q_probes,
                                     q_samples, q_out);
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}

}  // namespace rmtlab::cli
