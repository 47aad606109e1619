#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "thmas/config.hpp"
#include "thmas/engine.hpp"
#include "thmas/verify.hpp"
#include "thmas/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("THMAS_LOG");
    if (env == nullptr) {
      return 0;
    }
    const std::string v(env);
    if (v == "debug") {
      return 2;
    }
    if (v == "info") {
      return 1;
    }
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) {
    std::cerr << "[thmas] " << msg << "\n";
  }
}

struct CommonOpts {
  std::string builtin;
  std::string config_path;
  std::string output_path;
  std::string dump_config_path;
  std::vector<std::string> overrides;
};

// Builtin or file -> raw JSON -> overrides -> parsed + validated config.
thmas::ScenarioConfig load_config(const CommonOpts& opts) {
  nlohmann::json j;
  if (!opts.builtin.empty()) {
    j = thmas::config_json(thmas::builtin_scenario(opts.builtin));
  } else {
    std::ifstream in(opts.config_path);
    if (!in) {
      throw thmas::ConfigFileError("config file not found: " + opts.config_path);
    }
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw thmas::ConfigParseError(std::string("config parse error: ") + e.what());
    }
  }
  for (const std::string& kv : opts.overrides) {
    thmas::apply_override(j, kv);
  }
  thmas::ScenarioConfig cfg = thmas::parse_config_json(j);
  thmas::validate_config(cfg);
  return cfg;
}

bool maybe_dump_config(const CommonOpts& opts, const thmas::ScenarioConfig& cfg) {
  if (opts.dump_config_path.empty()) {
    return false;
  }
  std::ofstream out(opts.dump_config_path);
  if (!out) {
    throw thmas::ConfigFileError("cannot write config to " + opts.dump_config_path);
  }
  out << thmas::config_json(cfg).dump(2) << "\n";
  log_info("wrote config to " + opts.dump_config_path);
  return true;
}

void write_csv(const std::string& path, const std::vector<thmas::TraceRecord>& trace,
               int num_followers) {
  std::ofstream out(path);
  if (!out) {
    throw thmas::ConfigFileError("cannot write trace to " + path);
  }
  thmas::write_trace_csv(trace, num_followers, out);
}

void print_summary(const thmas::ScenarioConfig& cfg,
                   const std::vector<thmas::TraceRecord>& trace) {
  const std::vector<double> series = thmas::consensus_error_series(trace);
  std::cout << "scenario: " << (cfg.name.empty() ? "(unnamed)" : cfg.name)
            << "  N=" << cfg.N << "  M=" << cfg.M << "  ticks=" << trace.size()
            << "\n";
  std::cout << "final consensus error: " << series.back() << "\n";
  if (cfg.quantized) {
    const int window = std::min<int>(static_cast<int>(series.size()), 4 * cfg.M);
    const thmas::LimitCycleReport lc = thmas::detect_limit_cycle(series, window);
    if (lc.detected) {
      std::cout << "limit cycle: amplitude " << lc.amplitude;
      if (lc.period_ticks) {
        std::cout << ", period " << *lc.period_ticks << " ticks";
      }
      std::cout << " (window " << window << ")\n";
    } else {
      std::cout << "limit cycle: none detected (window " << window << ")\n";
    }
  } else {
    constexpr double tol = 1e-6;
    long first = -1;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (series[i] < tol) {
        first = trace[i].k;
        break;
      }
    }
    if (first >= 0) {
      std::cout << "ticks to error < 1e-06: " << (first + 1) << "\n";
    } else {
      std::cout << "error did not reach 1e-06 within the run\n";
    }
  }
}

int cmd_run(const CommonOpts& opts) {
  thmas::ScenarioConfig cfg = load_config(opts);
  if (maybe_dump_config(opts, cfg)) {
    return kExitOk;
  }
  if (opts.output_path.empty()) {
    std::cerr << "run requires an output path (-o)\n";
    return kExitUsage;
  }
  log_info("running scenario");
  const std::vector<thmas::TraceRecord> trace = thmas::run_scenario(cfg);
  write_csv(opts.output_path, trace, cfg.N);
  print_summary(cfg, trace);
  std::cout << "trace written to " << opts.output_path << "\n";
  return kExitOk;
}

int cmd_bench(const CommonOpts& opts) {
  thmas::ScenarioConfig cfg = load_config(opts);
  if (maybe_dump_config(opts, cfg)) {
    return kExitOk;
  }
  const std::vector<thmas::TraceRecord> trace = thmas::run_scenario(cfg);
  if (!opts.output_path.empty()) {
    write_csv(opts.output_path, trace, cfg.N);
  }
  print_summary(cfg, trace);
  std::cout << "major periods cycle every family at least " << cfg.c
            << "x: " << (thmas::check_practical_consensus_rate(cfg) ? "yes" : "no")
            << "\n";
  if (!cfg.quantized) {
    constexpr double tol = 1e-4;
    for (const thmas::PhaseReport& phase : thmas::phase_convergence(trace, tol)) {
      std::cout << "sigma=" << phase.sigma << " phase starting at k=" << phase.start_k
                << ": ";
      if (phase.ticks_to_tol >= 0) {
        std::cout << phase.ticks_to_tol << " ticks to error < 1e-04";
      } else {
        std::cout << "error stayed above 1e-04";
      }
      std::cout << " (final " << phase.final_error << ")\n";
    }
  }
  if (!opts.output_path.empty()) {
    std::cout << "trace written to " << opts.output_path << "\n";
  }
  return kExitOk;
}

struct VerifyParams {
  int N = 3;
  int sigma = 2;
  double w = 1.0;
  double k_fb = 0.2;
  double tol = 1e-6;
  unsigned long long seed = 1;
};

int cmd_verify(const CommonOpts& opts) {
  VerifyParams params;
  std::vector<double> x0;
  if (!opts.config_path.empty()) {
    const thmas::ScenarioConfig cfg = thmas::parse_config_file(opts.config_path);
    params.N = cfg.N;
    params.sigma = cfg.schedule.front().sigma;
    params.w = cfg.w;
    params.k_fb = cfg.k_fb;
    x0 = cfg.x0;
  }
  for (const std::string& kv : opts.overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw thmas::ConfigParseError("override must look like key=value: " + kv);
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      if (key == "N") {
        params.N = std::stoi(value);
        x0.clear();  // regenerate for the new size
      } else if (key == "sigma") {
        params.sigma = std::stoi(value);
      } else if (key == "w") {
        params.w = std::stod(value);
      } else if (key == "k_fb") {
        params.k_fb = std::stod(value);
      } else if (key == "tol") {
        params.tol = std::stod(value);
      } else if (key == "seed") {
        params.seed = std::stoull(value);
        x0.clear();
      } else {
        throw thmas::ConfigParseError("unknown override key: " + key);
      }
    } catch (const std::invalid_argument&) {
      throw thmas::ConfigParseError("override value for " + key +
                                    " is not a number: " + value);
    }
  }
  if (x0.empty()) {
    x0 = thmas::random_initial_state(params.N + 1, 0.0, 10.0, params.seed);
  }

  const thmas::Certificate cert = thmas::theorem1_certificate(
      params.N, params.sigma, params.w, params.k_fb, x0, params.tol);
  const std::string json_text = thmas::certificate_json(cert).dump(2);
  if (!opts.output_path.empty()) {
    std::ofstream out(opts.output_path);
    if (!out) {
      throw thmas::ConfigFileError("cannot write certificate to " + opts.output_path);
    }
    out << json_text << "\n";
    for (const thmas::CertificateCheck& c : cert.checks) {
      std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
                << " (residual " << c.residual << ")\n";
    }
    std::cout << "certificate written to " << opts.output_path << "\n";
  } else {
    std::cout << json_text << "\n";
  }
  return cert.passed ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thmas: leader-follower consensus with a time-varying set of active followers"};
  app.set_version_flag("--version", thmas::kVersion);
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "simulate a scenario and write a CSV trace");
  auto* run_builtin = run->add_option("--builtin", run_opts.builtin, "builtin scenario (mmc|pump)");
  auto* run_config = run->add_option("--config", run_opts.config_path, "scenario config JSON");
  run_builtin->excludes(run_config);
  run->add_option("-o,--output", run_opts.output_path, "CSV output path");
  run->add_option("--set", run_opts.overrides, "config override key=value (dotted paths)");
  run->add_option("--dump-config", run_opts.dump_config_path,
                  "write the effective config JSON and exit");

  CommonOpts verify_opts;
  CLI::App* verify = app.add_subcommand("verify", "emit a convergence certificate as JSON");
  verify->add_option("--config", verify_opts.config_path, "take N/sigma/w/k_fb/x0 from a config");
  verify->add_option("-o,--output", verify_opts.output_path, "certificate output path");
  verify->add_option("--set", verify_opts.overrides,
                     "parameter override (N, sigma, w, k_fb, tol, seed)");

  CommonOpts bench_opts;
  CLI::App* bench = app.add_subcommand("bench", "run a builtin benchmark and print metrics");
  bench->add_option("--builtin", bench_opts.builtin, "builtin scenario (mmc|pump)")->required();
  bench->add_option("-o,--output", bench_opts.output_path, "optional CSV output path");
  bench->add_option("--set", bench_opts.overrides, "config override key=value");
  bench->add_option("--dump-config", bench_opts.dump_config_path,
                    "write the effective config JSON and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) {
      if (run_opts.builtin.empty() && run_opts.config_path.empty()) {
        std::cerr << "run requires --builtin or --config\n";
        return kExitUsage;
      }
      return cmd_run(run_opts);
    }
    if (verify->parsed()) {
      return cmd_verify(verify_opts);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_opts);
    }
  } catch (const thmas::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    // out-of-range parameters (e.g. sigma outside [1, N]) are caller mistakes
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
