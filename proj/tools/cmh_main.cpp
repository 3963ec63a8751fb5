// Command line front end for the sampler benchmark library. All work goes
// through the C API in cmh/cmh.h; this file only handles flags, files, and
// exit codes (0 success, 1 runtime failure, 2 usage/config error).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmh/cmh.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

bool log_enabled() {
  const char* v = std::getenv("CMH_LOG");
  return v != nullptr && *v != '\0' && std::string(v) != "0" &&
         std::string(v) != "off";
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::cerr << "[cmh] " << msg << '\n';
}

int status_to_exit(cmh_status st) {
  if (st == CMH_OK) return 0;
  std::cerr << "error: " << cmh_last_error() << '\n';
  return st == CMH_ERROR_CONFIG || st == CMH_ERROR_ARGUMENT ? kExitUsage
                                                            : kExitRuntime;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

int cmd_run_experiment(const std::string& config_path, bool seed_set,
                       std::uint64_t seed, const std::string& out_dir,
                       int workers) {
  std::string text;
  if (!read_file(config_path, text)) {
    std::cerr << "error: cannot read config file: " << config_path << '\n';
    return kExitUsage;
  }
  // Apply command line overrides onto the document before handing it over.
  if (seed_set || workers > 0) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) {
      std::cerr << "error: malformed config file: " << config_path << '\n';
      return kExitUsage;
    }
    if (seed_set) {
      j["master_seed"] = seed;
      if (j.contains("experiments")) {
        for (auto& e : j["experiments"]) e.erase("seed");
      }
    }
    if (workers > 0) j["workers"] = workers;
    text = j.dump();
  }
  log_line("running experiments from " + config_path);
  char* report_json = nullptr;
  cmh_status st = cmh_run_config(
      text.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &report_json);
  if (st == CMH_OK && report_json != nullptr) {
    std::cout << report_json << '\n';
    cmh_string_free(report_json);
  }
  return status_to_exit(st);
}

int cmd_bounds(const std::string& model, double gamma, int K, int m, double a1,
               double a2) {
  if (model == "normal-normal") {
    double c_star = 0.0;
    double q_star = 0.0;
    cmh_status st = cmh_bounds_normal_normal(gamma, &c_star, &q_star);
    if (st != CMH_OK) return status_to_exit(st);
    std::printf("gamma   %.6g\n", gamma);
    std::printf("c_star  %.6g\n", c_star);
    std::printf("q_star  %.6g\n", q_star);
    return 0;
  }
  if (model == "random-effects") {
    double et = 0.0;
    double em = 0.0;
    double el = 0.0;
    cmh_status st = cmh_bounds_random_effects(K, m, a1, a2, gamma, &et, &em, &el);
    if (st != CMH_OK) return status_to_exit(st);
    std::printf("gamma       %.6g\n", gamma);
    std::printf("eps_theta   %.6g\n", et);
    std::printf("eps_mu      %.6g\n", em);
    std::printf("eps_lambda  %.6g\n", el);
    return 0;
  }
  std::cerr << "error: bounds supports normal-normal and random-effects\n";
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-scan Gibbs / conditional Metropolis-Hastings benchmark "
               "harness"};
  app.require_subcommand(1);

  // run-experiment
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  auto* run = app.add_subcommand("run-experiment",
                                 "Run the experiments in a config file and "
                                 "write report.csv");
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  auto* run_seed = run->add_option("--seed", seed, "Master seed override");
  run->add_option("--out", out_dir, "Output directory override");
  run->add_option("--workers", workers, "Worker thread count");

  // bounds
  std::string bounds_model = "normal-normal";
  double gamma = 0.75;
  int K = 3;
  int m = 10;
  double a1 = 30.0;
  double a2 = 30.0;
  auto* bounds = app.add_subcommand(
      "bounds", "Geometric ergodicity neighborhood-size thresholds");
  bounds->add_option("--model", bounds_model, "normal-normal | random-effects");
  bounds->add_option("--gamma", gamma, "GS drift rate");
  bounds->add_option("--K", K, "Subject count (random-effects)");
  bounds->add_option("--m", m, "Observations per subject (random-effects)");
  bounds->add_option("--a1", a1, "lambda_theta prior shape");
  bounds->add_option("--a2", a2, "lambda_e prior shape");

  // trace
  std::string trace_out = "trace.csv";
  long run_length = 1000;
  long window_start = 0;
  long window_end = 1000;
  int block = 0;
  int coord = 0;
  std::uint64_t trace_seed = 0;
  auto* trace = app.add_subcommand(
      "trace", "Emit a single-chain coordinate trace window as CSV");
  trace->add_option("--config", config_path, "JSON with model and sampler")
      ->required();
  trace->add_option("--length", run_length, "Run length (states)");
  trace->add_option("--start", window_start, "Window start iteration");
  trace->add_option("--end", window_end, "Window end iteration (exclusive)");
  trace->add_option("--block", block, "Block index");
  trace->add_option("--coord", coord, "Coordinate within the block");
  trace->add_option("--seed", trace_seed, "Master seed");
  trace->add_option("--out", trace_out, "Output CSV path");

  // simulate-data
  int sim_K = 3;
  int sim_m = 10;
  double m0 = 0.0;
  double s0 = 1.0;
  double gen_a = 2.0;
  double gen_b = 2.0;
  std::uint64_t sim_seed = 1;
  std::string sim_out = ".";
  auto* simulate = app.add_subcommand(
      "simulate-data", "Simulate a random effects dataset (CSV + metadata)");
  simulate->add_option("--K", sim_K, "Subjects");
  simulate->add_option("--m", sim_m, "Observations per subject");
  simulate->add_option("--m0", m0, "Prior mean of mu");
  simulate->add_option("--s0", s0, "Prior precision of mu");
  simulate->add_option("--a", gen_a, "Generating gamma shape");
  simulate->add_option("--b", gen_b, "Generating gamma rate");
  simulate->add_option("--seed", sim_seed, "Generator seed");
  simulate->add_option("--out", sim_out, "Output directory");

  // reference
  long ref_length = 1000000;
  std::uint64_t ref_seed = 0;
  auto* reference = app.add_subcommand(
      "reference", "Long single-run GS estimate of the functional");
  reference->add_option("--config", config_path, "JSON with model")->required();
  reference->add_option("--length", ref_length, "Run length");
  reference->add_option("--seed", ref_seed, "Master seed");

  // tune-eps
  long tune_n = 100000;
  std::uint64_t tune_seed = 0;
  auto* tune = app.add_subcommand(
      "tune-eps",
      "Acceptance-rate scan over eps triples (tuning aid; config JSON with "
      "\"model\" and \"triples\")");
  tune->add_option("--config", config_path, "JSON with model and triples")
      ->required();
  tune->add_option("--n", tune_n, "Run length per triple");
  tune->add_option("--seed", tune_seed, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  if (run->parsed()) {
    return cmd_run_experiment(config_path, run_seed->count() > 0, seed, out_dir,
                              workers);
  }
  if (bounds->parsed()) {
    return cmd_bounds(bounds_model, gamma, K, m, a1, a2);
  }
  if (trace->parsed()) {
    std::string text;
    if (!read_file(config_path, text)) {
      std::cerr << "error: cannot read config file: " << config_path << '\n';
      return kExitUsage;
    }
    log_line("emitting trace to " + trace_out);
    return status_to_exit(cmh_emit_trace(text.c_str(), trace_seed, run_length,
                                         window_start, window_end, block, coord,
                                         trace_out.c_str()));
  }
  if (simulate->parsed()) {
    std::filesystem::create_directories(sim_out);
    auto csv = (std::filesystem::path(sim_out) / "dataset.csv").string();
    auto meta = (std::filesystem::path(sim_out) / "dataset.meta").string();
    cmh_status st = cmh_simulate_dataset(sim_K, sim_m, m0, s0, gen_a, gen_b,
                                         sim_seed, csv.c_str(), meta.c_str());
    if (st == CMH_OK) std::cout << csv << '\n' << meta << '\n';
    return status_to_exit(st);
  }
  if (reference->parsed()) {
    std::string text;
    if (!read_file(config_path, text)) {
      std::cerr << "error: cannot read config file: " << config_path << '\n';
      return kExitUsage;
    }
    double beta_star = 0.0;
    cmh_status st =
        cmh_run_reference(text.c_str(), ref_seed, ref_length, &beta_star);
    if (st == CMH_OK) std::printf("beta_star %.10g\n", beta_star);
    return status_to_exit(st);
  }
  if (tune->parsed()) {
    std::string text;
    if (!read_file(config_path, text)) {
      std::cerr << "error: cannot read config file: " << config_path << '\n';
      return kExitUsage;
    }
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("model") || !j.contains("triples")) {
      std::cerr << "error: tune-eps config needs \"model\" and \"triples\"\n";
      return kExitUsage;
    }
    char* out_json = nullptr;
    cmh_status st =
        cmh_eps_accept_grid(j["model"].dump().c_str(),
                            j["triples"].dump().c_str(), tune_n, tune_seed,
                            &out_json);
    if (st == CMH_OK && out_json != nullptr) {
      std::cout << out_json << '\n';
      cmh_string_free(out_json);
    }
    return status_to_exit(st);
  }
  return kExitUsage;
}
