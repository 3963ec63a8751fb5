#ifndef CMH_CORE_HARNESS_HPP
#define CMH_CORE_HARNESS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/diagnostics.hpp"
#include "core/models.hpp"
#include "core/neighborhoods.hpp"
#include "core/sampler.hpp"

namespace cmh {

// Configuration problems (malformed file, unknown keys, incompatible
// specs). The CLI maps these to usage errors, everything else to runtime
// failures.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SamplerType { GS, CMH };

struct SamplerConfig {
  SamplerType type = SamplerType::GS;
  std::vector<NeighborhoodSpec> specs;  // one per block, CMH only
  std::string tag = "gs";               // folded into chain seeds
  std::string description = "gs";       // echoed in report rows
};

struct ModelConfig {
  std::string name;  // normal-normal | unit-square | random-effects
  std::string dataset_path;
  REHyper hyper;
  // Inline generation parameters when no dataset file is given.
  bool generate = false;
  int gen_K = 3;
  int gen_m = 10;
  double gen_m0 = 0.0;
  double gen_s0 = 1.0;
  double gen_a = 2.0;
  double gen_b = 2.0;
  std::uint64_t gen_seed = 1;
};

std::unique_ptr<Model> build_model(const ModelConfig& config);

struct BetaRefConfig {
  enum class Type { Analytic, ReferenceRun };
  Type type = Type::Analytic;
  double value = 0.0;
  long length = 1000000;
};

struct ExperimentConfig {
  std::string config_id;
  ModelConfig model;
  SamplerConfig sampler;
  long n = 1000;  // states per chain (n-1 transitions)
  int N = 1000;   // replicate chains
  std::uint64_t master_seed = 0;
  BetaRefConfig beta_ref;
  // When > 0, the acceptance rate comes from one independent run of this
  // length instead of the replicate chains.
  long accept_rate_run_length = 0;
  std::optional<std::pair<int, int>> functional;  // (block, coord) override
  int max_attempts = 1000000;
};

// One chain of n states from the model's initial state. Step j runs on the
// substream step_stream(chain_seed, j), so GS and CMH consume independent
// uniforms per iteration regardless of proposal attempt counts.
ChainSummary run_chain(const Model& model, const SamplerConfig& sampler,
                       std::uint64_t chain_seed, long n,
                       const std::function<double(const StateVector&)>& f,
                       int max_attempts = 1000000);

// N replicate GS chains and (for CMH configs) N replicate CMH chains, all
// estimators, and the ratio estimates. Audits neighborhood admissibility on
// a warm-up probe set first.
ExperimentReport run_experiment(const ExperimentConfig& config, int workers = 1);

// Monte Carlo average of the functional over one GS run of the given
// length, on a dedicated seed stream.
double run_reference(const ModelConfig& model_config, std::uint64_t master_seed,
                     long length,
                     std::optional<std::pair<int, int>> functional = {});

struct TraceRequest {
  long run_length = 1000;  // states in the run
  long start = 0;          // window [start, end)
  long end = 1000;
  int block = 0;
  int coord = 0;
};

struct TraceRow {
  long iteration;
  double value;
};

std::vector<TraceRow> emit_trace(const ModelConfig& model_config,
                                 const SamplerConfig& sampler,
                                 std::uint64_t master_seed,
                                 const TraceRequest& req);

// Acceptance-rate scan over candidate (eps_theta, eps_mu, eps_lambda)
// triples; a tuning aid, not part of the table reproduction path.
struct EpsGridEntry {
  std::array<double, 3> eps;
  double accept_rate;
};
std::vector<EpsGridEntry> eps_acceptance_grid(
    const ModelConfig& model_config,
    const std::vector<std::array<double, 3>>& triples, long n,
    std::uint64_t master_seed);

// --- configuration file / artifact IO -----------------------------------

struct HarnessConfig {
  std::uint64_t master_seed = 0;
  std::string out_dir = ".";
  int workers = 1;
  std::vector<ExperimentConfig> experiments;
};

HarnessConfig parse_config_json(const std::string& json_text);
HarnessConfig load_config_file(const std::string& path);

// Fragment parsers used by the C API: a model object and a sampler object
// in the same shape they take inside an experiment entry.
ModelConfig parse_model_json(const std::string& json_text);
SamplerConfig parse_sampler_json(const std::string& json_text, const Model& model);

// Per-experiment row written to report.csv.
std::string report_csv_header();
std::string report_csv_row(const ExperimentConfig& config,
                           const ExperimentReport& report);
std::string report_to_json(const ExperimentConfig& config,
                           const ExperimentReport& report);

// Runs every experiment in the config and writes <out_dir>/report.csv.
std::vector<ExperimentReport> run_config(const HarnessConfig& config);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);

void save_re_dataset(const std::string& csv_path, const std::string& meta_path,
                     const REDataset& data, std::uint64_t seed, double m0,
                     double s0, double a, double b);
REDataset load_re_dataset(const std::string& csv_path);

// Numbers in CSV artifacts: '.' decimal, 6 significant digits.
std::string format_number(double v);

}  // namespace cmh

#endif
