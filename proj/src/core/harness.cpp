#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace cmh {

namespace {

using nlohmann::json;

void copy_state(const StateVector& from, StateVector& to) {
  for (std::size_t i = 0; i < from.blocks.size(); ++i) {
    to.blocks[i] = from.blocks[i];
  }
}

std::function<double(const StateVector&)> make_functional(
    const Model& model, std::optional<std::pair<int, int>> override_coord) {
  if (override_coord.has_value()) {
    auto [block, coord] = *override_coord;
    if (block < 0 || block >= model.block_count() || coord < 0 ||
        coord >= model.block_dim(block)) {
      throw ConfigError("functional: block/coord out of range");
    }
    return [block, coord](const StateVector& s) {
      return s.blocks[block][coord];
    };
  }
  return [&model](const StateVector& s) { return model.functional(s); };
}

// Runs fn(i) for i in [0, count) across the given number of threads,
// results keyed by index so the split never affects output.
void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mutex;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<StateVector> warmup_probe_states(const Model& model,
                                             std::uint64_t master_seed,
                                             int count) {
  ScanProbabilities p(model.scan_probabilities());
  std::uint64_t seed = derive_chain_seed(master_seed, "probe", 0);
  StateVector state = model.initial_state();
  std::vector<StateVector> probes;
  probes.reserve(count + 1);
  probes.push_back(state);
  for (int j = 1; j <= count; ++j) {
    auto rng = step_stream(seed, j);
    gibbs_step_inplace(state, model, p, rng);
    probes.push_back(state);
  }
  return probes;
}

}  // namespace

std::unique_ptr<Model> build_model(const ModelConfig& config) {
  if (config.name == "normal-normal") return std::make_unique<NormalNormalModel>();
  if (config.name == "unit-square") return std::make_unique<UnitSquareModel>();
  if (config.name == "random-effects") {
    REDataset data;
    if (!config.dataset_path.empty()) {
      data = load_re_dataset(config.dataset_path);
    } else if (config.generate) {
      data = simulate_re_data(config.gen_K, config.gen_m, config.gen_m0,
                              config.gen_s0, config.gen_a, config.gen_b,
                              config.gen_seed);
    } else {
      throw ConfigError("random-effects model needs a dataset path or generate block");
    }
    return std::make_unique<RandomEffectsModel>(std::move(data), config.hyper);
  }
  throw ConfigError("unknown model: " + config.name);
}

ChainSummary run_chain(const Model& model, const SamplerConfig& sampler,
                       std::uint64_t chain_seed, long n,
                       const std::function<double(const StateVector&)>& f,
                       int max_attempts) {
  if (n < 2) throw std::invalid_argument("run_chain: n must be >= 2");
  ScanProbabilities p(model.scan_probabilities());
  StateVector state = model.initial_state();
  StateVector prev = state;

  double beta_sum = f(state);
  double jump_sum = 0.0;
  long accept = 0;
  for (long j = 1; j < n; ++j) {
    auto rng = step_stream(chain_seed, static_cast<std::uint64_t>(j));
    copy_state(state, prev);
    KernelStepRecord rec;
    if (sampler.type == SamplerType::GS) {
      rec = gibbs_step_inplace(state, model, p, rng);
    } else {
      rec = cmh_step_inplace(state, model, p, sampler.specs, rng, max_attempts);
    }
    jump_sum += squared_distance(state, prev);
    beta_sum += f(state);
    if (rec.accepted) ++accept;
  }

  ChainSummary s;
  s.msjd = jump_sum / static_cast<double>(n - 1);
  s.beta_hat = beta_sum / static_cast<double>(n);
  s.accept_count = accept;
  s.step_count = n - 1;
  return s;
}

ExperimentReport run_experiment(const ExperimentConfig& config, int workers) {
  if (config.n < 2 || config.N < 2) {
    throw ConfigError("run_experiment: need n >= 2 and N >= 2");
  }
  auto model = build_model(config.model);
  auto f = make_functional(*model, config.functional);

  if (config.sampler.type == SamplerType::CMH) {
    if (static_cast<int>(config.sampler.specs.size()) != model->block_count()) {
      throw ConfigError("sampler: one neighborhood spec per block required");
    }
    auto probes = warmup_probe_states(*model, config.master_seed, 200);
    auto audit = check_admissibility(config.sampler.specs, *model, probes);
    if (audit.violation) {
      throw std::runtime_error(
          "neighborhood admissibility violation: observed mass " +
          std::to_string(audit.q_max_observed));
    }
  }

  double beta_ref = config.beta_ref.value;
  if (config.beta_ref.type == BetaRefConfig::Type::ReferenceRun) {
    beta_ref = run_reference(config.model, config.master_seed,
                             config.beta_ref.length, config.functional);
  }

  auto run_replicates = [&](const SamplerConfig& sampler) {
    std::vector<ChainSummary> summaries(config.N);
    parallel_for(config.N, workers, [&](int i) {
      std::uint64_t seed = derive_chain_seed(config.master_seed, sampler.tag,
                                             static_cast<std::uint64_t>(i));
      summaries[i] =
          run_chain(*model, sampler, seed, config.n, f, config.max_attempts);
    });
    return summaries;
  };

  SamplerConfig gs;
  auto gs_summaries = run_replicates(gs);

  ExperimentReport report;
  report.config_id = config.config_id;
  report.beta_ref = beta_ref;
  report.esjd_gs = esjd(gs_summaries);
  std::vector<double> gs_betas;
  for (const auto& s : gs_summaries) gs_betas.push_back(s.beta_hat);
  report.mse_gs = mse(gs_betas, beta_ref);

  if (config.sampler.type == SamplerType::GS) {
    report.esjd_cmh = report.esjd_gs;
    report.mse_cmh = report.mse_gs;
    report.esjdr = {1.0, 0.0};
    report.mser = {1.0, 0.0};
    report.accept_rate = 1.0;
    return report;
  }

  auto cmh_summaries = run_replicates(config.sampler);
  report.esjd_cmh = esjd(cmh_summaries);
  std::vector<double> cmh_betas;
  for (const auto& s : cmh_summaries) cmh_betas.push_back(s.beta_hat);
  report.mse_cmh = mse(cmh_betas, beta_ref);
  report.esjdr = ratio_with_se(report.esjd_cmh, report.esjd_gs);
  report.mser = ratio_with_se(report.mse_cmh, report.mse_gs);

  if (config.accept_rate_run_length > 0) {
    std::uint64_t seed = derive_chain_seed(config.master_seed, "accept-rate", 0);
    auto s = run_chain(*model, config.sampler, seed,
                       config.accept_rate_run_length, f, config.max_attempts);
    report.accept_rate =
        static_cast<double>(s.accept_count) / static_cast<double>(s.step_count);
  } else {
    long accepted = 0;
    long steps = 0;
    for (const auto& s : cmh_summaries) {
      accepted += s.accept_count;
      steps += s.step_count;
    }
    report.accept_rate = static_cast<double>(accepted) / static_cast<double>(steps);
  }
  return report;
}

double run_reference(const ModelConfig& model_config, std::uint64_t master_seed,
                     long length, std::optional<std::pair<int, int>> functional) {
  if (length < 1) throw std::invalid_argument("run_reference: length must be >= 1");
  auto model = build_model(model_config);
  auto f = make_functional(*model, functional);
  if (length == 1) return f(model->initial_state());
  SamplerConfig gs;
  std::uint64_t seed = derive_chain_seed(master_seed, "reference", 0);
  return run_chain(*model, gs, seed, length, f).beta_hat;
}

std::vector<TraceRow> emit_trace(const ModelConfig& model_config,
                                 const SamplerConfig& sampler,
                                 std::uint64_t master_seed,
                                 const TraceRequest& req) {
  if (!(req.start >= 0 && req.start < req.end && req.end <= req.run_length)) {
    throw ConfigError("trace: need 0 <= start < end <= run_length");
  }
  auto model = build_model(model_config);
  if (req.block < 0 || req.block >= model->block_count() || req.coord < 0 ||
      req.coord >= model->block_dim(req.block)) {
    throw ConfigError("trace: block/coord out of range");
  }
  ScanProbabilities p(model->scan_probabilities());
  StateVector state = model->initial_state();
  std::uint64_t seed = derive_chain_seed(master_seed, sampler.tag + "-trace", 0);

  std::vector<TraceRow> rows;
  rows.reserve(static_cast<std::size_t>(req.end - req.start));
  if (req.start == 0) rows.push_back({0, state.blocks[req.block][req.coord]});
  for (long j = 1; j < req.run_length; ++j) {
    auto rng = step_stream(seed, static_cast<std::uint64_t>(j));
    if (sampler.type == SamplerType::GS) {
      gibbs_step_inplace(state, *model, p, rng);
    } else {
      cmh_step_inplace(state, *model, p, sampler.specs, rng);
    }
    if (j >= req.start && j < req.end) {
      rows.push_back({j, state.blocks[req.block][req.coord]});
    }
  }
  return rows;
}

std::vector<EpsGridEntry> eps_acceptance_grid(
    const ModelConfig& model_config,
    const std::vector<std::array<double, 3>>& triples, long n,
    std::uint64_t master_seed) {
  auto model = build_model(model_config);
  auto f = make_functional(*model, {});
  std::vector<EpsGridEntry> out;
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const auto& eps = triples[t];
    SamplerConfig sampler;
    sampler.type = SamplerType::CMH;
    sampler.tag = "eps-grid";
    sampler.specs = {
        NeighborhoodSpec::ball(eps[0], Scaling::ConditionalSdUnits),
        NeighborhoodSpec::interval(eps[1], Scaling::ConditionalSdUnits),
        NeighborhoodSpec::rectangle(eps[2], eps[2], Scaling::ConditionalSdUnits)};
    std::uint64_t seed = derive_chain_seed(master_seed, sampler.tag,
                                           static_cast<std::uint64_t>(t));
    auto s = run_chain(*model, sampler, seed, n, f);
    out.push_back({eps, static_cast<double>(s.accept_count) /
                            static_cast<double>(s.step_count)});
  }
  return out;
}

// --- configuration parsing -----------------------------------------------

namespace {

Scaling parse_scaling(const json& j) {
  std::string s = j.value("scaling", "absolute");
  if (s == "absolute") return Scaling::Absolute;
  if (s == "sd") return Scaling::ConditionalSdUnits;
  throw ConfigError("unknown scaling: " + s);
}

NeighborhoodSpec parse_neighborhood(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "empty") return NeighborhoodSpec::empty();
    if (kind == "interval") {
      return NeighborhoodSpec::interval(j.at("halfwidth").get<double>(),
                                        parse_scaling(j));
    }
    if (kind == "fixed-density") {
      return NeighborhoodSpec::fixed_density(j.at("q").get<double>());
    }
    if (kind == "ball") {
      return NeighborhoodSpec::ball(j.at("radius").get<double>(),
                                    parse_scaling(j));
    }
    if (kind == "rectangle") {
      return NeighborhoodSpec::rectangle(j.at("halfwidth1").get<double>(),
                                         j.at("halfwidth2").get<double>(),
                                         parse_scaling(j));
    }
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("neighborhood: ") + e.what());
  }
  throw ConfigError("unknown neighborhood kind: " + kind);
}

SamplerConfig parse_sampler(const json& j, const Model& model) {
  SamplerConfig out;
  std::string type = j.at("type").get<std::string>();
  std::ostringstream desc;
  if (type == "gs") {
    out.type = SamplerType::GS;
    out.tag = "gs";
    out.description = "gs";
    return out;
  }
  out.type = SamplerType::CMH;
  out.tag = "cmh";
  try {
    if (type == "cmh-c") {
      double c = j.at("c").get<double>();
      for (int i = 0; i < model.block_count(); ++i) {
        if (model.block_dim(i) != 1) {
          throw ConfigError("cmh-c requires scalar blocks");
        }
        out.specs.push_back(
            NeighborhoodSpec::interval(c, Scaling::ConditionalSdUnits));
      }
      desc << "cmh-c(" << c << ")";
    } else if (type == "cmh-q") {
      double q = j.at("q").get<double>();
      for (int i = 0; i < model.block_count(); ++i) {
        if (model.block_dim(i) != 1) {
          throw ConfigError("cmh-q requires scalar blocks");
        }
        out.specs.push_back(NeighborhoodSpec::fixed_density(q));
      }
      desc << "cmh-q(" << q << ")";
    } else if (type == "cmh-eps") {
      double et = j.at("eps_theta").get<double>();
      double em = j.at("eps_mu").get<double>();
      double el = j.at("eps_lambda").get<double>();
      if (model.block_count() != 3) {
        throw ConfigError("cmh-eps requires the random-effects model");
      }
      out.specs = {
          NeighborhoodSpec::ball(et, Scaling::ConditionalSdUnits),
          NeighborhoodSpec::interval(em, Scaling::ConditionalSdUnits),
          NeighborhoodSpec::rectangle(el, el, Scaling::ConditionalSdUnits)};
      desc << "cmh-eps(" << et << "," << em << "," << el << ")";
    } else if (type == "cmh") {
      for (const auto& nj : j.at("neighborhoods")) {
        out.specs.push_back(parse_neighborhood(nj));
      }
      desc << "cmh";
    } else {
      throw ConfigError("unknown sampler type: " + type);
    }
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("sampler: ") + e.what());
  }
  if (static_cast<int>(out.specs.size()) != model.block_count()) {
    throw ConfigError("sampler: one neighborhood spec per block required");
  }
  // An all-empty CMH sampler is the Gibbs kernel step for step, so it shares
  // the GS chain streams and reproduces the GS report exactly.
  bool all_empty = true;
  for (const auto& s : out.specs) {
    if (s.kind != NeighborhoodSpec::Kind::Empty) all_empty = false;
  }
  if (all_empty) out.tag = "gs";
  out.description = desc.str();
  return out;
}

ModelConfig parse_model(const json& j) {
  ModelConfig out;
  out.name = j.at("name").get<std::string>();
  if (out.name == "random-effects") {
    out.dataset_path = j.value("dataset", "");
    if (j.contains("hyper")) {
      const auto& h = j.at("hyper");
      out.hyper.m0 = h.value("m0", 0.0);
      out.hyper.s0 = h.value("s0", 1.0);
      out.hyper.a1 = h.value("a1", 30.0);
      out.hyper.b1 = h.value("b1", 30.0);
      out.hyper.a2 = h.value("a2", 30.0);
      out.hyper.b2 = h.value("b2", 30.0);
    }
    if (j.contains("generate")) {
      const auto& g = j.at("generate");
      out.generate = true;
      out.gen_K = g.value("K", 3);
      out.gen_m = g.value("m", 10);
      out.gen_m0 = g.value("m0", 0.0);
      out.gen_s0 = g.value("s0", 1.0);
      out.gen_a = g.value("a", 2.0);
      out.gen_b = g.value("b", 2.0);
      out.gen_seed = g.value("seed", 1ULL);
    }
  }
  return out;
}

ExperimentConfig parse_experiment(const json& j, std::uint64_t default_seed) {
  ExperimentConfig out;
  out.config_id = j.value("id", "experiment");
  out.model = parse_model(j.at("model"));
  out.n = j.value("n", 1000L);
  out.N = j.value("N", 1000);
  out.master_seed = j.value("seed", default_seed);
  out.accept_rate_run_length = j.value("accept_rate_run_length", 0L);
  out.max_attempts = j.value("max_attempts", 1000000);

  auto model = build_model(out.model);
  out.sampler = parse_sampler(j.at("sampler"), *model);

  if (j.contains("beta_ref")) {
    const auto& b = j.at("beta_ref");
    std::string type = b.value("type", "analytic");
    if (type == "analytic") {
      out.beta_ref.type = BetaRefConfig::Type::Analytic;
      out.beta_ref.value = b.value("value", 0.0);
    } else if (type == "reference-run") {
      out.beta_ref.type = BetaRefConfig::Type::ReferenceRun;
      out.beta_ref.length = b.value("length", 1000000L);
    } else {
      throw ConfigError("unknown beta_ref type: " + type);
    }
  } else if (out.model.name == "random-effects") {
    out.beta_ref.type = BetaRefConfig::Type::ReferenceRun;
  }

  if (j.contains("functional")) {
    const auto& fj = j.at("functional");
    out.functional = std::make_pair(fj.at("block").get<int>(),
                                    fj.at("coord").get<int>());
  }
  return out;
}

}  // namespace

ModelConfig parse_model_json(const std::string& json_text) {
  try {
    return parse_model(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model config: ") + e.what());
  }
}

SamplerConfig parse_sampler_json(const std::string& json_text,
                                 const Model& model) {
  try {
    return parse_sampler(json::parse(json_text), model);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sampler config: ") + e.what());
  }
}

HarnessConfig parse_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    HarnessConfig out;
    out.master_seed = j.value("master_seed", 0ULL);
    out.out_dir = j.value("out", ".");
    out.workers = j.value("workers", 1);
    for (const auto& ej : j.at("experiments")) {
      out.experiments.push_back(parse_experiment(ej, out.master_seed));
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

HarnessConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string report_csv_header() {
  return "config_id,model,sampler,n,N,seed,beta_ref,"
         "esjd_gs,se_esjd_gs,esjd_cmh,se_esjd_cmh,"
         "mse_gs,se_mse_gs,mse_cmh,se_mse_cmh,"
         "esjdr,se_esjdr,mser,se_mser,accept_rate";
}

std::string report_csv_row(const ExperimentConfig& config,
                           const ExperimentReport& report) {
  std::ostringstream row;
  row << config.config_id << ',' << config.model.name << ','
      << config.sampler.description << ',' << config.n << ',' << config.N << ','
      << config.master_seed << ',' << format_number(report.beta_ref) << ','
      << format_number(report.esjd_gs.value) << ','
      << format_number(report.esjd_gs.se) << ','
      << format_number(report.esjd_cmh.value) << ','
      << format_number(report.esjd_cmh.se) << ','
      << format_number(report.mse_gs.value) << ','
      << format_number(report.mse_gs.se) << ','
      << format_number(report.mse_cmh.value) << ','
      << format_number(report.mse_cmh.se) << ','
      << format_number(report.esjdr.value) << ','
      << format_number(report.esjdr.se) << ','
      << format_number(report.mser.value) << ','
      << format_number(report.mser.se) << ','
      << format_number(report.accept_rate);
  return row.str();
}

std::string report_to_json(const ExperimentConfig& config,
                           const ExperimentReport& report) {
  json j;
  j["config_id"] = config.config_id;
  j["model"] = config.model.name;
  j["sampler"] = config.sampler.description;
  j["n"] = config.n;
  j["N"] = config.N;
  j["seed"] = config.master_seed;
  j["beta_ref"] = report.beta_ref;
  j["esjd_gs"] = {{"value", report.esjd_gs.value}, {"se", report.esjd_gs.se}};
  j["esjd_cmh"] = {{"value", report.esjd_cmh.value}, {"se", report.esjd_cmh.se}};
  j["mse_gs"] = {{"value", report.mse_gs.value}, {"se", report.mse_gs.se}};
  j["mse_cmh"] = {{"value", report.mse_cmh.value}, {"se", report.mse_cmh.se}};
  j["esjdr"] = {{"value", report.esjdr.value}, {"se", report.esjdr.se}};
  j["mser"] = {{"value", report.mser.value}, {"se", report.mser.se}};
  j["accept_rate"] = report.accept_rate;
  return j.dump();
}

std::vector<ExperimentReport> run_config(const HarnessConfig& config) {
  std::vector<ExperimentReport> reports;
  reports.reserve(config.experiments.size());
  for (const auto& e : config.experiments) {
    reports.push_back(run_experiment(e, config.workers));
  }
  std::filesystem::create_directories(config.out_dir);
  std::ofstream out(std::filesystem::path(config.out_dir) / "report.csv");
  out << report_csv_header() << '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out << report_csv_row(config.experiments[i], reports[i]) << '\n';
  }
  return reports;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << "iteration,value\n";
  for (const auto& r : rows) {
    out << r.iteration << ',' << format_number(r.value) << '\n';
  }
}

void save_re_dataset(const std::string& csv_path, const std::string& meta_path,
                     const REDataset& data, std::uint64_t seed, double m0,
                     double s0, double a, double b) {
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + csv_path);
  out << "subject,replicate,y\n";
  out.precision(17);
  for (int i = 0; i < data.K; ++i) {
    for (int j = 0; j < data.m; ++j) {
      out << (i + 1) << ',' << (j + 1) << ',' << data.y[i][j] << '\n';
    }
  }
  json meta;
  meta["K"] = data.K;
  meta["m"] = data.m;
  meta["seed"] = seed;
  meta["generating_hyperparameters"] = {
      {"m0", m0}, {"s0", s0}, {"a", a}, {"b", b}};
  std::ofstream mout(meta_path);
  if (!mout) throw std::runtime_error("cannot write metadata file: " + meta_path);
  mout << meta.dump(2) << '\n';
}

REDataset load_re_dataset(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot read dataset file: " + csv_path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("dataset file is empty: " + csv_path);
  }
  REDataset data;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string subject, replicate, value;
    if (!std::getline(row, subject, ',') || !std::getline(row, replicate, ',') ||
        !std::getline(row, value)) {
      throw std::runtime_error("malformed dataset row: " + line);
    }
    std::size_t i = std::stoul(subject);
    if (i == 0) throw std::runtime_error("subject indices are 1-based");
    if (data.y.size() < i) data.y.resize(i);
    data.y[i - 1].push_back(std::stod(value));
  }
  finalize_re_dataset(data);
  return data;
}

}  // namespace cmh
