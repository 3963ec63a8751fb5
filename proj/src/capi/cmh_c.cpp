#include "cmh/cmh.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "core/ergodicity.hpp"
#include "core/harness.hpp"

namespace {

thread_local std::string g_last_error;

cmh_status fail(cmh_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Maps C++ exceptions onto status codes; ConfigError stays distinguishable
// so the CLI can report usage errors.
template <typename Fn>
cmh_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const cmh::ConfigError& e) {
    return fail(CMH_ERROR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CMH_ERROR_CONFIG, e.what());
  } catch (const std::domain_error& e) {
    return fail(CMH_ERROR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(CMH_ERROR_RUNTIME, e.what());
  } catch (...) {
    return fail(CMH_ERROR_RUNTIME, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cmh_status require(bool ok, const char* what) {
  return ok ? CMH_OK : fail(CMH_ERROR_ARGUMENT, what);
}

}  // namespace

struct cmh_chain {
  std::unique_ptr<cmh::Model> model;
  cmh::SamplerConfig sampler;
  cmh::ScanProbabilities scan;
  cmh::StateVector state;
  std::uint64_t seed = 0;
  std::uint64_t step_index = 0;
  long accepted = 0;
  long stepped = 0;

  cmh_chain(std::unique_ptr<cmh::Model> m, cmh::SamplerConfig s,
            std::uint64_t seed_)
      : model(std::move(m)),
        sampler(std::move(s)),
        scan(model->scan_probabilities()),
        state(model->initial_state()),
        seed(seed_) {}
};

extern "C" {

const char* cmh_version(void) { return "1.0.0"; }

const char* cmh_last_error(void) { return g_last_error.c_str(); }

void cmh_string_free(char* s) { delete[] s; }

cmh_status cmh_run_config(const char* config_json, const char* out_dir_override,
                          char** report_json_out) {
  if (auto st = require(config_json != nullptr, "config_json is NULL");
      st != CMH_OK)
    return st;
  return guarded([&]() {
    auto config = cmh::parse_config_json(config_json);
    if (out_dir_override != nullptr) config.out_dir = out_dir_override;
    auto reports = cmh::run_config(config);
    if (report_json_out != nullptr) {
      nlohmann::json arr = nlohmann::json::array();
      for (std::size_t i = 0; i < reports.size(); ++i) {
        arr.push_back(nlohmann::json::parse(
            cmh::report_to_json(config.experiments[i], reports[i])));
      }
      *report_json_out = duplicate(arr.dump());
      if (*report_json_out == nullptr) {
        return fail(CMH_ERROR_RUNTIME, "out of memory");
      }
    }
    return CMH_OK;
  });
}

cmh_status cmh_run_reference(const char* config_json, uint64_t seed,
                             long length, double* beta_star_out) {
  if (auto st = require(config_json != nullptr && beta_star_out != nullptr,
                        "NULL argument");
      st != CMH_OK)
    return st;
  return guarded([&]() {
    auto j = nlohmann::json::parse(config_json, nullptr, false);
    if (j.is_discarded() || !j.contains("model")) {
      return fail(CMH_ERROR_CONFIG, "expected {\"model\": {...}}");
    }
    auto model_config = cmh::parse_model_json(j.at("model").dump());
    std::optional<std::pair<int, int>> functional;
    if (j.contains("functional")) {
      functional = std::make_pair(j["functional"].at("block").get<int>(),
                                  j["functional"].at("coord").get<int>());
    }
    *beta_star_out = cmh::run_reference(model_config, seed, length, functional);
    return CMH_OK;
  });
}

cmh_status cmh_emit_trace(const char* config_json, uint64_t seed,
                          long run_length, long start, long end, int block,
                          int coord, const char* csv_path) {
  if (auto st = require(config_json != nullptr && csv_path != nullptr,
                        "NULL argument");
      st != CMH_OK)
    return st;
  return guarded([&]() {
    auto j = nlohmann::json::parse(config_json, nullptr, false);
    if (j.is_discarded() || !j.contains("model") || !j.contains("sampler")) {
      return fail(CMH_ERROR_CONFIG,
                  "expected {\"model\": {...}, \"sampler\": {...}}");
    }
    auto model_config = cmh::parse_model_json(j.at("model").dump());
    auto model = cmh::build_model(model_config);
    auto sampler = cmh::parse_sampler_json(j.at("sampler").dump(), *model);
    cmh::TraceRequest req{run_length, start, end, block, coord};
    auto rows = cmh::emit_trace(model_config, sampler, seed, req);
    cmh::write_trace_csv(csv_path, rows);
    return CMH_OK;
  });
}

cmh_status cmh_simulate_dataset(int K, int m, double m0, double s0, double a,
                                double b, uint64_t seed, const char* csv_path,
                                const char* meta_path) {
  if (auto st = require(csv_path != nullptr && meta_path != nullptr,
                        "NULL argument");
      st != CMH_OK)
    return st;
  return guarded([&]() {
    auto data = cmh::simulate_re_data(K, m, m0, s0, a, b, seed);
    cmh::save_re_dataset(csv_path, meta_path, data, seed, m0, s0, a, b);
    return CMH_OK;
  });
}

cmh_status cmh_bounds_normal_normal(double gamma, double* c_star,
                                    double* q_star) {
  if (auto st = require(c_star != nullptr && q_star != nullptr, "NULL argument");
      st != CMH_OK)
    return st;
  return guarded([&]() {
    *c_star = cmh::solve_cmh_c_threshold(gamma);
    *q_star = std::min(0.5, 1.0 - gamma);
    return CMH_OK;
  });
}

cmh_status cmh_bounds_random_effects(int K, int m, double a1, double a2,
                                     double gamma, double* eps_theta,
                                     double* eps_mu, double* eps_lambda) {
  if (auto st = require(eps_theta != nullptr && eps_mu != nullptr &&
                            eps_lambda != nullptr,
                        "NULL argument");
      st != CMH_OK)
    return st;
  return guarded([&]() {
    auto t = cmh::solve_re_thresholds(K, m, a1, a2, gamma);
    *eps_theta = t.eps_theta;
    *eps_mu = t.eps_mu;
    *eps_lambda = t.eps_lambda;
    return CMH_OK;
  });
}

cmh_status cmh_theorem1_check(double gamma, double q_min, double q_max,
                              int* holds_out) {
  if (auto st = require(holds_out != nullptr, "NULL argument"); st != CMH_OK)
    return st;
  return guarded([&]() {
    *holds_out = cmh::theorem1_check({gamma, q_min, q_max}) ? 1 : 0;
    return CMH_OK;
  });
}

cmh_status cmh_eps_accept_grid(const char* model_json, const char* triples_json,
                               long n, uint64_t seed, char** json_out) {
  if (auto st = require(model_json != nullptr && triples_json != nullptr &&
                            json_out != nullptr,
                        "NULL argument");
      st != CMH_OK)
    return st;
  return guarded([&]() {
    auto model_config = cmh::parse_model_json(model_json);
    auto tj = nlohmann::json::parse(triples_json, nullptr, false);
    if (tj.is_discarded() || !tj.is_array()) {
      return fail(CMH_ERROR_CONFIG, "triples_json must be [[et,em,el], ...]");
    }
    std::vector<std::array<double, 3>> triples;
    for (const auto& t : tj) {
      if (!t.is_array() || t.size() != 3) {
        return fail(CMH_ERROR_CONFIG, "each triple must have three entries");
      }
      triples.push_back({t[0].get<double>(), t[1].get<double>(),
                         t[2].get<double>()});
    }
    auto entries = cmh::eps_acceptance_grid(model_config, triples, n, seed);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
      arr.push_back({{"eps", {e.eps[0], e.eps[1], e.eps[2]}},
                     {"accept_rate", e.accept_rate}});
    }
    *json_out = duplicate(arr.dump());
    if (*json_out == nullptr) return fail(CMH_ERROR_RUNTIME, "out of memory");
    return CMH_OK;
  });
}

cmh_status cmh_chain_create(const char* model_json, const char* sampler_json,
                            uint64_t seed, cmh_chain** out) {
  if (auto st = require(model_json != nullptr && sampler_json != nullptr &&
                            out != nullptr,
                        "NULL argument");
      st != CMH_OK)
    return st;
  return guarded([&]() {
    auto model_config = cmh::parse_model_json(model_json);
    auto model = cmh::build_model(model_config);
    auto sampler = cmh::parse_sampler_json(sampler_json, *model);
    *out = new cmh_chain(std::move(model), std::move(sampler), seed);
    return CMH_OK;
  });
}

void cmh_chain_destroy(cmh_chain* chain) { delete chain; }

int cmh_chain_state_dim(const cmh_chain* chain) {
  if (chain == nullptr) return -1;
  return chain->state.total_dim();
}

cmh_status cmh_chain_step(cmh_chain* chain, long steps) {
  if (auto st = require(chain != nullptr && steps >= 0, "invalid chain/steps");
      st != CMH_OK)
    return st;
  return guarded([&]() {
    for (long s = 0; s < steps; ++s) {
      auto rng = cmh::step_stream(chain->seed, ++chain->step_index);
      cmh::KernelStepRecord rec;
      if (chain->sampler.type == cmh::SamplerType::GS) {
        rec = cmh::gibbs_step_inplace(chain->state, *chain->model, chain->scan,
                                      rng);
      } else {
        rec = cmh::cmh_step_inplace(chain->state, *chain->model, chain->scan,
                                    chain->sampler.specs, rng);
      }
      ++chain->stepped;
      if (rec.accepted) ++chain->accepted;
    }
    return CMH_OK;
  });
}

cmh_status cmh_chain_get_state(const cmh_chain* chain, double* buffer,
                               int buffer_len) {
  if (auto st = require(chain != nullptr && buffer != nullptr, "NULL argument");
      st != CMH_OK)
    return st;
  if (buffer_len < chain->state.total_dim()) {
    return fail(CMH_ERROR_ARGUMENT, "buffer too small");
  }
  int k = 0;
  for (const auto& block : chain->state.blocks) {
    for (double v : block) buffer[k++] = v;
  }
  return CMH_OK;
}

cmh_status cmh_chain_accept_rate(const cmh_chain* chain, double* rate_out) {
  if (auto st = require(chain != nullptr && rate_out != nullptr,
                        "NULL argument");
      st != CMH_OK)
    return st;
  *rate_out = chain->stepped == 0
                  ? 1.0
                  : static_cast<double>(chain->accepted) /
                        static_cast<double>(chain->stepped);
  return CMH_OK;
}

}  // extern "C"
