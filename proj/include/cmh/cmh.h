/* C interface to the conditional Metropolis-Hastings / Gibbs sampler
 * library. All functions return CMH_OK on success; on failure a
 * thread-local message is available through cmh_last_error(). Strings
 * returned through char** out-parameters are owned by the caller and must
 * be released with cmh_string_free().
 */
#ifndef CMH_H
#define CMH_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cmh_status {
  CMH_OK = 0,
  CMH_ERROR_CONFIG = 1,  /* malformed or inconsistent configuration */
  CMH_ERROR_RUNTIME = 2, /* failure while running (IO, stuck proposal, ...) */
  CMH_ERROR_ARGUMENT = 3 /* null pointer or out-of-domain argument */
} cmh_status;

const char* cmh_version(void);

/* Message describing the most recent failure on the calling thread. */
const char* cmh_last_error(void);

void cmh_string_free(char* s);

/* --- experiment harness -------------------------------------------------
 * config_json is the experiment configuration document (see README for the
 * schema). Runs every experiment in the document and writes report.csv to
 * the configured output directory (out_dir_override, when non-NULL, takes
 * precedence). If report_json_out is non-NULL it receives a JSON array with
 * one result object per experiment. */
cmh_status cmh_run_config(const char* config_json, const char* out_dir_override,
                          char** report_json_out);

/* Long single-run GS estimate of the functional ("beta star").
 * config_json: {"model": {...}} with an optional "functional" override. */
cmh_status cmh_run_reference(const char* config_json, uint64_t seed,
                             long length, double* beta_star_out);

/* Single-chain trace of one coordinate over the window [start, end),
 * written as CSV (iteration,value) to csv_path.
 * config_json: {"model": {...}, "sampler": {...}}. */
cmh_status cmh_emit_trace(const char* config_json, uint64_t seed,
                          long run_length, long start, long end, int block,
                          int coord, const char* csv_path);

/* Simulate a balanced one-way random effects dataset and persist it as
 * dataset CSV (subject,replicate,y) plus a JSON metadata sidecar. */
cmh_status cmh_simulate_dataset(int K, int m, double m0, double s0, double a,
                                double b, uint64_t seed, const char* csv_path,
                                const char* meta_path);

/* --- geometric ergodicity bounds ---------------------------------------- */

/* Normal-Normal thresholds: c_star solves 2*Phi(c)-1 = (1-gamma)/2 and
 * q_star = min(1/2, 1-gamma). */
cmh_status cmh_bounds_normal_normal(double gamma, double* c_star,
                                    double* q_star);

/* Random effects neighborhood-size thresholds (theta sphere, mu interval,
 * lambda rectangle). */
cmh_status cmh_bounds_random_effects(int K, int m, double a1, double a2,
                                     double gamma, double* eps_theta,
                                     double* eps_mu, double* eps_lambda);

/* Sufficient condition for the CMH to inherit geometric ergodicity from a
 * GS drift rate gamma. *holds_out is set to 1 or 0. */
cmh_status cmh_theorem1_check(double gamma, double q_min, double q_max,
                              int* holds_out);

/* Acceptance-rate scan over (eps_theta, eps_mu, eps_lambda) triples for the
 * random effects model. triples_json: [[et,em,el], ...]. json_out receives
 * [{"eps":[...],"accept_rate":r}, ...]. */
cmh_status cmh_eps_accept_grid(const char* model_json, const char* triples_json,
                               long n, uint64_t seed, char** json_out);

/* --- single-chain stepping ----------------------------------------------
 * Opaque handle over one sampler chain. model_json / sampler_json are the
 * same fragments used inside the experiment configuration. */
typedef struct cmh_chain cmh_chain;

cmh_status cmh_chain_create(const char* model_json, const char* sampler_json,
                            uint64_t seed, cmh_chain** out);
void cmh_chain_destroy(cmh_chain* chain);

/* Total dimension of the flattened state, or -1 for NULL. */
int cmh_chain_state_dim(const cmh_chain* chain);

cmh_status cmh_chain_step(cmh_chain* chain, long steps);

/* Copies the flattened current state (blocks concatenated in order). */
cmh_status cmh_chain_get_state(const cmh_chain* chain, double* buffer,
                               int buffer_len);

/* Fraction of steps accepted so far (1.0 before any step, and always 1.0
 * for a GS chain). */
cmh_status cmh_chain_accept_rate(const cmh_chain* chain, double* rate_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CMH_H */
