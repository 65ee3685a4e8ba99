/* Copyright 2026 The cavitycool Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CAVITYCOOL_CAVITYCOOL_H_
#define CAVITYCOOL_CAVITYCOOL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CC_API __declspec(dllexport)
#else
#define CC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returns a status; on failure cc_last_error() describes it. */
typedef enum cc_status {
  CC_OK = 0,
  CC_ERR_DOMAIN = 1,
  CC_ERR_INTEGRATION = 2,
  CC_ERR_DEGENERATE = 3,
  CC_ERR_NOT_APPLICABLE = 4,
  CC_ERR_CONFIG = 5,
  CC_ERR_IO = 6,
  CC_ERR_INVALID_ARGUMENT = 7,
  CC_ERR_INTERNAL = 8
} cc_status;

/* Message of the last failure on the calling thread; "" after success. */
CC_API const char* cc_last_error(void);

CC_API const char* cc_version(void);

/* Strings returned through char** are owned by the caller. */
CC_API void cc_string_free(char* s);

/* ---- toy model (frequencies in one common unit) ---- */

CC_API cc_status cc_toy_stationary_fidelity(double omega, double delta, double gamma, double* out);

/* out[7] = p0, p1, p2, p3, k02, k13, l02 */
CC_API cc_status cc_toy_stationary_solve(double omega, double delta, double gamma, double* out);

CC_API cc_status cc_toy_rates(double omega, double delta, double gamma, double* gamma_c,
                              double* gamma_h);

CC_API cc_status cc_toy_max_fidelity(double delta, double gamma, double* out);

/* ---- dressed states ---- */

CC_API cc_status cc_tables_text(double g, double w1, double w2, char** out);
CC_API cc_status cc_tables_json(double g, double w1, double w2, char** out);

/* ---- cavity model ---- */

typedef struct cc_cavity_params {
  double g;
  double gamma0;
  double gamma1;
  double kappa;
  double omega01;
  double omega02;
  double omega1l;
  int n_max;
} cc_cavity_params;

typedef struct cc_cavity cc_cavity;
typedef struct cc_series cc_series;

/* Laser detunings d1, d2, d3 relative to the rotating frame. */
CC_API cc_status cc_cavity_create(const cc_cavity_params* params, double d1, double d2, double d3,
                                  cc_cavity** out);

/* g = 1, kappa = ratio * Gamma, equal branching, canonical detunings. */
CC_API cc_status cc_cavity_create_canonical(double cooperativity, double kappa_over_gamma,
                                            double omega, int n_max, cc_cavity** out);

CC_API void cc_cavity_destroy(cc_cavity* c);

CC_API cc_status cc_cavity_params_get(const cc_cavity* c, cc_cavity_params* out);

CC_API cc_status cc_cavity_analytic(const cc_cavity* c, double* gamma_c, double* fidelity);

/* Fidelity of |+,0> starting from |00,0>. dt or sample_every of 0 select the
 * defaults (0.005/g, 1/g); threads 0 uses every core; pulsed != 0 applies
 * the cavity pulse schedule. The result does not depend on `threads`. */
CC_API cc_status cc_cavity_ensemble(const cc_cavity* c, double t_end, double dt,
                                    double sample_every, size_t n_traj, uint64_t seed,
                                    unsigned threads, int pulsed, cc_series** out);

CC_API cc_status cc_cavity_master(const cc_cavity* c, double t_end, double dt,
                                  double sample_every, int pulsed, cc_series** out);

CC_API size_t cc_series_length(const cc_series* s);

/* stderr_out may be NULL; it is 0 for master-equation series. */
CC_API cc_status cc_series_get(const cc_series* s, size_t i, double* t, double* value,
                               double* stderr_out);

CC_API void cc_series_destroy(cc_series* s);

/* ---- experiments ---- */

/* Runs an experiment config (JSON text). overrides_json may be NULL or an
 * object with any of "seed", "trajectories", "threads", "out". sweep != 0
 * rejects experiments without grid axes. The manifest is returned as JSON. */
CC_API cc_status cc_experiment_run(const char* config_json, const char* overrides_json, int sweep,
                                   char** manifest_json);

#ifdef __cplusplus
}
#endif

#endif /* CAVITYCOOL_CAVITYCOOL_H_ */
