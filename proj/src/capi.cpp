// Copyright 2026 The cavitycool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cavitycool/cavitycool.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "cavitycool/cavity_model.hpp"
#include "cavitycool/dressed_states.hpp"
#include "cavitycool/errors.hpp"
#include "cavitycool/experiments.hpp"
#include "cavitycool/toy_model.hpp"

struct cc_cavity {
  cavitycool::cavity::CavityParams params;
  cavitycool::cavity::LaserConfig lasers;
};

struct cc_series {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> stderr_;
};

namespace {

thread_local std::string g_last_error;

cc_status status_of(cavitycool::ErrorKind k) {
  using cavitycool::ErrorKind;
  switch (k) {
    case ErrorKind::Domain: return CC_ERR_DOMAIN;
    case ErrorKind::Integration: return CC_ERR_INTEGRATION;
    case ErrorKind::Degenerate: return CC_ERR_DEGENERATE;
    case ErrorKind::NotApplicable: return CC_ERR_NOT_APPLICABLE;
    case ErrorKind::Config: return CC_ERR_CONFIG;
    case ErrorKind::Io: return CC_ERR_IO;
  }
  return CC_ERR_INTERNAL;
}

template <class F>
cc_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CC_OK;
  } catch (const cavitycool::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return CC_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CC_ERR_INTERNAL;
  }
}

cc_status invalid(const char* what) {
  g_last_error = what;
  return CC_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

cavitycool::cavity::EvolutionOptions options(const cc_cavity* c, double t_end, double dt,
                                             double sample_every, int pulsed) {
  cavitycool::cavity::EvolutionOptions o;
  o.t_end = t_end;
  o.dt = dt;
  o.sample_every = sample_every;
  if (pulsed) o.schedule = cavitycool::cavity::cavity_pulse(c->params);
  return o;
}

}  // namespace

extern "C" {

const char* cc_last_error(void) { return g_last_error.c_str(); }

const char* cc_version(void) { return cavitycool::experiments::kVersion; }

void cc_string_free(char* s) { std::free(s); }

cc_status cc_toy_stationary_fidelity(double omega, double delta, double gamma, double* out) {
  if (out == nullptr) return invalid("out is NULL");
  return guarded([&] { *out = cavitycool::toy::stationary_fidelity({omega, delta, gamma}); });
}

cc_status cc_toy_stationary_solve(double omega, double delta, double gamma, double* out) {
  if (out == nullptr) return invalid("out is NULL");
  return guarded([&] {
    const auto a = cavitycool::toy::stationary_solve({omega, delta, gamma}).to_array();
    std::memcpy(out, a.data(), sizeof(double) * a.size());
  });
}

cc_status cc_toy_rates(double omega, double delta, double gamma, double* gamma_c, double* gamma_h) {
  if (gamma_c == nullptr || gamma_h == nullptr) return invalid("output pointer is NULL");
  return guarded([&] {
    const cavitycool::toy::ToyParams p{omega, delta, gamma};
    const double c = cavitycool::toy::cooling_rate(p);
    *gamma_h = cavitycool::toy::heating_rate(p);
    *gamma_c = c;
  });
}

cc_status cc_toy_max_fidelity(double delta, double gamma, double* out) {
  if (out == nullptr) return invalid("out is NULL");
  return guarded([&] { *out = cavitycool::toy::max_fidelity(delta, gamma); });
}

cc_status cc_tables_text(double g, double w1, double w2, char** out) {
  if (out == nullptr) return invalid("out is NULL");
  return guarded([&] { *out = dup_string(cavitycool::dressed::tables_text(g, w1, w2)); });
}

cc_status cc_tables_json(double g, double w1, double w2, char** out) {
  if (out == nullptr) return invalid("out is NULL");
  return guarded([&] { *out = dup_string(cavitycool::dressed::tables_json(g, w1, w2)); });
}

cc_status cc_cavity_create(const cc_cavity_params* params, double d1, double d2, double d3,
                           cc_cavity** out) {
  if (params == nullptr || out == nullptr) return invalid("argument is NULL");
  return guarded([&] {
    cavitycool::cavity::CavityParams p;
    p.g = params->g;
    p.gamma0 = params->gamma0;
    p.gamma1 = params->gamma1;
    p.kappa = params->kappa;
    p.omega01 = params->omega01;
    p.omega02 = params->omega02;
    p.omega1l = params->omega1l;
    p.n_max = params->n_max;
    p.validate();
    *out = new cc_cavity{p, {d1, d2, d3}};
  });
}

cc_status cc_cavity_create_canonical(double cooperativity, double kappa_over_gamma, double omega,
                                     int n_max, cc_cavity** out) {
  if (out == nullptr) return invalid("out is NULL");
  return guarded([&] {
    const auto p = cavitycool::cavity::CavityParams::from_cooperativity(cooperativity,
                                                                        kappa_over_gamma, omega, n_max);
    *out = new cc_cavity{p, cavitycool::cavity::LaserConfig::canonical(p.g)};
  });
}

void cc_cavity_destroy(cc_cavity* c) { delete c; }

cc_status cc_cavity_params_get(const cc_cavity* c, cc_cavity_params* out) {
  if (c == nullptr || out == nullptr) return invalid("argument is NULL");
  const auto& p = c->params;
  *out = cc_cavity_params{p.g, p.gamma0, p.gamma1, p.kappa, p.omega01, p.omega02, p.omega1l, p.n_max};
  g_last_error.clear();
  return CC_OK;
}

cc_status cc_cavity_analytic(const cc_cavity* c, double* gamma_c, double* fidelity) {
  if (c == nullptr || gamma_c == nullptr || fidelity == nullptr) return invalid("argument is NULL");
  return guarded([&] {
    const auto a = cavitycool::cavity::analytic_full_model(c->params);
    *gamma_c = a.gamma_c;
    *fidelity = a.fidelity;
  });
}

cc_status cc_cavity_ensemble(const cc_cavity* c, double t_end, double dt, double sample_every,
                             size_t n_traj, uint64_t seed, unsigned threads, int pulsed,
                             cc_series** out) {
  if (c == nullptr || out == nullptr) return invalid("argument is NULL");
  return guarded([&] {
    const auto space = c->params.space();
    auto r = cavitycool::cavity::ensemble_average(space.basis_state(0, 0, 0), c->params, c->lasers,
                                                  options(c, t_end, dt, sample_every, pulsed),
                                                  n_traj, seed, threads);
    *out = new cc_series{std::move(r.times), std::move(r.mean), std::move(r.stderr_)};
  });
}

cc_status cc_cavity_master(const cc_cavity* c, double t_end, double dt, double sample_every,
                           int pulsed, cc_series** out) {
  if (c == nullptr || out == nullptr) return invalid("argument is NULL");
  return guarded([&] {
    const auto space = c->params.space();
    cavitycool::core::Operator rho = cavitycool::core::Operator::Zero(space.dim(), space.dim());
    rho(0, 0) = 1.0;
    auto r = cavitycool::cavity::master_equation_evolve(rho, c->params, c->lasers,
                                                        options(c, t_end, dt, sample_every, pulsed));
    std::vector<double> zeros(r.times.size(), 0.0);
    *out = new cc_series{std::move(r.times), std::move(r.fidelity), std::move(zeros)};
  });
}

size_t cc_series_length(const cc_series* s) { return s == nullptr ? 0 : s->times.size(); }

cc_status cc_series_get(const cc_series* s, size_t i, double* t, double* value, double* stderr_out) {
  if (s == nullptr || t == nullptr || value == nullptr) return invalid("argument is NULL");
  if (i >= s->times.size()) return invalid("index out of range");
  *t = s->times[i];
  *value = s->values[i];
  if (stderr_out != nullptr) *stderr_out = s->stderr_[i];
  g_last_error.clear();
  return CC_OK;
}

void cc_series_destroy(cc_series* s) { delete s; }

cc_status cc_experiment_run(const char* config_json, const char* overrides_json, int sweep,
                            char** manifest_json) {
  if (config_json == nullptr || manifest_json == nullptr) return invalid("argument is NULL");
  return guarded([&] {
    namespace ex = cavitycool::experiments;
    const auto doc = ex::Json::parse(config_json);
    ex::Overrides ov;
    if (overrides_json != nullptr) {
      const auto o = ex::Json::parse(overrides_json);
      if (!o.is_object()) throw cavitycool::ConfigError("overrides must be a JSON object");
      for (const auto& [k, v] : o.items()) {
        if (k == "seed" && v.is_number_unsigned()) {
          ov.seed = v.get<std::uint64_t>();
        } else if (k == "trajectories" && v.is_number_unsigned()) {
          ov.trajectories = v.get<std::size_t>();
        } else if (k == "threads" && v.is_number_unsigned()) {
          ov.threads = v.get<unsigned>();
        } else if (k == "out" && v.is_string()) {
          ov.out = v.get<std::string>();
        } else {
          throw cavitycool::ConfigError("invalid override '" + k + "'");
        }
      }
    }
    const auto cfg = ex::parse_config(doc, ov, sweep != 0);
    *manifest_json = dup_string(ex::run(cfg).dump(2));
  });
}

}  // extern "C"
