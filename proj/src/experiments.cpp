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

#include "cavitycool/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include <openssl/evp.h>

#include "cavitycool/cavity_model.hpp"
#include "cavitycool/dressed_states.hpp"
#include "cavitycool/errors.hpp"
#include "cavitycool/toy_model.hpp"

namespace cavitycool::experiments {

namespace {

namespace fs = std::filesystem;

enum class Kind { Number, Integer, String, OptionalNumber };

struct ParamSpec {
  const char* name;
  Json def;
  Kind kind = Kind::Number;
  // Lower bound for numbers; strict means value > lower.
  double lower = -std::numeric_limits<double>::infinity();
  bool strict = false;
};

struct AxisSpec {
  const char* name;
  Axis def;
  double lower = -std::numeric_limits<double>::infinity();
  bool strict = false;
};

struct ExperimentSpec {
  std::vector<ParamSpec> params;
  std::vector<AxisSpec> axes;
  std::size_t default_trajectories = 0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

Axis linspace(double lo, double hi, int points) {
  Axis a;
  a.values.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    a.values.push_back(i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1));
  }
  return a;
}

std::vector<ParamSpec> cavity_params(double t_end, int n_max) {
  return {
      {"C", 25.0, Kind::Number, 0.0, true},
      {"kappa_over_gamma", 2.0, Kind::Number, 0.0, true},
      {"gamma", nullptr, Kind::OptionalNumber, 0.0, true},
      {"kappa", nullptr, Kind::OptionalNumber, 0.0, true},
      {"omega", 0.03, Kind::Number, 0.0, false},
      {"n_max", n_max, Kind::Integer, 0.0, false},
      {"t_end", t_end, Kind::Number, 0.0, true},
      {"dt", 0.005, Kind::Number, 0.0, true},
      {"sample_every", 1.0, Kind::Number, 0.0, true},
      {"solver", "trajectories", Kind::String},
  };
}

const std::map<std::string, ExperimentSpec>& specs() {
  static const std::map<std::string, ExperimentSpec> table = [] {
    std::map<std::string, ExperimentSpec> m;
    m["toy-timeseries"] = {{{"omega", 0.05, Kind::Number, 0.0, false},
                            {"delta", 1.0, Kind::Number, 0.0, true},
                            {"gamma", 0.2, Kind::Number, 0.0, false},
                            {"initial_level", 1, Kind::Integer, 0.0, false},
                            {"t_end", 2000.0, Kind::Number, 0.0, true},
                            {"dt", 0.0, Kind::Number, 0.0, false},
                            {"sample_every", 1.0, Kind::Number, 0.0, true}},
                           {},
                           0};
    m["toy-fidelity-contour"] = {{{"delta", 1.0, Kind::Number, 0.0, true}},
                                 {{"omega", linspace(0.01, 0.5, 50), 0.0, false},
                                  {"gamma", linspace(0.01, 0.5, 50), 0.0, false}},
                                 0};
    m["toy-coolrate-contour"] = m["toy-fidelity-contour"];
    m["toy-pulsed"] = {{{"omega0", 0.05, Kind::Number, 0.0, false},
                        {"delta", 1.0, Kind::Number, 0.0, true},
                        {"gamma", 0.2, Kind::Number, 0.0, false},
                        {"multiplier", 3.0, Kind::Number, 0.0, true},
                        {"initial_level", 1, Kind::Integer, 0.0, false},
                        {"t_end", 600.0, Kind::Number, 0.0, true},
                        {"dt", 0.0, Kind::Number, 0.0, false},
                        {"sample_every", 1.0, Kind::Number, 0.0, true}},
                       {},
                       0};
    m["dressed-tables"] = {{{"g", 1.0, Kind::Number, 0.0, true},
                            {"w1", 50.0, Kind::Number},
                            {"w2", 1000.0, Kind::Number}},
                           {},
                           0};
    {
      ExperimentSpec s{cavity_params(4000.0, 3), {}, 500};
      s.params.erase(s.params.begin() + 1, s.params.begin() + 4);  // C fixed, kappa from axis
      s.axes = {{"kappa_minus_gamma", linspace(-0.2, 0.4, 25)}};
      m["cavity-kappa-sweep"] = s;
    }
    {
      ExperimentSpec s{cavity_params(4000.0, 3), {}, 500};
      s.params.erase(s.params.begin());                        // C from axis
      s.params.erase(s.params.begin() + 1, s.params.begin() + 3);  // no explicit rates
      Axis c;
      c.values = {20.0, 25.0, 50.0, 100.0};
      s.axes = {{"C", c, 0.0, true}};
      m["cavity-fidelity-vs-C"] = s;
    }
    {
      ExperimentSpec s{cavity_params(4000.0, 3), {}, 500};
      s.params[2].def = 0.1;  // gamma
      s.params[3].def = 0.2;  // kappa
      s.params.push_back({"omega0", 0.015, Kind::Number, 0.0, false});
      m["cavity-pulsed"] = s;
    }
    {
      ExperimentSpec s{cavity_params(2000.0, 1), {}, 2000};
      m["oracle-check"] = s;
    }
    return m;
  }();
  return table;
}

const ExperimentSpec& spec_for(const std::string& id) {
  const auto it = specs().find(id);
  if (it == specs().end()) {
    std::string known;
    for (const auto& [k, v] : specs()) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown experiment id '" + id + "' (expected one of: " + known + ")");
  }
  return it->second;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void check_bound(const std::string& key, double v, double lower, bool strict) {
  if (!std::isfinite(v)) throw ConfigError("'" + key + "' must be finite");
  if (strict ? !(v > lower) : !(v >= lower)) {
    throw ConfigError("'" + key + "' must be " + (strict ? "> " : ">= ") + fmt(lower) + ", got " +
                      fmt(v));
  }
}

Json parse_param(const ParamSpec& ps, const Json& v) {
  const std::string key = std::string("params.") + ps.name;
  switch (ps.kind) {
    case Kind::String:
      if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
      return v;
    case Kind::Integer: {
      if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
      const auto i = v.get<long long>();
      check_bound(key, static_cast<double>(i), ps.lower, ps.strict);
      return i;
    }
    case Kind::OptionalNumber:
      if (v.is_null()) return v;
      [[fallthrough]];
    case Kind::Number: {
      if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
      const double d = v.get<double>();
      check_bound(key, d, ps.lower, ps.strict);
      return d;
    }
  }
  return v;
}

Axis parse_axis(const std::string& name, const Json& v, const AxisSpec& as) {
  const std::string key = "axes." + name;
  if (!v.is_object()) throw ConfigError("'" + key + "' must be an object");
  Axis a;
  if (v.contains("values")) {
    for (const auto& [k, _] : v.items()) {
      if (k != "values") throw ConfigError("unknown key '" + key + "." + k + "'");
    }
    if (!v["values"].is_array()) throw ConfigError("'" + key + ".values' must be an array");
    for (const auto& x : v["values"]) {
      if (!x.is_number()) throw ConfigError("'" + key + ".values' must contain numbers");
      a.values.push_back(x.get<double>());
    }
  } else {
    for (const auto& [k, _] : v.items()) {
      if (k != "min" && k != "max" && k != "points") {
        throw ConfigError("unknown key '" + key + "." + k + "'");
      }
    }
    for (const char* k : {"min", "max", "points"}) {
      if (!v.contains(k)) throw ConfigError("'" + key + "' needs 'values' or min/max/points; '" + k + "' is missing");
    }
    if (!v["min"].is_number() || !v["max"].is_number()) {
      throw ConfigError("'" + key + ".min' and '" + key + ".max' must be numbers");
    }
    if (!v["points"].is_number_integer()) throw ConfigError("'" + key + ".points' must be an integer");
    const double lo = v["min"].get<double>();
    const double hi = v["max"].get<double>();
    const auto n = v["points"].get<long long>();
    if (n < 2) throw ConfigError("'" + key + ".points' must be >= 2, got " + std::to_string(n));
    if (n > 1000000) throw ConfigError("'" + key + ".points' is too large");
    if (!(lo < hi)) throw ConfigError("'" + key + "' needs min < max");
    a = linspace(lo, hi, static_cast<int>(n));
  }
  if (a.values.size() < 2) {
    throw ConfigError("'" + key + "' needs at least 2 points, got " + std::to_string(a.values.size()));
  }
  for (double x : a.values) check_bound(key, x, as.lower, as.strict);
  return a;
}

// ---------------------------------------------------------------------------
// toy experiments

toy::ToyState initial_level(const Json& params) {
  const auto level = params["initial_level"].get<int>();
  if (level > 3) throw ConfigError("'params.initial_level' must be 0..3");
  return toy::ToyState::in_level(level);
}

RunOutput toy_timeseries(const ExperimentConfig& cfg) {
  const Json& q = cfg.params;
  const toy::ToyParams p{q["omega"].get<double>(), q["delta"].get<double>(), q["gamma"].get<double>()};
  toy::IntegrationOptions o;
  o.t_end = q["t_end"].get<double>();
  o.dt = q["dt"].get<double>();
  o.sample_every = q["sample_every"].get<double>();
  const auto series = toy::integrate(p, initial_level(q), o);

  const double gh = toy::heating_rate(p);
  const double gc = toy::cooling_rate(p);
  std::vector<std::vector<double>> rows;
  std::vector<double> times, one_minus_f;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const auto& s = series.states[i];
    const double t = series.times[i];
    rows.push_back({t, s.p0, s.p1, s.p2, s.p3, 1.0 - s.p0,
                    1.0 - toy::transient_population(gc, gh, t)});
    times.push_back(t);
    one_minus_f.push_back(1.0 - s.p0);
  }
  RunOutput out;
  out.files.push_back({"toy_timeseries.csv",
                       csv({"t", "p0", "p1", "p2", "p3", "one_minus_f", "one_minus_f_rate_model"},
                           rows)});
  const double f_inf = toy::stationary_fidelity(p);
  out.summary["stationary_fidelity"] = f_inf;
  out.summary["final_one_minus_f"] = one_minus_f.back();
  out.summary["gamma_c"] = gc;
  out.summary["gamma_h"] = gh;
  try {
    const auto fit = toy::fit_decay_rate(times, one_minus_f, 1.0 - f_inf);
    out.summary["fitted_rate"] = fit.rate;
    out.summary["fit_points"] = fit.points;
  } catch (const DomainError&) {
    out.summary["fitted_rate"] = nullptr;
  }
  return out;
}

RunOutput toy_contour(const ExperimentConfig& cfg, bool cooling) {
  const double delta = cfg.params["delta"].get<double>();
  std::vector<std::vector<double>> rows;
  double best = kInf;
  double best_o = 0.0, best_g = 0.0;
  for (double om : cfg.axes.at("omega").values) {
    for (double ga : cfg.axes.at("gamma").values) {
      const toy::ToyParams p{om, delta, ga};
      if (cooling) {
        rows.push_back({om, ga, toy::cooling_rate(p), toy::cooling_rate_approx(p), toy::heating_rate(p)});
      } else {
        const double f = toy::stationary_fidelity(p);
        rows.push_back({om, ga, f, toy::stationary_fidelity_large_detuning(p)});
        if (f < best) {
          best = f;
          best_o = om;
          best_g = ga;
        }
      }
    }
  }
  RunOutput out;
  if (cooling) {
    out.files.push_back({"toy_coolrate_contour.csv",
                         csv({"omega", "gamma", "gamma_c", "gamma_c_approx", "gamma_h"}, rows)});
  } else {
    out.files.push_back({"toy_fidelity_contour.csv",
                         csv({"omega", "gamma", "fidelity", "fidelity_large_detuning"}, rows)});
    out.summary["min_fidelity"] = best;
    out.summary["min_at"] = {{"omega", best_o}, {"gamma", best_g}};
  }
  out.summary["points"] = rows.size();
  return out;
}

RunOutput toy_pulsed(const ExperimentConfig& cfg) {
  const Json& q = cfg.params;
  const double omega0 = q["omega0"].get<double>();
  const double delta = q["delta"].get<double>();
  const double gamma = q["gamma"].get<double>();
  const toy::ToyParams constant{omega0, delta, gamma};
  toy::PulseSchedule sched = toy::toy_pulse(omega0, delta, gamma);
  sched.multiplier = q["multiplier"].get<double>();

  toy::IntegrationOptions o;
  o.t_end = q["t_end"].get<double>();
  o.dt = q["dt"].get<double>();
  o.sample_every = q["sample_every"].get<double>();
  // A common step keeps the two series on the same grid.
  if (o.dt == 0.0) o.dt = toy::default_step(constant, std::max(omega0, sched.omega(0.0)));
  const auto s0 = initial_level(q);
  const auto flat = toy::integrate(constant, s0, o);
  toy::IntegrationOptions po = o;
  po.schedule = sched;
  const auto pulsed = toy::integrate(constant, s0, po);
  const double bound = 1.0 - toy::max_fidelity(delta, gamma);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < pulsed.times.size(); ++i) {
    rows.push_back({pulsed.times[i], sched.omega(pulsed.times[i]), 1.0 - flat.states[i].p0,
                    1.0 - pulsed.states[i].p0, bound});
  }
  RunOutput out;
  out.files.push_back(
      {"toy_pulsed.csv",
       csv({"t", "omega_t", "one_minus_f_constant", "one_minus_f_pulsed", "one_minus_f_bound"}, rows)});
  out.summary["gamma_c0"] = sched.gamma_c0;
  out.summary["final_one_minus_f_pulsed"] = 1.0 - pulsed.states.back().p0;
  out.summary["final_one_minus_f_constant"] = 1.0 - flat.states.back().p0;
  out.summary["constant_plateau"] = 1.0 - toy::stationary_fidelity(constant);
  out.summary["bound"] = bound;
  return out;
}

RunOutput dressed_tables(const ExperimentConfig& cfg) {
  const double g = cfg.params["g"].get<double>();
  const double w1 = cfg.params["w1"].get<double>();
  const double w2 = cfg.params["w2"].get<double>();
  RunOutput out;
  out.files.push_back({"dressed_tables.json", dressed::tables_json(g, w1, w2)});
  out.files.push_back({"dressed_tables.txt", dressed::tables_text(g, w1, w2)});
  out.summary["delta_min"] = dressed::delta_min(g);
  return out;
}

// ---------------------------------------------------------------------------
// cavity experiments

struct CavityRun {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> stderr_;
};

enum class Solver { Trajectories, MasterEquation };

Solver solver_of(const Json& q) {
  const auto s = q["solver"].get<std::string>();
  if (s == "trajectories") return Solver::Trajectories;
  if (s == "master-equation") return Solver::MasterEquation;
  throw ConfigError("'params.solver' must be 'trajectories' or 'master-equation', got '" + s + "'");
}

cavity::CavityParams rates_params(double gamma, double kappa, double omega, int n_max) {
  cavity::CavityParams p;
  p.g = 1.0;
  p.gamma0 = p.gamma1 = 0.5 * gamma;
  p.kappa = kappa;
  p.omega01 = p.omega02 = p.omega1l = omega;
  p.n_max = n_max;
  p.validate();
  return p;
}

cavity::CavityParams params_from(const Json& q) {
  const double omega = q["omega"].get<double>();
  const int n_max = q["n_max"].get<int>();
  const bool has_gamma = q.contains("gamma") && !q["gamma"].is_null();
  const bool has_kappa = q.contains("kappa") && !q["kappa"].is_null();
  if (has_gamma != has_kappa) {
    throw ConfigError("'params.gamma' and 'params.kappa' must be given together");
  }
  if (has_gamma) return rates_params(q["gamma"].get<double>(), q["kappa"].get<double>(), omega, n_max);
  return cavity::CavityParams::from_cooperativity(q["C"].get<double>(),
                                                  q["kappa_over_gamma"].get<double>(), omega, n_max);
}

cavity::EvolutionOptions evolution_from(const Json& q) {
  cavity::EvolutionOptions o;
  o.t_end = q["t_end"].get<double>();
  o.dt = q["dt"].get<double>();
  o.sample_every = q["sample_every"].get<double>();
  return o;
}

CavityRun simulate(const ExperimentConfig& cfg, const cavity::CavityParams& p,
                   const cavity::EvolutionOptions& o, Solver solver, std::uint64_t seed) {
  const core::HilbertSpace space = p.space();
  const auto lasers = cavity::LaserConfig::canonical(p.g);
  if (solver == Solver::MasterEquation) {
    core::Operator rho = core::Operator::Zero(space.dim(), space.dim());
    rho(space.index(0, 0, 0), space.index(0, 0, 0)) = 1.0;
    auto r = cavity::master_equation_evolve(rho, p, lasers, o);
    std::vector<double> zeros(r.fidelity.size(), 0.0);
    return {std::move(r.times), std::move(r.fidelity), std::move(zeros)};
  }
  auto r = cavity::ensemble_average(space.basis_state(0, 0, 0), p, lasers, o, cfg.trajectories,
                                    seed, cfg.threads);
  return {std::move(r.times), std::move(r.mean), std::move(r.stderr_)};
}

// Distinct, reproducible master seeds for the points of a grid.
std::uint64_t point_seed(std::uint64_t seed, std::size_t point) {
  return point == 0 ? seed : cavity::trajectory_seed(seed ^ 0xC0FFEEULL, point);
}

struct Peak {
  std::size_t index = 0;
  bool interior = false;
  double location = 0.0;
};

// Maximum with a parabolic refinement through its two neighbours.
Peak locate_peak(const std::vector<double>& x, const std::vector<double>& y) {
  Peak pk;
  pk.index = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  pk.location = x[pk.index];
  pk.interior = pk.index > 0 && pk.index + 1 < y.size();
  if (!pk.interior) return pk;
  const double x0 = x[pk.index - 1], x1 = x[pk.index], x2 = x[pk.index + 1];
  const double y0 = y[pk.index - 1], y1 = y[pk.index], y2 = y[pk.index + 1];
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (den != 0.0) pk.location = x1 - 0.5 * num / den;
  return pk;
}

RunOutput cavity_kappa_sweep(const ExperimentConfig& cfg) {
  const Json& q = cfg.params;
  const double c = q["C"].get<double>();
  const double omega = q["omega"].get<double>();
  const int n_max = q["n_max"].get<int>();
  const auto o = evolution_from(q);
  const Solver solver = solver_of(q);
  const auto& xs = cfg.axes.at("kappa_minus_gamma").values;

  std::vector<std::vector<double>> rows;
  std::vector<double> fid;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // Gamma (Gamma + x) = g^2 / C at g = 1.
    const double x = xs[i];
    const double gamma = 0.5 * (-x + std::sqrt(x * x + 4.0 / c));
    const double kappa = gamma + x;
    if (!(kappa > 0.0)) {
      throw ConfigError("'axes.kappa_minus_gamma' value " + fmt(x) + " gives kappa <= 0");
    }
    const auto p = rates_params(gamma, kappa, omega, n_max);
    const auto r = simulate(cfg, p, o, solver, point_seed(cfg.seed, i));
    const auto w = cavity::stationary_window(r.times, r.mean, r.stderr_);
    const auto a = cavity::analytic_full_model(p);
    rows.push_back({x, gamma, kappa, w.mean, w.stderr_, w.first_half, w.second_half, a.fidelity});
    fid.push_back(w.mean);
  }
  const Peak pk = locate_peak(xs, fid);
  RunOutput out;
  out.files.push_back({"cavity_kappa_sweep.csv",
                       csv({"kappa_minus_gamma", "gamma", "kappa", "fidelity", "stderr",
                            "first_half", "second_half", "analytic_fidelity"},
                           rows)});
  out.summary["peak_index"] = pk.index;
  out.summary["peak_interior"] = pk.interior;
  out.summary["peak_grid_value"] = xs[pk.index];
  out.summary["peak_location"] = pk.location;
  out.summary["peak_fidelity"] = fid[pk.index];
  return out;
}

std::string c_label(double c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

RunOutput cavity_fidelity_vs_c(const ExperimentConfig& cfg) {
  const Json& q = cfg.params;
  const double ratio = q["kappa_over_gamma"].get<double>();
  const double omega = q["omega"].get<double>();
  const int n_max = q["n_max"].get<int>();
  const auto o = evolution_from(q);
  const Solver solver = solver_of(q);
  const auto& cs = cfg.axes.at("C").values;

  std::vector<std::vector<double>> rows;
  std::vector<std::string> series_cols{"t"};
  std::vector<std::vector<double>> series;
  Json points = Json::array();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto p = cavity::CavityParams::from_cooperativity(cs[i], ratio, omega, n_max);
    const auto r = simulate(cfg, p, o, solver, point_seed(cfg.seed, i));
    const auto w = cavity::stationary_window(r.times, r.mean, r.stderr_);
    const auto a = cavity::analytic_full_model(p);
    rows.push_back({cs[i], p.gamma(), p.kappa, w.mean, w.stderr_, w.first_half, w.second_half,
                    a.fidelity, a.gamma_c});
    if (series.empty()) {
      for (double t : r.times) series.push_back({t});
    }
    for (std::size_t j = 0; j < r.times.size(); ++j) {
      series[j].push_back(r.mean[j]);
      series[j].push_back(r.stderr_[j]);
    }
    series_cols.push_back("fidelity_C" + c_label(cs[i]));
    series_cols.push_back("stderr_C" + c_label(cs[i]));
    points.push_back({{"C", cs[i]},
                      {"fidelity", w.mean},
                      {"stderr", w.stderr_},
                      {"settled", w.settled()},
                      {"analytic_fidelity", a.fidelity}});
  }
  RunOutput out;
  out.files.push_back({"cavity_fidelity_vs_C.csv",
                       csv({"C", "gamma", "kappa", "fidelity", "stderr", "first_half", "second_half",
                            "analytic_fidelity", "analytic_gamma_c"},
                           rows)});
  out.files.push_back({"cavity_fidelity_vs_C_series.csv", csv(series_cols, series)});
  out.summary["points"] = std::move(points);
  return out;
}

RunOutput cavity_pulsed(const ExperimentConfig& cfg) {
  const Json& q = cfg.params;
  const Solver solver = solver_of(q);
  const auto o = evolution_from(q);
  const auto p = params_from(q);
  auto pulsed_p = p;
  pulsed_p.omega01 = pulsed_p.omega02 = pulsed_p.omega1l = q["omega0"].get<double>();
  const auto sched = cavity::cavity_pulse(pulsed_p);
  auto po = o;
  po.schedule = sched;

  const auto flat = simulate(cfg, p, o, solver, point_seed(cfg.seed, 0));
  const auto pulsed = simulate(cfg, pulsed_p, po, solver, point_seed(cfg.seed, 1));
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < flat.times.size(); ++j) {
    const double t = flat.times[j];
    rows.push_back({t, sched.omega(t), flat.mean[j], flat.stderr_[j], pulsed.mean[j],
                    pulsed.stderr_[j]});
  }
  RunOutput out;
  out.files.push_back({"cavity_pulsed.csv",
                       csv({"t", "omega_t", "fidelity_constant", "stderr_constant",
                            "fidelity_pulsed", "stderr_pulsed"},
                           rows)});
  const auto wf = cavity::stationary_window(flat.times, flat.mean, flat.stderr_);
  const auto wp = cavity::stationary_window(pulsed.times, pulsed.mean, pulsed.stderr_);
  out.summary["gamma_c0"] = sched.gamma_c0;
  out.summary["window_fidelity_constant"] = wf.mean;
  out.summary["window_fidelity_pulsed"] = wp.mean;
  return out;
}

RunOutput oracle_check(const ExperimentConfig& cfg) {
  const Json& q = cfg.params;
  const auto p = params_from(q);
  const auto o = evolution_from(q);
  const auto me = simulate(cfg, p, o, Solver::MasterEquation, 0);
  const auto mc = simulate(cfg, p, o, Solver::Trajectories, cfg.seed);
  const double floor = 1.0 / static_cast<double>(cfg.trajectories);
  std::vector<std::vector<double>> rows;
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t j = 0; j < me.times.size(); ++j) {
    const double dev = mc.mean[j] - me.mean[j];
    const double tol = 3.0 * mc.stderr_[j] + floor;
    if (std::abs(dev) > tol) ++violations;
    worst = std::max(worst, std::abs(dev) / tol);
    rows.push_back({me.times[j], me.mean[j], mc.mean[j], mc.stderr_[j], dev, tol});
  }
  RunOutput out;
  out.files.push_back({"oracle_check.csv",
                       csv({"t", "oracle", "mean", "stderr", "deviation", "tolerance"}, rows)});
  out.summary["samples"] = rows.size();
  out.summary["violations"] = violations;
  out.summary["worst_ratio"] = worst;
  out.summary["pass"] = violations == 0;
  return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

bool non_negative_integer(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : specs()) v.push_back(k);
    return v;
  }();
  return ids;
}

bool has_axes(std::string_view experiment) {
  const auto it = specs().find(std::string(experiment));
  return it != specs().end() && !it->second.axes.empty();
}

ExperimentConfig parse_config(const Json& doc, const Overrides& overrides, bool sweep) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, _] : doc.items()) {
    static const char* known[] = {"experiment", "seed", "trajectories", "threads", "out", "params", "axes"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* s) { return k == s; }) ==
        std::end(known)) {
      throw ConfigError("unknown key '" + k + "'");
    }
  }
  if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
    throw ConfigError("'experiment' is required and must be a string");
  }
  ExperimentConfig cfg;
  cfg.experiment = doc["experiment"].get<std::string>();
  const ExperimentSpec& spec = spec_for(cfg.experiment);
  if (sweep && spec.axes.empty()) {
    throw ConfigError("experiment '" + cfg.experiment + "' has no grid axes; use 'run'");
  }

  if (doc.contains("seed")) {
    if (!non_negative_integer(doc["seed"])) throw ConfigError("'seed' must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  cfg.trajectories = spec.default_trajectories;
  if (doc.contains("trajectories")) {
    if (!non_negative_integer(doc["trajectories"]) || doc["trajectories"].get<std::uint64_t>() < 1) {
      throw ConfigError("'trajectories' must be an integer >= 1");
    }
    cfg.trajectories = doc["trajectories"].get<std::size_t>();
  }
  if (doc.contains("threads")) {
    if (!non_negative_integer(doc["threads"])) throw ConfigError("'threads' must be a non-negative integer");
    cfg.threads = doc["threads"].get<unsigned>();
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) throw ConfigError("'out' must be a string");
    cfg.out = doc["out"].get<std::string>();
  }

  const Json given = doc.contains("params") ? doc["params"] : Json::object();
  if (!given.is_object()) throw ConfigError("'params' must be an object");
  for (const auto& [k, _] : given.items()) {
    const bool ok = std::any_of(spec.params.begin(), spec.params.end(),
                                [&](const ParamSpec& ps) { return k == ps.name; });
    if (!ok) {
      throw ConfigError("unknown parameter 'params." + k + "' for experiment '" + cfg.experiment + "'");
    }
  }
  for (const auto& ps : spec.params) {
    cfg.params[ps.name] = parse_param(ps, given.contains(ps.name) ? given[ps.name] : ps.def);
  }
  if (cfg.params.contains("solver")) solver_of(cfg.params);
  if (cfg.params.contains("initial_level")) initial_level(cfg.params);

  const Json axes = doc.contains("axes") ? doc["axes"] : Json::object();
  if (!axes.is_object()) throw ConfigError("'axes' must be an object");
  for (const auto& [k, _] : axes.items()) {
    const bool ok = std::any_of(spec.axes.begin(), spec.axes.end(),
                                [&](const AxisSpec& as) { return k == as.name; });
    if (!ok) throw ConfigError("unknown axis 'axes." + k + "' for experiment '" + cfg.experiment + "'");
  }
  for (const auto& as : spec.axes) {
    cfg.axes[as.name] = axes.contains(as.name) ? parse_axis(as.name, axes[as.name], as) : as.def;
  }

  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.trajectories) {
    if (*overrides.trajectories < 1) throw ConfigError("'--trajectories' must be >= 1");
    cfg.trajectories = *overrides.trajectories;
  }
  if (overrides.threads) cfg.threads = *overrides.threads;
  if (overrides.out) cfg.out = *overrides.out;
  return cfg;
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["experiment"] = cfg.experiment;
  j["seed"] = cfg.seed;
  if (cfg.trajectories > 0) j["trajectories"] = cfg.trajectories;
  j["threads"] = cfg.threads;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  j["params"] = cfg.params;
  if (!cfg.axes.empty()) {
    Json axes = Json::object();
    for (const auto& [name, a] : cfg.axes) axes[name] = {{"values", a.values}};
    j["axes"] = std::move(axes);
  }
  return j;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  if (a.experiment != b.experiment || a.seed != b.seed || a.trajectories != b.trajectories ||
      a.threads != b.threads || a.out != b.out || a.params != b.params ||
      a.axes.size() != b.axes.size()) {
    return false;
  }
  for (const auto& [k, v] : a.axes) {
    const auto it = b.axes.find(k);
    if (it == b.axes.end() || it->second.values != v.values) return false;
  }
  return true;
}

RunOutput execute(const ExperimentConfig& cfg) {
  const std::string& id = cfg.experiment;
  if (id == "toy-timeseries") return toy_timeseries(cfg);
  if (id == "toy-fidelity-contour") return toy_contour(cfg, false);
  if (id == "toy-coolrate-contour") return toy_contour(cfg, true);
  if (id == "toy-pulsed") return toy_pulsed(cfg);
  if (id == "dressed-tables") return dressed_tables(cfg);
  if (id == "cavity-kappa-sweep") return cavity_kappa_sweep(cfg);
  if (id == "cavity-fidelity-vs-C") return cavity_fidelity_vs_c(cfg);
  if (id == "cavity-pulsed") return cavity_pulsed(cfg);
  if (id == "oracle-check") return oracle_check(cfg);
  spec_for(id);
  throw ConfigError("experiment '" + id + "' has no runner");
}

std::string resolve_output_dir(const ExperimentConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "cavitycool-out";
}

Json write_outputs(const ExperimentConfig& cfg, const RunOutput& out, double seconds) {
  const fs::path dir = resolve_output_dir(cfg);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  Json files = Json::array();
  for (const auto& f : out.files) {
    write_atomic(dir / f.name, f.content);
    files.push_back({{"name", f.name}, {"sha256", sha256_hex(f.content)}, {"bytes", f.content.size()}});
  }
  Json manifest;
  manifest["version"] = kVersion;
  manifest["experiment"] = cfg.experiment;
  manifest["config"] = config_to_json(cfg);
  manifest["duration_seconds"] = seconds;
  manifest["files"] = std::move(files);
  manifest["summary"] = out.summary;
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

Json run(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const RunOutput out = execute(cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return write_outputs(cfg, out, seconds);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string s;
  s.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 0xF];
  }
  return s;
}

std::string csv(const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
  std::string s = "# ";
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
  s += "\n";
  for (const auto& r : rows) {
    if (r.size() != columns.size()) throw std::logic_error("csv: row width mismatch");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) s += ",";
      s += format_number(r[i]);
    }
    s += "\n";
  }
  return s;
}

}  // namespace cavitycool::experiments
