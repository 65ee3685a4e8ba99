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

#include "cavitycool/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cavitycool/errors.hpp"

namespace cavitycool::toy {

namespace {

ToyState axpy(const ToyState& y, double a, const ToyState& x) {
  return ToyState{y.p0 + a * x.p0,   y.p1 + a * x.p1,   y.p2 + a * x.p2,  y.p3 + a * x.p3,
                  y.k02 + a * x.k02, y.k13 + a * x.k13, y.l02 + a * x.l02};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void ToyParams::validate() const {
  if (!(delta > 0.0)) throw DomainError("toy model: detuning must be > 0, got " + fmt(delta));
  if (!(omega >= 0.0)) throw DomainError("toy model: Rabi frequency must be >= 0, got " + fmt(omega));
  if (!(gamma >= 0.0)) throw DomainError("toy model: decay rate must be >= 0, got " + fmt(gamma));
}

ToyState ToyState::in_level(int level) {
  ToyState s;
  switch (level) {
    case 0: s.p0 = 1.0; break;
    case 1: s.p1 = 1.0; break;
    case 2: s.p2 = 1.0; break;
    case 3: s.p3 = 1.0; break;
    default: throw DomainError("toy model level must be 0..3, got " + std::to_string(level));
  }
  return s;
}

ToyState ToyState::from_array(const std::array<double, 7>& v) {
  return ToyState{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

std::array<double, 7> ToyState::to_array() const { return {p0, p1, p2, p3, k02, k13, l02}; }

ToyState rate_rhs(const ToyState& s, const ToyParams& p) {
  const double om = p.omega;
  const double g = p.gamma;
  const double d = p.delta;
  const double feed = 0.5 * g * (s.p2 + s.p3);
  ToyState r;
  r.p0 = -0.5 * om * s.k02 + feed;
  r.p1 = -0.5 * om * s.k13 + feed;
  r.p2 = 0.5 * om * s.k02 - g * s.p2;
  r.p3 = 0.5 * om * s.k13 - g * s.p3;
  r.k02 = om * (s.p0 - s.p2) + d * s.l02 - 0.5 * g * s.k02;
  r.k13 = om * (s.p1 - s.p3) - 0.5 * g * s.k13;
  r.l02 = -d * s.k02 - 0.5 * g * s.l02;
  return r;
}

double PulseSchedule::omega(double t) const {
  const double x = 1.0 + gamma_c0 * t;
  return multiplier * omega0 / (x * x);
}

double pulse_omega(double t, const PulseSchedule& sched) {
  if (t < 0.0) throw DomainError("pulse_omega: t must be >= 0, got " + fmt(t));
  return sched.omega(t);
}

PulseSchedule toy_pulse(double omega0, double delta, double gamma) {
  const ToyParams p{omega0, delta, gamma};
  p.validate();
  return PulseSchedule{omega0, cooling_rate_approx(p), 3.0};
}

double default_step(const ToyParams& p, double omega_at_zero) {
  return 0.02 / std::max({p.delta, p.gamma, omega_at_zero});
}

double max_step(const ToyParams& p, double omega_at_zero) {
  return 0.05 / std::max({p.delta, p.gamma, omega_at_zero});
}

ToySeries integrate(const ToyParams& p, const ToyState& s0, const IntegrationOptions& opts) {
  p.validate();
  if (!(opts.t_end > 0.0)) throw DomainError("integrate: t_end must be > 0, got " + fmt(opts.t_end));
  const double omega0 = opts.schedule ? opts.schedule->omega(0.0) : p.omega;
  const double dt_req = opts.dt > 0.0 ? opts.dt : default_step(p, omega0);
  const double dt_max = max_step(p, omega0);
  if (dt_req > dt_max * (1.0 + 1e-12)) {
    throw IntegrationError("integrate: step " + fmt(dt_req) + " exceeds stability bound " +
                           fmt(dt_max) + " = 0.05/max(delta, gamma, omega(0))");
  }

  // Steps are laid out so that every sample time is hit exactly.
  const double period = opts.sample_every > 0.0 ? opts.sample_every : dt_req;
  const double n_samples_f = opts.t_end / period;
  const auto n_samples = static_cast<long long>(std::llround(n_samples_f));
  if (n_samples < 1 || std::abs(n_samples_f - static_cast<double>(n_samples)) > 1e-9 * n_samples_f) {
    throw DomainError("integrate: t_end " + fmt(opts.t_end) +
                      " is not a multiple of the sampling period " + fmt(period));
  }
  const auto sub = static_cast<long long>(std::ceil(period / dt_req - 1e-9));
  const double h = period / static_cast<double>(sub);

  auto omega_at = [&](double t) { return opts.schedule ? opts.schedule->omega(t) : p.omega; };
  ToyParams stage = p;
  auto f = [&](double t, const ToyState& s) {
    stage.omega = omega_at(t);
    return rate_rhs(s, stage);
  };

  const double norm0 = s0.total_population();
  ToySeries out;
  out.times.reserve(static_cast<std::size_t>(n_samples) + 1);
  out.states.reserve(static_cast<std::size_t>(n_samples) + 1);
  out.times.push_back(0.0);
  out.states.push_back(s0);

  ToyState s = s0;
  const long long total_steps = n_samples * sub;
  for (long long step = 0; step < total_steps; ++step) {
    const double t = static_cast<double>(step) * h;
    const ToyState k1 = f(t, s);
    const ToyState k2 = f(t + 0.5 * h, axpy(s, 0.5 * h, k1));
    const ToyState k3 = f(t + 0.5 * h, axpy(s, 0.5 * h, k2));
    const ToyState k4 = f(t + h, axpy(s, h, k3));
    ToyState next = s;
    next = axpy(next, h / 6.0, k1);
    next = axpy(next, h / 3.0, k2);
    next = axpy(next, h / 3.0, k3);
    next = axpy(next, h / 6.0, k4);
    s = next;

    const double drift = std::abs(s.total_population() - norm0);
    if (!(drift <= 1e-6)) {
      throw IntegrationError("integrate: probability drift " + fmt(drift) + " at t = " +
                             fmt(t + h) + " (step too large)");
    }
    if ((step + 1) % sub == 0) {
      out.times.push_back(static_cast<double>((step + 1) / sub) * period);
      out.states.push_back(s);
    }
  }
  return out;
}

ToyState stationary_solve(const ToyParams& p) {
  p.validate();
  if (p.omega == 0.0) {
    throw DegenerateError(
        "stationary_solve: Omega = 0 leaves the null space span{|0><0|, |1><1|} "
        "(any ground-state mixture is stationary)");
  }
  Eigen::Matrix<double, 7, 7> m;
  for (int i = 0; i < 7; ++i) {
    std::array<double, 7> e{};
    e[static_cast<std::size_t>(i)] = 1.0;
    const auto col = rate_rhs(ToyState::from_array(e), p).to_array();
    for (int r = 0; r < 7; ++r) m(r, i) = col[static_cast<std::size_t>(r)];
  }
  // The p0 equation is redundant with the other population equations.
  m.row(0) << 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0;
  Eigen::Matrix<double, 7, 1> b = Eigen::Matrix<double, 7, 1>::Zero();
  b(0) = 1.0;

  Eigen::FullPivLU<Eigen::Matrix<double, 7, 7>> lu(m);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw DegenerateError("stationary_solve: rate matrix is singular (rank " +
                          std::to_string(lu.rank()) +
                          " of 7); with Gamma = 0 the driven populations never relax");
  }
  const Eigen::Matrix<double, 7, 1> x = lu.solve(b);
  return ToyState{x(0), x(1), x(2), x(3), x(4), x(5), x(6)};
}

double stationary_fidelity(const ToyParams& p) {
  p.validate();
  const double o2 = p.omega * p.omega;
  const double g2 = p.gamma * p.gamma;
  const double d2 = p.delta * p.delta;
  return 1.0 - (3.0 * o2 + g2) / (4.0 * d2 + 4.0 * o2 + 2.0 * g2);
}

double stationary_fidelity_large_detuning(const ToyParams& p) {
  p.validate();
  return 1.0 - (3.0 * p.omega * p.omega + p.gamma * p.gamma) / (4.0 * p.delta * p.delta);
}

double max_fidelity(double delta, double gamma) {
  ToyParams{0.0, delta, gamma}.validate();
  const double g2 = gamma * gamma;
  return 1.0 - g2 / (4.0 * delta * delta + 2.0 * g2);
}

double heating_rate(const ToyParams& p) {
  p.validate();
  return p.gamma * p.omega * p.omega / (p.gamma * p.gamma + 4.0 * p.delta * p.delta);
}

double cooling_rate(const ToyParams& p) {
  p.validate();
  const double o2 = p.omega * p.omega;
  const double g2 = p.gamma * p.gamma;
  const double d2 = p.delta * p.delta;
  if (o2 == 0.0 && g2 == 0.0) {
    throw DegenerateError("cooling_rate: Omega = Gamma = 0 gives the indeterminate form 0/0");
  }
  return p.gamma * o2 * (4.0 * d2 + o2 + g2) / ((4.0 * d2 + g2) * (3.0 * o2 + g2));
}

double cooling_rate_approx(const ToyParams& p) {
  p.validate();
  const double o2 = p.omega * p.omega;
  const double g2 = p.gamma * p.gamma;
  if (o2 == 0.0 && g2 == 0.0) {
    throw DegenerateError("cooling_rate_approx: Omega = Gamma = 0 gives the indeterminate form 0/0");
  }
  return p.gamma * o2 / (3.0 * o2 + g2);
}

double transient_population(double gamma_c, double gamma_h, double t) {
  const double sum = gamma_c + gamma_h;
  if (!(sum > 0.0)) throw DomainError("transient_population: gamma_c + gamma_h must be > 0");
  if (t < 0.0) throw DomainError("transient_population: t must be >= 0");
  return gamma_c / sum * -std::expm1(-sum * t);
}

DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> one_minus_f,
                        double plateau) {
  if (times.size() != one_minus_f.size()) {
    throw DomainError("fit_decay_rate: times and samples differ in length");
  }
  const double lo = 3.0 * plateau;
  const double hi = 0.5;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double y = one_minus_f[i];
    if (y < lo || y > hi) continue;
    xs.push_back(times[i]);
    ys.push_back(std::log(y));
  }
  if (xs.size() < 3) {
    throw DomainError("fit_decay_rate: only " + std::to_string(xs.size()) +
                      " samples inside the fitting window");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  return DecayFit{-slope, my - slope * mx, xs.size()};
}

}  // namespace cavitycool::toy
