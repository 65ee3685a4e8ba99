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

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cavitycool::toy {

/// Drive and decay of the four-level model. Frequencies share one unit
/// (usually the detuning, so delta = 1).
struct ToyParams {
  double omega = 0.0;  // Rabi frequency of the 0-2 / 1-3 drive
  double delta = 1.0;  // detuning of the 0-2 transition, > 0
  double gamma = 0.0;  // total decay rate of levels 2 and 3

  /// Throws DomainError unless delta > 0, omega >= 0 and gamma >= 0.
  void validate() const;
};

/// The seven real expectation values closing the rate equations:
/// populations p_i, k_ij = 2 Im rho_ij and l_ij = 2 Re rho_ij.
struct ToyState {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double k02 = 0.0;
  double k13 = 0.0;
  double l02 = 0.0;

  static ToyState in_level(int level);
  static ToyState from_array(const std::array<double, 7>& v);
  std::array<double, 7> to_array() const;

  double total_population() const noexcept { return p0 + p1 + p2 + p3; }
  double fidelity() const noexcept { return p0; }

  friend bool operator==(const ToyState&, const ToyState&) = default;
};

/// Time derivatives of all seven expectation values.
ToyState rate_rhs(const ToyState& s, const ToyParams& p);

/// Omega(t) = multiplier * omega0 / (1 + gamma_c0 t)^2.
struct PulseSchedule {
  double omega0 = 0.0;
  double gamma_c0 = 0.0;
  double multiplier = 3.0;

  double omega(double t) const;
};

double pulse_omega(double t, const PulseSchedule& sched);

/// Toy-model pulse: multiplier 3, gamma_c0 from cooling_rate_approx at omega0.
PulseSchedule toy_pulse(double omega0, double delta, double gamma);

struct IntegrationOptions {
  double t_end = 0.0;
  /// Zero selects default_step().
  double dt = 0.0;
  /// Sampling period; zero records every step. t_end must be a multiple of it.
  double sample_every = 0.0;
  /// Time-dependent Rabi frequency; overrides ToyParams::omega when set.
  std::optional<PulseSchedule> schedule;
};

struct ToySeries {
  std::vector<double> times;
  std::vector<ToyState> states;
};

/// 0.02 / max(delta, gamma, omega(0)).
double default_step(const ToyParams& p, double omega_at_zero);

/// Upper bound on the step accepted by integrate(): 0.05 / max(delta, gamma, omega(0)).
double max_step(const ToyParams& p, double omega_at_zero);

/// Fixed-step classical RK4 on the rate equations. A schedule is evaluated at
/// every stage time. Throws IntegrationError when dt exceeds max_step() or the
/// total population drifts by more than 1e-6.
ToySeries integrate(const ToyParams& p, const ToyState& s0, const IntegrationOptions& opts);

/// Direct solve of {rate_rhs = 0, sum p_i = 1}. Throws DegenerateError when
/// omega == 0 (every mixture of |0> and |1> is stationary).
ToyState stationary_solve(const ToyParams& p);

/// 1 - (3 Omega^2 + Gamma^2) / (4 Delta^2 + 4 Omega^2 + 2 Gamma^2); exact for this model.
double stationary_fidelity(const ToyParams& p);

/// Large-detuning form 1 - (3 Omega^2 + Gamma^2) / (4 Delta^2).
double stationary_fidelity_large_detuning(const ToyParams& p);

/// Undriven limit 1 - Gamma^2 / (4 Delta^2 + 2 Gamma^2).
double max_fidelity(double delta, double gamma);

double heating_rate(const ToyParams& p);

/// Cooling rate implied by heating_rate() and stationary_fidelity().
/// Throws DegenerateError when omega and gamma are both zero.
double cooling_rate(const ToyParams& p);

/// Detuning-independent form Gamma Omega^2 / (3 Omega^2 + Gamma^2).
double cooling_rate_approx(const ToyParams& p);

/// P0(t) for P0(0) = 0 under constant cooling/heating rates.
double transient_population(double gamma_c, double gamma_h, double t);

struct DecayFit {
  double rate = 0.0;       // positive decay constant
  double intercept = 0.0;  // log(1 - F) at t = 0 of the fitted line
  std::size_t points = 0;
};

/// Least-squares slope of log(1 - F) over the samples with
/// 1 - F in [3 * plateau, 0.5]. Throws DomainError with fewer than 3 points.
DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> one_minus_f,
                        double plateau);

}  // namespace cavitycool::toy
