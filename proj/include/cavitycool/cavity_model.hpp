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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cavitycool/quantum_core.hpp"
#include "cavitycool/toy_model.hpp"

namespace cavitycool::cavity {

using core::Operator;
using core::StateVector;

/// Rates and Rabi amplitudes of the two-atom cavity system, all in one
/// frequency unit (normally g = 1).
struct CavityParams {
  double g = 1.0;
  double gamma0 = 0.0;   // 2 -> 0 decay rate of each atom
  double gamma1 = 0.0;   // 2 -> 1 decay rate of each atom
  double kappa = 0.0;    // cavity field decay rate
  double omega01 = 0.0;  // Omega0^(1)
  double omega02 = 0.0;  // Omega0^(2)
  double omega1l = 0.0;  // Omega1
  int n_max = 3;

  double gamma() const noexcept { return gamma0 + gamma1; }
  core::HilbertSpace space() const { return core::HilbertSpace(n_max); }

  /// Throws DomainError unless g > 0, every rate and amplitude is >= 0 and n_max >= 0.
  void validate() const;

  /// g = 1, kappa = ratio * Gamma, Gamma split equally between the two
  /// branches, all three lasers at `omega`. Solves g^2 / (kappa Gamma) = C.
  static CavityParams from_cooperativity(double c, double kappa_over_gamma, double omega,
                                         int n_max = 3);
};

/// Laser detunings relative to the rotating frame:
///   d1 = w_L0^(1) - w2, d2 = w_L0^(2) - w2, d3 = w_L1 - (w2 - w1).
struct LaserConfig {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  /// (-g, 0, -sqrt2 g).
  static LaserConfig canonical(double g);
};

/// g^2 / (kappa Gamma). Throws DomainError for a non-positive rate.
double cooperativity(double g, double kappa, double gamma);

struct AnalyticPrediction {
  double gamma_c = 0.0;
  double fidelity = 0.0;
};

/// Toy-model rates with Gamma -> (kappa + Gamma)/2 and Delta -> (sqrt2-1)g.
/// Throws NotApplicableError unless the three Rabi amplitudes are equal.
/// Omega = kappa + Gamma = 0 gives the limit {0, 1}.
AnalyticPrediction analytic_full_model(const CavityParams& p);

/// Multiplier 6, omega0 = the common Rabi amplitude, gamma_c0 from
/// analytic_full_model(). The schedule scales all three amplitudes.
toy::PulseSchedule cavity_pulse(const CavityParams& p);

/// Rotating-frame H(t) (hbar = 1). `scale` multiplies every Rabi amplitude.
Operator hamiltonian(double t, const CavityParams& p, const LaserConfig& cfg, double scale = 1.0);

/// hamiltonian() - (i/2)(Gamma sum_i |2><2|_i + kappa c^dagger c).
Operator conditional_hamiltonian(double t, const CavityParams& p, const LaserConfig& cfg,
                                 double scale = 1.0);

struct JumpChannel {
  std::string label;  // "atom1->0", "atom1->1", "atom2->0", "atom2->1", "cavity"
  Operator op;        // without the sqrt(rate) factor
  double rate = 0.0;
};

std::vector<JumpChannel> jump_channels(const CavityParams& p);

/// |+,0> in the space of p.
StateVector target_state(const core::HilbertSpace& space);

struct EvolutionOptions {
  double t_end = 0.0;
  /// Zero selects 0.005 / g.
  double dt = 0.0;
  /// Zero selects 1 / g. t_end must be a multiple of it.
  double sample_every = 0.0;
  std::optional<toy::PulseSchedule> schedule;
  /// Overlap target; empty selects |+,0>.
  StateVector target;
  bool record_jumps = true;
};

/// Largest dt accepted: 0.05 / (2 Gamma + kappa n_max), the bound on the
/// per-step decay probability.
double max_step(const CavityParams& p);

struct JumpRecord {
  double time = 0.0;
  std::string channel;
};

struct TrajectoryResult {
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<JumpRecord> jumps;
};

struct EnsembleResult {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t n_traj = 0;
  std::uint64_t master_seed = 0;
};

/// Seed of trajectory `index` (splitmix64 of the master seed and index).
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

/// One quantum-jump trajectory (waiting-time method, RK4 between jumps).
/// Throws IntegrationError when the norm grows beyond 1 + 1e-9 and DomainError
/// for an unnormalized initial state or a step above max_step().
TrajectoryResult evolve_trajectory(const StateVector& psi0, const CavityParams& p,
                                   const LaserConfig& cfg, const EvolutionOptions& opts,
                                   std::uint64_t seed);

/// Mean and standard error of the fidelity over n_traj trajectories with
/// seeds trajectory_seed(master_seed, i). The result does not depend on
/// `threads` (0 selects the hardware concurrency).
EnsembleResult ensemble_average(const StateVector& psi0, const CavityParams& p,
                                const LaserConfig& cfg, const EvolutionOptions& opts,
                                std::size_t n_traj, std::uint64_t master_seed,
                                unsigned threads = 0);

struct MasterResult {
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> trace;
  Operator final_rho;
};

/// RK4 on the Lindblad equation. Throws DomainError for an invalid rho0 and
/// IntegrationError when the trace drifts by more than 1e-6.
MasterResult master_equation_evolve(const Operator& rho0, const CavityParams& p,
                                    const LaserConfig& cfg, const EvolutionOptions& opts);

struct WindowAverage {
  double mean = 0.0;
  double stderr_ = 0.0;      // mean per-sample standard error over the window
  double first_half = 0.0;
  double second_half = 0.0;
  std::size_t samples = 0;

  bool settled() const noexcept;
};

/// Average over the samples with t >= 0.75 t_end. `stderr_values` may be empty.
WindowAverage stationary_window(const std::vector<double>& times, const std::vector<double>& values,
                                const std::vector<double>& stderr_values);

}  // namespace cavitycool::cavity
