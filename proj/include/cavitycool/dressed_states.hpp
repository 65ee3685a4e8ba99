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

#include <string>
#include <string_view>
#include <vector>

#include "cavitycool/quantum_core.hpp"

namespace cavitycool::dressed {

/// Exact frequency a*w1 + b*w2 + (c + d*sqrt2)*g with integer coefficients.
/// Energies of the zero- and one-excitation sectors and the canonical laser
/// frequencies are all of this form, so detunings cancel w1 and w2 exactly.
struct Frequency {
  int omega1 = 0;
  int omega2 = 0;
  int g = 0;
  int sqrt2_g = 0;

  double evaluate(double w1, double w2, double g_value) const;
  bool depends_only_on_g() const noexcept { return omega1 == 0 && omega2 == 0; }

  /// ASCII rendering, e.g. "w1 + w2 - sqrt2*g", "-(sqrt2+1)g", "0".
  std::string to_string() const;
  /// Every term with its sign, e.g. " + w1 - w2 - g"; empty for zero.
  std::string signed_terms() const;

  friend Frequency operator+(Frequency a, const Frequency& b) {
    a.omega1 += b.omega1;
    a.omega2 += b.omega2;
    a.g += b.g;
    a.sqrt2_g += b.sqrt2_g;
    return a;
  }
  friend Frequency operator-(const Frequency& a, const Frequency& b) {
    return a + Frequency{-b.omega1, -b.omega2, -b.g, -b.sqrt2_g};
  }
  friend bool operator==(const Frequency&, const Frequency&) = default;
};

enum class Symmetry { Symmetric, Antisymmetric };

std::string_view to_string(Symmetry s);

struct DressedState {
  std::string label;  // e.g. "|+,0>", "|lambda1,->"
  core::StateVector amplitudes;
  Frequency energy;   // in units of hbar
  int excitation_number = 0;
  Symmetry symmetry = Symmetry::Symmetric;
};

/// Bare-frame system Hamiltonian: resonant exchange plus the free energies
/// w0 = 0, w1, w2 of each atom and w_c = w2 - w1 of the cavity.
core::Operator system_hamiltonian(double g, double w1, double w2, const core::HilbertSpace& space);

/// |00,0>, |+,0>, |-,0>, |11,0>.
std::vector<DressedState> ground_manifold(const core::HilbertSpace& space);

/// |00,1>, |mu1>, |mu0,+>, |mu0,->, |lambda0,+>, |lambda0,->, |lambda1,+>,
/// |lambda1,->. Requires g > 0 and n_max >= 1; every state is checked against
/// system_hamiltonian() and an internal inconsistency throws.
std::vector<DressedState> excited_manifold(double g, double w1, double w2,
                                           const core::HilbertSpace& space);

/// ||H|psi> - E|psi>||.
double eigen_residual(const DressedState& s, const core::Operator& h_sys, double w1, double w2,
                      double g);

/// Laser k: 1 and 2 drive the 0-2 transition, 3 drives 1-2.
enum class Laser { Omega0First = 1, Omega0Second = 2, Omega1 = 3 };

std::string_view laser_symbol(Laser l);     // "w_L0^(1)", ...
std::string_view amplitude_symbol(Laser l);  // "Omega0^(1)", ...

struct LaserFrequencies {
  Frequency omega_l0_first;
  Frequency omega_l0_second;
  Frequency omega_l1;

  const Frequency& of(Laser l) const;
};

struct RabiAmplitudes {
  double omega0_first = 0.0;
  double omega0_second = 0.0;
  double omega1 = 0.0;

  double of(Laser l) const;
};

/// One nonzero laser matrix element between a ground and a one-excitation
/// dressed state. The effective Rabi frequency is rabi_factor * amplitude,
/// where rabi_factor = |<excited| sum_i |2>_i<a| |ground>|.
struct TransitionEntry {
  std::string ground;
  std::string excited;
  Laser laser = Laser::Omega0First;
  double rabi_factor = 0.0;
  double rabi = 0.0;
  /// E_excited - E_ground.
  Frequency transition;
  /// laser frequency - transition frequency.
  Frequency detuning;

  /// "Omega0^(1)/sqrt2" style rendering of the effective Rabi frequency.
  std::string rabi_expression() const;
  double detuning_value(double w1, double w2, double g) const {
    return detuning.evaluate(w1, w2, g);
  }
};

/// All nonzero matrix elements of the laser Hamiltonian between the ground
/// manifold and the one-excitation manifold, ground-major then laser order.
std::vector<TransitionEntry> transition_table(const LaserFrequencies& lasers,
                                              const RabiAmplitudes& amplitudes);

/// w_L0^(1) = w2 - g, w_L0^(2) = w2, w_L1 = w2 - w1 - sqrt2 g, the choice
/// that leaves |+,0> as the only off-resonantly driven ground state.
/// Throws DomainError for g <= 0.
LaserFrequencies resonant_assignment(double g = 1.0);

/// (sqrt2 - 1) g. Throws DomainError for g <= 0.
double delta_min(double g);

/// Smallest |detuning| over the rows that start in `ground`.
double min_abs_detuning(const std::vector<TransitionEntry>& table, std::string_view ground,
                        double w1, double w2, double g);

/// Detuning in terms of the laser symbol, e.g. "w_L0^(1) - w2 - g".
std::string symbolic_detuning(const TransitionEntry& e);

/// Regression document with the symbolic and canonical-assignment tables.
std::string tables_json(double g, double w1, double w2);

/// Aligned text rendering of both tables.
std::string tables_text(double g, double w1, double w2);

}  // namespace cavitycool::dressed
