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

#include "cavitycool/dressed_states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "cavitycool/errors.hpp"

namespace cavitycool::dressed {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2 = 0.70710678118654752440;

using core::HilbertSpace;
using core::StateVector;

std::string coefficient_term(int c, std::string_view symbol) {
  if (c == 1) return std::string(symbol);
  return std::to_string(c) + std::string(symbol);
}

void append_signed(std::string& out, int c, std::string_view symbol) {
  if (c == 0) return;
  out += c > 0 ? " + " : " - ";
  out += coefficient_term(std::abs(c), symbol);
}

// Renders c + d sqrt2 (both nonzero, d > 0) as "sqrt2-1", "2sqrt2+3", ...
std::string mixed_g_inner(int c, int d) {
  std::string s = coefficient_term(d, "sqrt2");
  s += c > 0 ? "+" : "-";
  s += std::to_string(std::abs(c));
  return s;
}

StateVector combo(const HilbertSpace& space,
                  std::initializer_list<std::pair<core::BareState, double>> terms) {
  StateVector v = StateVector::Zero(space.dim());
  for (const auto& [s, a] : terms) v(space.index(s)) += a;
  return v;
}

double snap_rabi_factor(double f) {
  for (double c : {1.0, kInvSqrt2, kSqrt2}) {
    if (std::abs(f - c) < 1e-12) return c;
  }
  return f;
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

double Frequency::evaluate(double w1, double w2, double g_value) const {
  return omega1 * w1 + omega2 * w2 + (g + sqrt2_g * kSqrt2) * g_value;
}

std::string Frequency::signed_terms() const {
  std::string out;
  append_signed(out, omega1, "w1");
  append_signed(out, omega2, "w2");
  append_signed(out, g, "g");
  append_signed(out, sqrt2_g, "sqrt2*g");
  return out;
}

std::string Frequency::to_string() const {
  if (depends_only_on_g() && g != 0 && sqrt2_g != 0) {
    if (sqrt2_g > 0) return "(" + mixed_g_inner(g, sqrt2_g) + ")g";
    return "-(" + mixed_g_inner(-g, -sqrt2_g) + ")g";
  }
  const std::string terms = signed_terms();
  if (terms.empty()) return "0";
  if (terms.starts_with(" + ")) return terms.substr(3);
  return "-" + terms.substr(3);
}

std::string_view to_string(Symmetry s) {
  return s == Symmetry::Symmetric ? "symmetric" : "antisymmetric";
}

core::Operator system_hamiltonian(double g, double w1, double w2, const HilbertSpace& space) {
  core::Operator h = core::jaynes_cummings(g, space);
  const double wc = w2 - w1;
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    const core::BareState s = space.state_at(i);
    const double level_energy[3] = {0.0, w1, w2};
    h(i, i) += level_energy[s.atom1] + level_energy[s.atom2] + wc * s.photons;
  }
  return h;
}

std::vector<DressedState> ground_manifold(const HilbertSpace& space) {
  const double r = kInvSqrt2;
  std::vector<DressedState> out;
  out.push_back({"|00,0>", space.basis_state(0, 0, 0), Frequency{}, 0, Symmetry::Symmetric});
  out.push_back({"|+,0>", combo(space, {{{0, 1, 0}, r}, {{1, 0, 0}, r}}), Frequency{1, 0, 0, 0}, 0,
                 Symmetry::Symmetric});
  out.push_back({"|-,0>", combo(space, {{{0, 1, 0}, r}, {{1, 0, 0}, -r}}), Frequency{1, 0, 0, 0}, 0,
                 Symmetry::Antisymmetric});
  out.push_back({"|11,0>", space.basis_state(1, 1, 0), Frequency{2, 0, 0, 0}, 0,
                 Symmetry::Symmetric});
  return out;
}

std::vector<DressedState> excited_manifold(double g, double w1, double w2,
                                           const HilbertSpace& space) {
  if (!(g > 0.0)) throw DomainError("excited_manifold: g must be > 0");
  if (space.n_max() < 1) {
    throw DomainError("excited_manifold: the one-excitation sector needs n_max >= 1");
  }
  const double r = kInvSqrt2;
  std::vector<DressedState> out;
  out.push_back({"|00,1>", space.basis_state(0, 0, 1), Frequency{-1, 1, 0, 0}, 1,
                 Symmetry::Symmetric});
  out.push_back({"|mu1>", combo(space, {{{2, 1, 0}, r}, {{1, 2, 0}, -r}}), Frequency{1, 1, 0, 0}, 1,
                 Symmetry::Antisymmetric});
  for (int sign : {+1, -1}) {
    const double s = 0.5 * sign;
    out.push_back({sign > 0 ? "|mu0,+>" : "|mu0,->",
                   combo(space, {{{0, 2, 0}, 0.5}, {{2, 0, 0}, -0.5}, {{0, 1, 1}, s}, {{1, 0, 1}, -s}}),
                   Frequency{0, 1, sign, 0}, 1, Symmetry::Antisymmetric});
  }
  for (int sign : {+1, -1}) {
    const double s = 0.5 * sign;
    out.push_back({sign > 0 ? "|lambda0,+>" : "|lambda0,->",
                   combo(space, {{{0, 2, 0}, 0.5}, {{2, 0, 0}, 0.5}, {{0, 1, 1}, s}, {{1, 0, 1}, s}}),
                   Frequency{0, 1, sign, 0}, 1, Symmetry::Symmetric});
  }
  for (int sign : {+1, -1}) {
    out.push_back({sign > 0 ? "|lambda1,+>" : "|lambda1,->",
                   combo(space, {{{1, 2, 0}, 0.5}, {{2, 1, 0}, 0.5}, {{1, 1, 1}, sign * r}}),
                   Frequency{1, 1, 0, sign}, 1, Symmetry::Symmetric});
  }

  const core::Operator h = system_hamiltonian(g, w1, w2, space);
  const double scale = std::max({1.0, std::abs(w1), std::abs(w2), g});
  for (const auto& s : out) {
    const double res = eigen_residual(s, h, w1, w2, g);
    if (res > 1e-10 * scale) {
      throw std::logic_error("excited_manifold: " + s.label + " has eigen-residual " + number(res));
    }
  }
  return out;
}

double eigen_residual(const DressedState& s, const core::Operator& h_sys, double w1, double w2,
                      double g) {
  const double e = s.energy.evaluate(w1, w2, g);
  return (h_sys * s.amplitudes - e * s.amplitudes).norm();
}

std::string_view laser_symbol(Laser l) {
  switch (l) {
    case Laser::Omega0First: return "w_L0^(1)";
    case Laser::Omega0Second: return "w_L0^(2)";
    case Laser::Omega1: return "w_L1";
  }
  return "?";
}

std::string_view amplitude_symbol(Laser l) {
  switch (l) {
    case Laser::Omega0First: return "Omega0^(1)";
    case Laser::Omega0Second: return "Omega0^(2)";
    case Laser::Omega1: return "Omega1";
  }
  return "?";
}

const Frequency& LaserFrequencies::of(Laser l) const {
  switch (l) {
    case Laser::Omega0First: return omega_l0_first;
    case Laser::Omega0Second: return omega_l0_second;
    case Laser::Omega1: break;
  }
  return omega_l1;
}

double RabiAmplitudes::of(Laser l) const {
  switch (l) {
    case Laser::Omega0First: return omega0_first;
    case Laser::Omega0Second: return omega0_second;
    case Laser::Omega1: break;
  }
  return omega1;
}

std::string TransitionEntry::rabi_expression() const {
  const std::string sym(amplitude_symbol(laser));
  if (rabi_factor == 1.0) return sym;
  if (rabi_factor == kInvSqrt2) return sym + "/sqrt2";
  if (rabi_factor == kSqrt2) return "sqrt2*" + sym;
  return number(rabi_factor) + "*" + sym;
}

std::vector<TransitionEntry> transition_table(const LaserFrequencies& lasers,
                                              const RabiAmplitudes& amplitudes) {
  for (Laser l : {Laser::Omega0First, Laser::Omega0Second, Laser::Omega1}) {
    if (!(amplitudes.of(l) >= 0.0)) {
      throw DomainError("transition_table: Rabi amplitude " + std::string(amplitude_symbol(l)) +
                        " must be >= 0");
    }
  }
  const HilbertSpace space(1);
  const auto ground = ground_manifold(space);
  // The matrix elements do not depend on g, w1 or w2.
  const auto excited = excited_manifold(1.0, 0.0, 0.0, space);

  std::vector<TransitionEntry> table;
  for (const auto& gs : ground) {
    for (Laser l : {Laser::Omega0First, Laser::Omega0Second, Laser::Omega1}) {
      const int lower = l == Laser::Omega1 ? 1 : 0;
      const core::Operator raise =
          core::atom_transition(1, 2, lower, space) + core::atom_transition(2, 2, lower, space);
      const StateVector driven = raise * gs.amplitudes;
      for (const auto& es : excited) {
        const double factor = std::abs(es.amplitudes.dot(driven));
        if (factor < 1e-12) continue;
        TransitionEntry e;
        e.ground = gs.label;
        e.excited = es.label;
        e.laser = l;
        e.rabi_factor = snap_rabi_factor(factor);
        e.rabi = e.rabi_factor * amplitudes.of(l);
        e.transition = es.energy - gs.energy;
        e.detuning = lasers.of(l) - e.transition;
        table.push_back(std::move(e));
      }
    }
  }
  return table;
}

LaserFrequencies resonant_assignment(double g) {
  if (!(g > 0.0)) throw DomainError("resonant_assignment: g must be > 0");
  return LaserFrequencies{Frequency{0, 1, -1, 0}, Frequency{0, 1, 0, 0}, Frequency{-1, 1, 0, -1}};
}

double delta_min(double g) {
  if (!(g > 0.0)) throw DomainError("delta_min: g must be > 0");
  return (kSqrt2 - 1.0) * g;
}

double min_abs_detuning(const std::vector<TransitionEntry>& table, std::string_view ground,
                        double w1, double w2, double g) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : table) {
    if (e.ground == ground) best = std::min(best, std::abs(e.detuning_value(w1, w2, g)));
  }
  return best;
}

std::string symbolic_detuning(const TransitionEntry& e) {
  return std::string(laser_symbol(e.laser)) + (Frequency{} - e.transition).signed_terms();
}

std::string tables_json(double g, double w1, double w2) {
  using nlohmann::ordered_json;
  const HilbertSpace space(1);
  const auto table = transition_table(resonant_assignment(g), RabiAmplitudes{1.0, 1.0, 1.0});

  ordered_json doc;
  doc["g"] = g;
  doc["w1"] = w1;
  doc["w2"] = w2;
  doc["delta_min"] = delta_min(g);

  ordered_json states = ordered_json::array();
  auto add_states = [&](const std::vector<DressedState>& list) {
    for (const auto& s : list) {
      states.push_back({{"label", s.label},
                        {"energy", s.energy.to_string()},
                        {"energy_value", s.energy.evaluate(w1, w2, g)},
                        {"excitations", s.excitation_number},
                        {"symmetry", std::string(to_string(s.symmetry))}});
    }
  };
  add_states(ground_manifold(space));
  add_states(excited_manifold(g, w1, w2, space));
  doc["states"] = std::move(states);

  ordered_json t3 = ordered_json::array();
  ordered_json t4 = ordered_json::array();
  const auto lasers = resonant_assignment(g);
  doc["lasers"] = {{"w_L0^(1)", lasers.omega_l0_first.to_string()},
                   {"w_L0^(2)", lasers.omega_l0_second.to_string()},
                   {"w_L1", lasers.omega_l1.to_string()}};
  for (const auto& e : table) {
    t3.push_back({{"ground", e.ground},
                  {"excited", e.excited},
                  {"laser", static_cast<int>(e.laser)},
                  {"rabi", e.rabi_expression()},
                  {"rabi_factor", e.rabi_factor},
                  {"detuning", symbolic_detuning(e)}});
    t4.push_back({{"ground", e.ground},
                  {"excited", e.excited},
                  {"laser", static_cast<int>(e.laser)},
                  {"rabi", e.rabi_expression()},
                  {"detuning", e.detuning.to_string()},
                  {"detuning_value", e.detuning_value(w1, w2, g)}});
  }
  doc["table3"] = std::move(t3);
  doc["table4"] = std::move(t4);
  return doc.dump(2) + "\n";
}

std::string tables_text(double g, double w1, double w2) {
  const auto table = transition_table(resonant_assignment(g), RabiAmplitudes{1.0, 1.0, 1.0});
  std::ostringstream os;
  auto print = [&](const char* title, bool symbolic) {
    os << title << "\n";
    os << std::left << std::setw(10) << "ground" << std::setw(14) << "excited" << std::setw(20)
       << "rabi" << "detuning\n";
    std::string last;
    for (const auto& e : table) {
      const std::string shown = e.ground == last ? "" : e.ground;
      last = e.ground;
      os << std::left << std::setw(10) << shown << std::setw(14) << e.excited << std::setw(20)
         << e.rabi_expression();
      if (symbolic) {
        os << symbolic_detuning(e);
      } else {
        os << std::setw(14) << e.detuning.to_string() << "(" << number(e.detuning_value(w1, w2, g))
           << ")";
      }
      os << "\n";
    }
  };
  print("Laser-driven transitions (symbolic laser frequencies)", true);
  os << "\n";
  const auto lasers = resonant_assignment(g);
  os << "Resonant assignment: w_L0^(1) = " << lasers.omega_l0_first.to_string()
     << ", w_L0^(2) = " << lasers.omega_l0_second.to_string()
     << ", w_L1 = " << lasers.omega_l1.to_string() << "\n";
  print("Detunings under the resonant assignment", false);
  os << "\ndelta_min = (sqrt2-1)g = " << number(delta_min(g)) << "\n";
  return os.str();
}

}  // namespace cavitycool::dressed
