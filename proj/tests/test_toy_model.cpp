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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cavitycool/errors.hpp"
#include "cavitycool/toy_model.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cavitycool;
using namespace cavitycool::toy;

namespace {

// Four-level model as a density matrix: drive 0-2 (detuned by delta) and
// 1-3 (resonant), levels 2 and 3 decay to 0 and 1 with rate gamma/2 each.
oracle::M toy_hcond(const ToyParams& p) {
  oracle::M h = oracle::M::Zero(4, 4);
  h(0, 2) = h(2, 0) = h(1, 3) = h(3, 1) = 0.5 * p.omega;
  h(2, 2) = p.delta;
  h(2, 2) -= oracle::C(0.0, 0.5 * p.gamma);
  h(3, 3) = oracle::C(0.0, -0.5 * p.gamma);
  return h;
}

std::vector<oracle::M> toy_jumps(const ToyParams& p) {
  std::vector<oracle::M> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 2; j < 4; ++j) {
      oracle::M l = oracle::M::Zero(4, 4);
      l(i, j) = std::sqrt(0.5 * p.gamma);
      out.push_back(l);
    }
  }
  return out;
}

oracle::M toy_rhs(const ToyParams& p, const oracle::M& rho) {
  const oracle::M h = toy_hcond(p);
  const oracle::C im(0.0, 1.0);
  oracle::M d = -im * (h * rho - rho * h.adjoint());
  for (const auto& l : toy_jumps(p)) d += l * rho * l.adjoint();
  return d;
}

oracle::M to_rho(const ToyState& s) {
  oracle::M rho = oracle::M::Zero(4, 4);
  rho(0, 0) = s.p0;
  rho(1, 1) = s.p1;
  rho(2, 2) = s.p2;
  rho(3, 3) = s.p3;
  rho(0, 2) = oracle::C(0.5 * s.l02, 0.5 * s.k02);
  rho(2, 0) = std::conj(rho(0, 2));
  rho(1, 3) = oracle::C(0.0, 0.5 * s.k13);
  rho(3, 1) = std::conj(rho(1, 3));
  return rho;
}

ToyState from_rho(const oracle::M& r) {
  return {r(0, 0).real(), r(1, 1).real(), r(2, 2).real(), r(3, 3).real(),
          2.0 * r(0, 2).imag(), 2.0 * r(1, 3).imag(), 2.0 * r(0, 2).real()};
}

double eq12(double o, double d, double g) {
  return 1.0 - (3 * o * o + g * g) / (4 * d * d + 4 * o * o + 2 * g * g);
}

// 20x20 grid over (0, 0.5] in units of delta.
template <class F>
void on_grid(F&& f) {
  for (int i = 1; i <= 20; ++i) {
    for (int j = 1; j <= 20; ++j) f(ToyParams{0.025 * i, 1.0, 0.025 * j});
  }
}

}  // namespace

TEST_SUITE("toy_model") {

TEST_CASE("rate equations match the density-matrix equation of motion") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.01, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ToyParams p{pos(rng), pos(rng), pos(rng)};
    const ToyState s{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const oracle::M d = toy_rhs(p, to_rho(s));
    const auto got = rate_rhs(s, p).to_array();
    const auto want = from_rho(d).to_array();
    for (std::size_t k = 0; k < 7; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
    // The real part of the 1-3 coherence is decoupled and stays zero.
    CHECK(std::abs(d(1, 3).real()) < 1e-14);
  }
}

TEST_CASE("population derivatives sum to zero") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const ToyParams p{std::abs(u(rng)), 0.1 + std::abs(u(rng)), std::abs(u(rng))};
    const ToyState s{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    CHECK(std::abs(rate_rhs(s, p).total_population()) <= 1e-15);
  }
}

TEST_CASE("rate_rhs examples") {
  const ToyParams p{0.07, 1.3, 0.4};
  const ToyState d1 = rate_rhs(ToyState::in_level(1), p);
  CHECK(d1.p0 == 0.0);
  CHECK(d1.p1 == 0.0);
  CHECK(d1.p2 == 0.0);
  CHECK(d1.p3 == 0.0);
  CHECK(d1.k02 == 0.0);
  CHECK(d1.k13 == doctest::Approx(p.omega).epsilon(1e-15));
  CHECK(d1.l02 == 0.0);

  const ToyState d2 = rate_rhs(ToyState::in_level(2), ToyParams{0.0, 1.0, 0.2});
  CHECK(d2.p0 == doctest::Approx(0.1));
  CHECK(d2.p1 == doctest::Approx(0.1));
  CHECK(d2.p2 == doctest::Approx(-0.2));

  const ToyParams q{0.05, 1.0, 0.2};
  for (double v : rate_rhs(stationary_solve(q), q).to_array()) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("stationary state agrees with the Liouvillian null vector") {
  for (const ToyParams& p : {ToyParams{0.05, 1.0, 0.2}, ToyParams{0.3, 1.0, 0.2},
                             ToyParams{0.5, 1.0, 0.5}, ToyParams{0.01, 2.0, 0.4}}) {
    const oracle::M l = oracle::liouvillian(toy_hcond(p), toy_jumps(p));
    const oracle::M rho = oracle::stationary(l, 4);
    const auto want = from_rho(rho).to_array();
    const auto got = stationary_solve(p).to_array();
    for (std::size_t k = 0; k < 7; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-9));
  }
}

TEST_CASE("closed-form stationary fidelity is exact") {
  on_grid([](const ToyParams& p) {
    const double f = stationary_fidelity(p);
    CHECK(std::abs(stationary_solve(p).p0 - f) <= 1e-12);
    CHECK(std::abs(f - eq12(p.omega, p.delta, p.gamma)) <= 1e-15);
  });
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-3, 0.5);
  for (int i = 0; i < 200; ++i) {
    const ToyParams p{u(rng), 1.0, u(rng)};
    CHECK(std::abs(stationary_solve(p).p0 - stationary_fidelity(p)) <= 1e-12);
  }
}

TEST_CASE("detailed balance") {
  on_grid([](const ToyParams& p) {
    const double f = stationary_fidelity(p);
    CHECK(std::abs(heating_rate(p) * f - cooling_rate(p) * (1.0 - f)) <= 1e-12);
  });
}

TEST_CASE("stationary examples") {
  CHECK(stationary_solve({0.05, 1.0, 0.2}).p0 == doctest::Approx(0.98839).epsilon(1e-5));
  CHECK(stationary_fidelity({0.05, 1.0, 0.2}) == doctest::Approx(1.0 - 0.0475 / 4.09).epsilon(1e-14));
  CHECK(stationary_fidelity({0.3, 1.0, 0.2}) == doctest::Approx(1.0 - 0.31 / 4.44).epsilon(1e-14));
  CHECK(stationary_solve({0.3, 1.0, 0.2}).p0 == doctest::Approx(0.930180).epsilon(1e-6));
  CHECK(stationary_fidelity({0.0, 1.0, 0.0}) == 1.0);
  CHECK(stationary_fidelity_large_detuning({0.05, 1.0, 0.2}) == doctest::Approx(0.988125).epsilon(1e-12));
  CHECK(stationary_solve({1e-4, 1.0, 0.2}).p0 == doctest::Approx(0.990196).epsilon(1e-6));
}

TEST_CASE("degenerate stationary problems") {
  CHECK_THROWS_AS(stationary_solve({0.0, 1.0, 0.2}), DegenerateError);
  CHECK_THROWS_AS(stationary_solve({0.0, 1.0, 0.0}), DegenerateError);
  CHECK_THROWS_AS(stationary_solve({0.1, 1.0, 0.0}), DegenerateError);
  CHECK_THROWS_AS(cooling_rate({0.0, 1.0, 0.0}), DegenerateError);
  CHECK_THROWS_AS(cooling_rate_approx({0.0, 1.0, 0.0}), DegenerateError);
  CHECK_THROWS_AS(ToyParams({0.1, 0.0, 0.2}).validate(), DomainError);
  CHECK_THROWS_AS(ToyParams({-0.1, 1.0, 0.2}).validate(), DomainError);
  CHECK_THROWS_AS(ToyParams({0.1, 1.0, -0.2}).validate(), DomainError);
}

TEST_CASE("max fidelity") {
  CHECK(max_fidelity(1.0, 0.0) == 1.0);
  CHECK(max_fidelity(1.0, 0.2) == doctest::Approx(1.0 - 0.04 / 4.08).epsilon(1e-14));
  CHECK(max_fidelity(1.0, 0.2) == doctest::Approx(0.990196).epsilon(1e-6));
  for (double g : {0.05, 0.2, 0.5}) {
    CHECK(std::abs(stationary_fidelity({1e-9, 1.0, g}) - max_fidelity(1.0, g)) < 1e-15);
  }
}

TEST_CASE("monotonicity of the stationary fidelity") {
  for (int i = 1; i < 50; ++i) {
    for (int j = 1; j < 50; ++j) {
      const double o = 0.01 * i, g = 0.01 * j;
      CHECK(stationary_fidelity({o + 0.01, 1.0, g}) < stationary_fidelity({o, 1.0, g}));
      CHECK(stationary_fidelity({o, 1.0, g + 0.01}) < stationary_fidelity({o, 1.0, g}));
    }
  }
}

TEST_CASE("heating and cooling rates") {
  const ToyParams p{0.05, 1.0, 0.2};
  CHECK(heating_rate(p) == doctest::Approx(1.2376e-4).epsilon(1e-4));
  CHECK(heating_rate({0.0, 1.0, 0.2}) == 0.0);
  CHECK(cooling_rate(p) == doctest::Approx(0.010533).epsilon(1e-4));
  CHECK(cooling_rate_approx(p) == doctest::Approx(0.010526).epsilon(1e-4));
  CHECK(cooling_rate({0.0, 1.0, 0.2}) == 0.0);
  CHECK(cooling_rate_approx({1e6, 1.0, 0.2}) == doctest::Approx(0.2 / 3.0).epsilon(1e-9));
  // Full and approximate forms merge for large detuning.
  CHECK(cooling_rate({0.05, 1e4, 0.2}) == doctest::Approx(cooling_rate_approx({0.05, 1e4, 0.2})).epsilon(1e-8));
}

TEST_CASE("transient population") {
  CHECK(transient_population(0.0105, 1.24e-4, 0.0) == 0.0);
  // 0.0105 / 0.010624 * (1 - exp(-2.1248))
  CHECK(transient_population(0.0105, 1.24e-4, 200.0) == doctest::Approx(0.870266).epsilon(1e-6));
  CHECK(transient_population(0.0105, 1.24e-4, 1e7) == doctest::Approx(0.0105 / (0.0105 + 1.24e-4)));
  CHECK_THROWS_AS(transient_population(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(transient_population(0.1, 0.0, -1.0), DomainError);
}

TEST_CASE("pulse schedule") {
  const PulseSchedule s{0.05, 0.01, 3.0};
  CHECK(s.omega(0.0) == doctest::Approx(0.15));
  CHECK(pulse_omega(100.0, s) == doctest::Approx(0.75 * 0.05));
  CHECK(s.omega(1e9) < 1e-12);
  for (int i = 0; i < 100; ++i) CHECK(s.omega(10.0 * (i + 1)) < s.omega(10.0 * i));
  CHECK_THROWS_AS(pulse_omega(-1.0, s), DomainError);

  const PulseSchedule t = toy_pulse(0.05, 1.0, 0.2);
  CHECK(t.multiplier == 3.0);
  CHECK(t.gamma_c0 == doctest::Approx(cooling_rate_approx({0.05, 1.0, 0.2})));
}

TEST_CASE("integration agrees with the exact propagator") {
  const ToyParams p{0.1, 1.0, 0.3};
  const oracle::M l = oracle::liouvillian(toy_hcond(p), toy_jumps(p));
  IntegrationOptions o;
  o.t_end = 50.0;
  o.sample_every = 5.0;
  const ToySeries s = integrate(p, ToyState::in_level(1), o);
  REQUIRE(s.times.size() == 11);
  const oracle::M rho0 = to_rho(ToyState::in_level(1));
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const auto want = from_rho(oracle::evolve(l, rho0, s.times[i])).to_array();
    const auto got = s.states[i].to_array();
    for (std::size_t k = 0; k < 7; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-9);
  }
}

TEST_CASE("integration examples") {
  IntegrationOptions o;
  o.t_end = 100.0;
  o.sample_every = 10.0;
  const ToySeries dark = integrate({0.0, 1.0, 0.2}, ToyState::in_level(0), o);
  for (const auto& s : dark.states) CHECK(s == ToyState::in_level(0));

  o.t_end = 2000.0;
  const ToySeries s = integrate({0.05, 1.0, 0.2}, ToyState::in_level(1), o);
  CHECK(s.states.back().p0 == doctest::Approx(0.98839).epsilon(1e-4));
  for (const auto& st : s.states) {
    CHECK(std::abs(st.total_population() - 1.0) <= 1e-9);
    for (double v : {st.p0, st.p1, st.p2, st.p3}) {
      CHECK(v >= -1e-9);
      CHECK(v <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("integration argument checks") {
  IntegrationOptions o;
  o.t_end = 10.0;
  o.dt = 0.5;
  CHECK_THROWS_AS(integrate({0.05, 1.0, 0.2}, ToyState::in_level(1), o), IntegrationError);
  o.dt = 0.0;
  o.t_end = 0.0;
  CHECK_THROWS_AS(integrate({0.05, 1.0, 0.2}, ToyState::in_level(1), o), DomainError);
  o.t_end = 10.0;
  o.sample_every = 3.0;
  CHECK_THROWS_AS(integrate({0.05, 1.0, 0.2}, ToyState::in_level(1), o), DomainError);
  CHECK_THROWS_AS(ToyState::in_level(4), DomainError);
}

TEST_CASE("pulsed drive with time-dependent stages") {
  // Closed-form check of stage evaluation: a schedule with zero decay rate is
  // constant, so the pulsed and constant runs must be bit-identical.
  IntegrationOptions a;
  a.t_end = 50.0;
  a.sample_every = 1.0;
  IntegrationOptions b = a;
  b.schedule = PulseSchedule{0.05, 0.0, 1.0};
  const auto ra = integrate({0.05, 1.0, 0.2}, ToyState::in_level(1), a);
  const auto rb = integrate({0.9, 1.0, 0.2}, ToyState::in_level(1), b);
  CHECK(ra.states.back() == rb.states.back());
}

TEST_CASE("fitted cooling rate equals the spectral gap and stays below the analytic rate") {
  for (double omega : {0.02, 0.05, 0.1}) {
    const ToyParams p{omega, 1.0, 0.2};
    const oracle::M l = oracle::liouvillian(toy_hcond(p), toy_jumps(p));
    Eigen::ComplexEigenSolver<oracle::M> es(l);
    std::vector<double> rates;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) rates.push_back(-es.eigenvalues()(i).real());
    std::sort(rates.begin(), rates.end());
    const double gap = rates[1];

    IntegrationOptions o;
    o.t_end = 3000.0;
    o.sample_every = 1.0;
    const ToySeries s = integrate(p, ToyState::in_level(1), o);
    std::vector<double> y;
    for (const auto& st : s.states) y.push_back(1.0 - st.p0);
    const DecayFit fit = fit_decay_rate(s.times, y, 1.0 - stationary_fidelity(p));
    CHECK(fit.rate == doctest::Approx(gap).epsilon(0.03));
    CHECK(cooling_rate(p) + heating_rate(p) > fit.rate);
  }
}

TEST_CASE("decay fit recovers a known exponential") {
  std::vector<double> t, y;
  for (int i = 0; i <= 400; ++i) {
    t.push_back(i);
    y.push_back(0.9 * std::exp(-0.02 * i) + 1e-4);
  }
  const DecayFit fit = fit_decay_rate(t, y, 1e-4);
  CHECK(fit.rate == doctest::Approx(0.02).epsilon(0.02));
  CHECK(fit.points > 10);
  CHECK_THROWS_AS(fit_decay_rate(t, std::vector<double>(3, 0.1), 1e-4), DomainError);
}

}
