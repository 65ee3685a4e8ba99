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

#include "cavitycool/cavity_model.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "cavitycool/errors.hpp"

namespace cavitycool::cavity {

namespace {

using core::Complex;
using core::HilbertSpace;

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr Complex kMinusI{0.0, -1.0};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// The two laser-coupling operators summed over both atoms.
Operator lowering_sum(int lower, const HilbertSpace& space) {
  return core::atom_transition(1, lower, 2, space) + core::atom_transition(2, lower, 2, space);
}

Operator decay_defect(const CavityParams& p, const HilbertSpace& space) {
  Operator d = p.kappa * core::photon_number(space);
  d += p.gamma() * core::atom_transition(1, 2, 2, space);
  d += p.gamma() * core::atom_transition(2, 2, 2, space);
  return d;
}

double amplitude_scale(const std::optional<toy::PulseSchedule>& sched, double t) {
  if (!sched) return 1.0;
  const double x = 1.0 + sched->gamma_c0 * t;
  return sched->multiplier / (x * x);
}

// Coefficients of X0 = sum_i |0><2|_i and X1 = sum_i |1><2|_i in H(t).
struct LaserCoefficients {
  Complex c0;
  Complex c1;
};

LaserCoefficients laser_coefficients(double t, const CavityParams& p, const LaserConfig& cfg,
                                     double scale) {
  const Complex e1 = std::polar(1.0, cfg.d1 * t);
  const Complex e2 = std::polar(1.0, cfg.d2 * t);
  const Complex e3 = std::polar(1.0, cfg.d3 * t);
  return {0.5 * scale * (p.omega01 * e1 + p.omega02 * e2), 0.5 * scale * p.omega1l * e3};
}

// Sparse generator -i H_cond(t) split by time dependence. Each entry carries
// the index of the coefficient it is multiplied with.
class Generator {
 public:
  Generator(const CavityParams& p, const LaserConfig& cfg, std::optional<toy::PulseSchedule> sched)
      : p_(p), cfg_(cfg), sched_(std::move(sched)), dim_(p.space().dim()) {
    const HilbertSpace space = p.space();
    const Operator fixed =
        core::jaynes_cummings(p.g, space) - Complex(0.0, 0.5) * decay_defect(p, space);
    const Operator x0 = lowering_sum(0, space);
    const Operator x1 = lowering_sum(1, space);
    const Operator parts[5] = {fixed, x0, x0.adjoint(), x1, x1.adjoint()};
    for (Eigen::Index r = 0; r < dim_; ++r) {
      for (int kind = 0; kind < 5; ++kind) {
        for (Eigen::Index c = 0; c < dim_; ++c) {
          const Complex v = parts[kind](r, c);
          if (v != Complex(0.0, 0.0)) {
            entries_.push_back({static_cast<int>(r), static_cast<int>(c), kind, kMinusI * v});
          }
        }
      }
    }
  }

  Eigen::Index dim() const noexcept { return dim_; }

  // y = -i H_cond(t) x
  void apply(double t, const StateVector& x, StateVector& y) const {
    const auto coef = coefficients(t);
    y.setZero();
    for (const auto& e : entries_) y(e.row) += coef[e.kind] * e.value * x(e.col);
  }

  // y = -i H_cond(t) rho, rho dense.
  void apply_left(double t, const Operator& rho, Operator& y) const {
    const auto coef = coefficients(t);
    y.setZero();
    for (const auto& e : entries_) {
      const Complex v = coef[e.kind] * e.value;
      for (Eigen::Index j = 0; j < dim_; ++j) y(e.row, j) += v * rho(e.col, j);
    }
  }

 private:
  struct Entry {
    int row;
    int col;
    int kind;
    Complex value;
  };

  std::array<Complex, 5> coefficients(double t) const {
    const auto lc = laser_coefficients(t, p_, cfg_, amplitude_scale(sched_, t));
    return {Complex(1.0, 0.0), lc.c0, std::conj(lc.c0), lc.c1, std::conj(lc.c1)};
  }

  CavityParams p_;
  LaserConfig cfg_;
  std::optional<toy::PulseSchedule> sched_;
  Eigen::Index dim_;
  std::vector<Entry> entries_;
};

// sqrt(rate) L as a list of nonzeros.
struct SparseJump {
  std::string label;
  double rate = 0.0;
  struct Entry {
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;
};

std::vector<SparseJump> sparse_jumps(const CavityParams& p) {
  std::vector<SparseJump> out;
  for (const auto& ch : jump_channels(p)) {
    if (ch.rate == 0.0) continue;
    SparseJump j{ch.label, ch.rate, {}};
    const double s = std::sqrt(ch.rate);
    for (Eigen::Index c = 0; c < ch.op.cols(); ++c) {
      for (Eigen::Index r = 0; r < ch.op.rows(); ++r) {
        if (ch.op(r, c) != Complex(0.0, 0.0)) {
          j.entries.push_back({static_cast<int>(r), static_cast<int>(c), s * ch.op(r, c).real()});
        }
      }
    }
    out.push_back(std::move(j));
  }
  return out;
}

double resolve_dt(const CavityParams& p, const EvolutionOptions& opts) {
  const double dt = opts.dt > 0.0 ? opts.dt : 0.005 / p.g;
  const double bound = max_step(p);
  if (dt > bound * (1.0 + 1e-12)) {
    throw DomainError("step " + fmt(dt) + " exceeds the decay-probability bound " + fmt(bound) +
                      " = 0.05/(2 Gamma + kappa n_max)");
  }
  return dt;
}

struct SampleGrid {
  double period;
  std::size_t count;  // number of intervals
};

SampleGrid resolve_grid(const CavityParams& p, const EvolutionOptions& opts) {
  if (!(opts.t_end > 0.0)) throw DomainError("t_end must be > 0, got " + fmt(opts.t_end));
  const double period = opts.sample_every > 0.0 ? opts.sample_every : 1.0 / p.g;
  const double nf = opts.t_end / period;
  const auto n = static_cast<long long>(std::llround(nf));
  if (n < 1 || std::abs(nf - static_cast<double>(n)) > 1e-9 * nf) {
    throw DomainError("t_end " + fmt(opts.t_end) + " is not a multiple of the sampling period " +
                      fmt(period));
  }
  return {period, static_cast<std::size_t>(n)};
}

// The overlap is evaluated with the target rescaled to a largest entry of 1
// and divided by both norms, so F(target) is exactly 1 despite the rounding
// of amplitudes like 1/sqrt2.
struct Target {
  StateVector v;
  double norm2 = 1.0;

  double overlap(const StateVector& psi) const {
    return clamp01(std::norm(v.dot(psi)) / (norm2 * psi.squaredNorm()));
  }
  double overlap(const Operator& rho) const {
    return clamp01(v.dot(rho * v).real() / (norm2 * rho.trace().real()));
  }
};

Target resolve_target(const CavityParams& p, const EvolutionOptions& opts) {
  const HilbertSpace space = p.space();
  StateVector t = opts.target.size() == 0 ? target_state(space) : opts.target;
  if (t.size() != space.dim()) {
    throw DomainError("target state has length " + std::to_string(t.size()) + ", expected " +
                      std::to_string(space.dim()));
  }
  if (std::abs(t.squaredNorm() - 1.0) > 1e-10) throw DomainError("target state is not normalized");
  t /= t.cwiseAbs().maxCoeff();
  const double n2 = t.squaredNorm();
  return {std::move(t), n2};
}

class Rk4 {
 public:
  explicit Rk4(Eigen::Index dim)
      : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

  void step(const Generator& gen, double t, double h, const StateVector& x, StateVector& out) {
    gen.apply(t, x, k1_);
    tmp_ = x + (0.5 * h) * k1_;
    gen.apply(t + 0.5 * h, tmp_, k2_);
    tmp_ = x + (0.5 * h) * k2_;
    gen.apply(t + 0.5 * h, tmp_, k3_);
    tmp_ = x + h * k3_;
    gen.apply(t + h, tmp_, k4_);
    out = x + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  StateVector k1_, k2_, k3_, k4_, tmp_;
};

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

void CavityParams::validate() const {
  if (!(g > 0.0)) throw DomainError("cavity model: g must be > 0, got " + fmt(g));
  const std::pair<const char*, double> nonneg[] = {{"gamma0", gamma0},   {"gamma1", gamma1},
                                                   {"kappa", kappa},     {"omega01", omega01},
                                                   {"omega02", omega02}, {"omega1l", omega1l}};
  for (const auto& [name, v] : nonneg) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string("cavity model: ") + name + " must be >= 0, got " + fmt(v));
    }
  }
  if (n_max < 0) throw DomainError("cavity model: n_max must be >= 0");
}

CavityParams CavityParams::from_cooperativity(double c, double kappa_over_gamma, double omega,
                                              int n_max) {
  if (!(c > 0.0)) throw DomainError("cooperativity must be > 0, got " + fmt(c));
  if (!(kappa_over_gamma > 0.0)) throw DomainError("kappa/Gamma must be > 0");
  const double gamma = 1.0 / std::sqrt(kappa_over_gamma * c);
  CavityParams p;
  p.g = 1.0;
  p.gamma0 = 0.5 * gamma;
  p.gamma1 = 0.5 * gamma;
  p.kappa = kappa_over_gamma * gamma;
  p.omega01 = p.omega02 = p.omega1l = omega;
  p.n_max = n_max;
  p.validate();
  return p;
}

LaserConfig LaserConfig::canonical(double g) {
  if (!(g > 0.0)) throw DomainError("canonical lasers: g must be > 0");
  return LaserConfig{-g, 0.0, -kSqrt2 * g};
}

double cooperativity(double g, double kappa, double gamma) {
  if (!(kappa > 0.0) || !(gamma > 0.0)) {
    throw DomainError("cooperativity: kappa and Gamma must be > 0 (got kappa = " + fmt(kappa) +
                      ", Gamma = " + fmt(gamma) + ")");
  }
  return g * g / (kappa * gamma);
}

AnalyticPrediction analytic_full_model(const CavityParams& p) {
  p.validate();
  if (p.omega01 != p.omega02 || p.omega01 != p.omega1l) {
    throw NotApplicableError(
        "analytic_full_model: the closed form assumes one common Rabi amplitude, got " +
        fmt(p.omega01) + ", " + fmt(p.omega02) + ", " + fmt(p.omega1l));
  }
  const double o2 = p.omega01 * p.omega01;
  const double k = p.kappa + p.gamma();
  const double denom = 12.0 * o2 + k * k;
  const double dmin = (kSqrt2 - 1.0) * p.g;
  // gamma_c <= (kappa + Gamma) / 6, so the all-zero corner has the limit 0.
  const double gamma_c = denom == 0.0 ? 0.0 : 2.0 * o2 * k / denom;
  return AnalyticPrediction{gamma_c, 1.0 - denom / (16.0 * dmin * dmin)};
}

toy::PulseSchedule cavity_pulse(const CavityParams& p) {
  const auto a = analytic_full_model(p);
  return toy::PulseSchedule{p.omega01, a.gamma_c, 6.0};
}

Operator hamiltonian(double t, const CavityParams& p, const LaserConfig& cfg, double scale) {
  p.validate();
  if (t < 0.0) throw DomainError("hamiltonian: t must be >= 0");
  const HilbertSpace space = p.space();
  const auto lc = laser_coefficients(t, p, cfg, scale);
  const Operator x0 = lowering_sum(0, space);
  const Operator x1 = lowering_sum(1, space);
  Operator laser = lc.c0 * x0 + lc.c1 * x1;
  return core::jaynes_cummings(p.g, space) + laser + Operator(laser.adjoint());
}

Operator conditional_hamiltonian(double t, const CavityParams& p, const LaserConfig& cfg,
                                 double scale) {
  return hamiltonian(t, p, cfg, scale) - Complex(0.0, 0.5) * decay_defect(p, p.space());
}

std::vector<JumpChannel> jump_channels(const CavityParams& p) {
  p.validate();
  const HilbertSpace space = p.space();
  std::vector<JumpChannel> out;
  for (int atom = 1; atom <= 2; ++atom) {
    const std::string prefix = "atom" + std::to_string(atom) + "->";
    out.push_back({prefix + "0", core::atom_transition(atom, 0, 2, space), p.gamma0});
    out.push_back({prefix + "1", core::atom_transition(atom, 1, 2, space), p.gamma1});
  }
  out.push_back({"cavity", core::annihilation(space), p.kappa});
  return out;
}

StateVector target_state(const HilbertSpace& space) {
  StateVector v = StateVector::Zero(space.dim());
  const double r = 1.0 / kSqrt2;
  v(space.index(0, 1, 0)) = r;
  v(space.index(1, 0, 0)) = r;
  return v;
}

double max_step(const CavityParams& p) {
  const double rate = 2.0 * p.gamma() + p.kappa * p.n_max;
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.05 / rate;
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 applied twice so that neighbouring (seed, index) pairs decorrelate
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master_seed) ^ index);
}

TrajectoryResult evolve_trajectory(const StateVector& psi0, const CavityParams& p,
                                   const LaserConfig& cfg, const EvolutionOptions& opts,
                                   std::uint64_t seed) {
  p.validate();
  const HilbertSpace space = p.space();
  if (psi0.size() != space.dim()) {
    throw DomainError("initial state has length " + std::to_string(psi0.size()) + ", expected " +
                      std::to_string(space.dim()));
  }
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) {
    throw DomainError("initial state is not normalized");
  }
  const double dt = resolve_dt(p, opts);
  const SampleGrid grid = resolve_grid(p, opts);
  const Target target = resolve_target(p, opts);
  const Generator gen(p, cfg, opts.schedule);
  const auto jumps = sparse_jumps(p);

  std::mt19937_64 rng(seed);
  // (0, 1]: a zero threshold could never trigger.
  auto draw = [&rng] { return 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  TrajectoryResult res;
  res.seed = seed;
  res.times.reserve(grid.count + 1);
  res.fidelity.reserve(grid.count + 1);
  auto record = [&](double t, const StateVector& psi) {
    res.times.push_back(t);
    res.fidelity.push_back(target.overlap(psi));
  };

  StateVector psi = psi0;
  StateVector next(space.dim());
  StateVector jumped(space.dim());
  Rk4 rk(space.dim());
  double threshold = draw();
  double t = 0.0;
  record(t, psi);

  std::vector<double> weights(jumps.size());
  std::size_t k = 1;
  while (k <= grid.count) {
    const double t_sample = static_cast<double>(k) * grid.period;
    double h = t_sample - t;
    bool lands = true;
    if (h > dt * (1.0 + 1e-12)) {
      h = dt;
      lands = false;
    }
    rk.step(gen, t, h, psi, next);
    const double n1 = next.squaredNorm();
    if (!(n1 <= 1.0 + 1e-9)) {
      throw IntegrationError("norm grew to " + fmt(n1) + " at t = " + fmt(t + h) +
                             "; reduce the step size");
    }
    if (n1 > threshold) {
      psi.swap(next);
      t = lands ? t_sample : t + h;
      if (lands) {
        record(t, psi);
        ++k;
      }
      continue;
    }

    // Locate the crossing by linear interpolation of the squared norm.
    const double n0 = psi.squaredNorm();
    double f = n0 > n1 ? (n0 - threshold) / (n0 - n1) : 0.0;
    f = std::clamp(f, 0.0, 1.0);
    if (f > 0.0) {
      rk.step(gen, t, f * h, psi, next);
      psi.swap(next);
    }
    const bool at_sample = lands && f >= 1.0;
    t = at_sample ? t_sample : t + f * h;

    double total = 0.0;
    for (std::size_t c = 0; c < jumps.size(); ++c) {
      double w = 0.0;
      // Each column of a jump operator has at most one entry, so the
      // squared norm is a plain sum.
      for (const auto& e : jumps[c].entries) w += e.value * e.value * std::norm(psi(e.col));
      weights[c] = w;
      total += w;
    }
    if (!(total > 0.0)) {
      throw IntegrationError("norm decayed with no populated decay channel at t = " + fmt(t));
    }
    double u = (1.0 - draw()) * total;
    std::size_t chosen = jumps.size() - 1;
    for (std::size_t c = 0; c < jumps.size(); ++c) {
      if (u < weights[c]) {
        chosen = c;
        break;
      }
      u -= weights[c];
    }
    while (weights[chosen] == 0.0) --chosen;
    jumped.setZero();
    for (const auto& e : jumps[chosen].entries) jumped(e.row) += e.value * psi(e.col);
    psi = jumped / std::sqrt(jumped.squaredNorm());
    threshold = draw();
    if (opts.record_jumps) res.jumps.push_back({t, jumps[chosen].label});
    if (at_sample) {
      record(t, psi);
      ++k;
    }
  }
  return res;
}

EnsembleResult ensemble_average(const StateVector& psi0, const CavityParams& p,
                                const LaserConfig& cfg, const EvolutionOptions& opts,
                                std::size_t n_traj, std::uint64_t master_seed, unsigned threads) {
  if (n_traj < 1) throw DomainError("ensemble_average: n_traj must be >= 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_traj));

  EvolutionOptions run_opts = opts;
  run_opts.record_jumps = false;

  std::vector<std::vector<double>> fid(n_traj);
  std::vector<double> times;
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::size_t err_index = n_traj;
  std::exception_ptr err;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_traj) return;
      try {
        auto r = evolve_trajectory(psi0, p, cfg, run_opts, trajectory_seed(master_seed, i));
        if (i == 0) times = std::move(r.times);
        fid[i] = std::move(r.fidelity);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        // Report the failure of the lowest index, independent of scheduling.
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
        next.store(n_traj);
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);

  EnsembleResult out;
  out.times = std::move(times);
  out.n_traj = n_traj;
  out.master_seed = master_seed;
  const std::size_t m = out.times.size();
  out.mean.resize(m);
  out.stderr_.resize(m);
  const double n = static_cast<double>(n_traj);
  for (std::size_t j = 0; j < m; ++j) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n_traj; ++i) s.add(fid[i][j]);
    const double mean = s.value() / n;
    double se = 0.0;
    if (n_traj > 1) {
      CompensatedSum ss;
      for (std::size_t i = 0; i < n_traj; ++i) {
        const double d = fid[i][j] - mean;
        ss.add(d * d);
      }
      se = std::sqrt(ss.value() / (n - 1.0)) / std::sqrt(n);
    }
    out.mean[j] = mean;
    out.stderr_[j] = se;
  }
  return out;
}

MasterResult master_equation_evolve(const Operator& rho0, const CavityParams& p,
                                    const LaserConfig& cfg, const EvolutionOptions& opts) {
  p.validate();
  const HilbertSpace space = p.space();
  const Eigen::Index dim = space.dim();
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw DomainError("rho0 must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  if (!core::is_hermitian(rho0, 1e-10)) throw DomainError("rho0 is not Hermitian");
  const double tr0 = rho0.trace().real();
  if (std::abs(tr0 - 1.0) > 1e-10) throw DomainError("rho0 trace is " + fmt(tr0) + ", expected 1");
  {
    const Operator herm = 0.5 * (rho0 + Operator(rho0.adjoint()));
    Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw DomainError("rho0 is not positive semidefinite");
  }
  const double dt = resolve_dt(p, opts);
  const SampleGrid grid = resolve_grid(p, opts);
  const Target target = resolve_target(p, opts);
  const Generator gen(p, cfg, opts.schedule);
  const auto jumps = sparse_jumps(p);

  Operator x(dim, dim);
  // d rho/dt = X + X^dagger + sum_k L_k rho L_k^dagger with X = -i H_cond rho.
  auto rhs = [&](double t, const Operator& rho, Operator& out) {
    gen.apply_left(t, rho, x);
    out = x + x.adjoint();
    for (const auto& j : jumps) {
      for (const auto& a : j.entries) {
        for (const auto& b : j.entries) {
          out(a.row, b.row) += a.value * b.value * rho(a.col, b.col);
        }
      }
    }
  };

  MasterResult res;
  res.times.reserve(grid.count + 1);
  res.fidelity.reserve(grid.count + 1);
  res.trace.reserve(grid.count + 1);
  auto record = [&](double t, const Operator& rho) {
    res.times.push_back(t);
    res.fidelity.push_back(target.overlap(rho));
    res.trace.push_back(rho.trace().real());
  };

  Operator rho = rho0;
  Operator k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);
  record(0.0, rho);
  const auto sub = static_cast<long long>(std::ceil(grid.period / dt - 1e-9));
  const double h = grid.period / static_cast<double>(sub);
  for (std::size_t k = 1; k <= grid.count; ++k) {
    const double t0 = static_cast<double>(k - 1) * grid.period;
    for (long long s = 0; s < sub; ++s) {
      const double t = t0 + static_cast<double>(s) * h;
      rhs(t, rho, k1);
      tmp = rho + (0.5 * h) * k1;
      rhs(t + 0.5 * h, tmp, k2);
      tmp = rho + (0.5 * h) * k2;
      rhs(t + 0.5 * h, tmp, k3);
      tmp = rho + h * k3;
      rhs(t + h, tmp, k4);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double tr = rho.trace().real();
    if (!(std::abs(tr - tr0) <= 1e-6)) {
      throw IntegrationError("density-matrix trace drifted to " + fmt(tr) + " at t = " +
                             fmt(static_cast<double>(k) * grid.period) + "; reduce the step size");
    }
    record(static_cast<double>(k) * grid.period, rho);
  }
  res.final_rho = std::move(rho);
  return res;
}

bool WindowAverage::settled() const noexcept {
  const double tol = stderr_ > 0.0 ? stderr_ : 1e-3;
  return std::abs(first_half - second_half) < tol;
}

WindowAverage stationary_window(const std::vector<double>& times, const std::vector<double>& values,
                                const std::vector<double>& stderr_values) {
  if (times.size() != values.size() || times.empty()) {
    throw DomainError("stationary_window: times and values must be non-empty and equally long");
  }
  if (!stderr_values.empty() && stderr_values.size() != values.size()) {
    throw DomainError("stationary_window: standard errors differ in length");
  }
  const double t_end = times.back();
  const double start = 0.75 * t_end;
  const double mid = 0.875 * t_end;
  CompensatedSum all, first, second, se;
  std::size_t n = 0, n1 = 0, n2 = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < start) continue;
    all.add(values[i]);
    if (!stderr_values.empty()) se.add(stderr_values[i]);
    ++n;
    if (times[i] < mid) {
      first.add(values[i]);
      ++n1;
    } else {
      second.add(values[i]);
      ++n2;
    }
  }
  WindowAverage w;
  w.samples = n;
  w.mean = all.value() / static_cast<double>(n);
  w.stderr_ = stderr_values.empty() ? 0.0 : se.value() / static_cast<double>(n);
  w.first_half = n1 ? first.value() / static_cast<double>(n1) : w.mean;
  w.second_half = n2 ? second.value() / static_cast<double>(n2) : w.mean;
  return w;
}

}  // namespace cavitycool::cavity
