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

#include "cavitycool/quantum_core.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cavitycool/errors.hpp"

namespace cavitycool::core {

namespace {

void check_level(int level, const char* what) {
  if (level < 0 || level >= kAtomLevels) {
    throw DomainError(std::string(what) + " level " + std::to_string(level) +
                      " outside {0,1,2}");
  }
}

}  // namespace

HilbertSpace::HilbertSpace(int n_max) : n_max_(n_max) {
  if (n_max < 0) {
    throw DomainError("photon truncation n_max must be >= 0, got " + std::to_string(n_max));
  }
}

Eigen::Index HilbertSpace::index(int j1, int j2, int n) const {
  check_level(j1, "atom 1");
  check_level(j2, "atom 2");
  if (n < 0 || n > n_max_) {
    throw DomainError("photon number " + std::to_string(n) + " outside [0, " +
                      std::to_string(n_max_) + "]");
  }
  return static_cast<Eigen::Index>(kAtomLevels * j1 + j2) * photon_levels() + n;
}

BareState HilbertSpace::state_at(Eigen::Index i) const {
  if (i < 0 || i >= dim()) {
    throw DomainError("basis index " + std::to_string(i) + " outside [0, " +
                      std::to_string(dim()) + ")");
  }
  const auto levels = static_cast<Eigen::Index>(photon_levels());
  const auto atoms = i / levels;
  return BareState{static_cast<int>(atoms / kAtomLevels), static_cast<int>(atoms % kAtomLevels),
                   static_cast<int>(i % levels)};
}

StateVector HilbertSpace::basis_state(int j1, int j2, int n) const {
  StateVector v = StateVector::Zero(dim());
  v(index(j1, j2, n)) = 1.0;
  return v;
}

Operator identity(const HilbertSpace& space) {
  return Operator::Identity(space.dim(), space.dim());
}

Operator annihilation(const HilbertSpace& space) {
  Operator c = Operator::Zero(space.dim(), space.dim());
  for (int j1 = 0; j1 < kAtomLevels; ++j1) {
    for (int j2 = 0; j2 < kAtomLevels; ++j2) {
      for (int n = 1; n <= space.n_max(); ++n) {
        c(space.index(j1, j2, n - 1), space.index(j1, j2, n)) = std::sqrt(static_cast<double>(n));
      }
    }
  }
  return c;
}

Operator creation(const HilbertSpace& space) { return annihilation(space).adjoint(); }

Operator photon_number(const HilbertSpace& space) {
  Operator n = Operator::Zero(space.dim(), space.dim());
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    n(i, i) = static_cast<double>(space.state_at(i).photons);
  }
  return n;
}

Operator atom_transition(int atom, int a, int b, const HilbertSpace& space) {
  if (atom != 1 && atom != 2) {
    throw DomainError("atom index must be 1 or 2, got " + std::to_string(atom));
  }
  check_level(a, "target");
  check_level(b, "source");
  Operator op = Operator::Zero(space.dim(), space.dim());
  for (int other = 0; other < kAtomLevels; ++other) {
    for (int n = 0; n <= space.n_max(); ++n) {
      if (atom == 1) {
        op(space.index(a, other, n), space.index(b, other, n)) = 1.0;
      } else {
        op(space.index(other, a, n), space.index(other, b, n)) = 1.0;
      }
    }
  }
  return op;
}

Operator jaynes_cummings(double g, const HilbertSpace& space) {
  const Operator cdag = creation(space);
  Operator h = Operator::Zero(space.dim(), space.dim());
  for (int atom = 1; atom <= 2; ++atom) {
    h += atom_transition(atom, 1, 2, space) * cdag;
  }
  h *= g;
  return h + Operator(h.adjoint());
}

Operator exchange(const HilbertSpace& space) {
  Operator p = Operator::Zero(space.dim(), space.dim());
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    const BareState s = space.state_at(i);
    p(space.index(s.atom2, s.atom1, s.photons), i) = 1.0;
  }
  return p;
}

Complex expectation(const Operator& a, const StateVector& psi) {
  if (a.rows() != psi.size() || a.cols() != psi.size()) {
    throw DomainError("expectation: operator is " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + " but state has length " +
                      std::to_string(psi.size()));
  }
  return psi.dot(a * psi);
}

bool is_hermitian(const Operator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
    }
  }
  return true;
}

SparseOperator to_sparse(const Operator& a) {
  std::vector<Eigen::Triplet<Complex>> entries;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != Complex(0.0, 0.0)) entries.emplace_back(i, j, a(i, j));
    }
  }
  SparseOperator s(a.rows(), a.cols());
  s.setFromTriplets(entries.begin(), entries.end());
  s.makeCompressed();
  return s;
}

}  // namespace cavitycool::core
