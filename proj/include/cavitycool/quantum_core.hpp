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

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cavitycool::core {

using Complex = std::complex<double>;

/// Dense complex operator on the two-atom/cavity product space.
using Operator = Eigen::MatrixXcd;
/// Complex amplitude vector over the bare basis.
using StateVector = Eigen::VectorXcd;
/// Row-major sparse view used by the propagators; same semantics as Operator.
using SparseOperator = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr int kAtomLevels = 3;

/// Bare product state |j1 j2, n>.
struct BareState {
  int atom1 = 0;
  int atom2 = 0;
  int photons = 0;

  friend bool operator==(const BareState&, const BareState&) = default;
};

/// Product space 3 (x) 3 (x) (n_max + 1) with the fixed ordering
///   index(j1, j2, n) = (3 j1 + j2) (n_max + 1) + n.
class HilbertSpace {
 public:
  /// Throws DomainError for n_max < 0.
  explicit HilbertSpace(int n_max = 3);

  int n_max() const noexcept { return n_max_; }
  int photon_levels() const noexcept { return n_max_ + 1; }
  Eigen::Index dim() const noexcept { return 9 * static_cast<Eigen::Index>(n_max_ + 1); }

  /// Throws DomainError when a level is outside {0,1,2} or n outside [0, n_max].
  Eigen::Index index(int j1, int j2, int n) const;
  Eigen::Index index(const BareState& s) const { return index(s.atom1, s.atom2, s.photons); }

  /// Inverse of index(); throws DomainError outside [0, dim).
  BareState state_at(Eigen::Index i) const;

  StateVector basis_state(int j1, int j2, int n) const;

  friend bool operator==(const HilbertSpace& a, const HilbertSpace& b) noexcept {
    return a.n_max_ == b.n_max_;
  }

 private:
  int n_max_;
};

Operator identity(const HilbertSpace& space);

/// Cavity annihilation operator c; identity on both atoms.
Operator annihilation(const HilbertSpace& space);

Operator creation(const HilbertSpace& space);

/// c^dagger c.
Operator photon_number(const HilbertSpace& space);

/// |a><b| on atom `atom` (1 or 2), identity elsewhere. Throws DomainError for
/// an invalid atom index or level.
Operator atom_transition(int atom, int a, int b, const HilbertSpace& space);

/// Resonant atom-cavity exchange g sum_i (|1>_i<2| c^dagger + H.c.).
Operator jaynes_cummings(double g, const HilbertSpace& space);

/// Swaps the two atoms: |j1 j2, n> -> |j2 j1, n>.
Operator exchange(const HilbertSpace& space);

/// <psi|A|psi>. Throws DomainError on dimension mismatch.
Complex expectation(const Operator& a, const StateVector& psi);

bool is_hermitian(const Operator& a, double tol = 1e-12);

SparseOperator to_sparse(const Operator& a);

}  // namespace cavitycool::core
