// Copyright 2026 The cohframe Authors
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
#include <vector>

#include "cohframe/matcore.hpp"
#include "cohframe/random.hpp"

namespace cohframe {

inline constexpr double kStateTol = 1e-10;
inline constexpr double kIncoherenceTol = 1e-9;

/// A validated density matrix in the fixed incoherent basis {|0>, ..., |d-1>}.
/// Only make_density() builds one, so every instance is Hermitian, unit-trace
/// and positive semidefinite up to the tolerance it was validated with.
class DensityState {
 public:
  Eigen::Index dim() const { return mat_.rows(); }
  const CMat& mat() const { return mat_; }

 private:
  explicit DensityState(CMat m) : mat_(std::move(m)) {}
  friend DensityState make_density(const CMat& mat, double tol);

  CMat mat_;
};

/// Validates and wraps `mat`. The stored matrix is the symmetrized
/// (mat + mat^dagger)/2.
DensityState make_density(const CMat& mat, double tol = kStateTol);

/// Weighted blocks p_1 rho_1 (+) ... (+) p_N rho_N on orthogonal subspaces.
struct BlockSpec {
  std::vector<double> weights;
  std::vector<DensityState> blocks;

  void validate() const;
};

/// |Psi_d><Psi_d| with |Psi_d> = d^{-1/2} sum_n |n>.
DensityState max_coherent(Eigen::Index d);

DensityState block_mix(const BlockSpec& spec);

/// Keeps the diagonal of rho.
DensityState dephase(const DensityState& rho);

bool is_incoherent(const DensityState& rho, double tol = kIncoherenceTol);

/// Sum of off-diagonal moduli.
double offdiagonal_mass(const CMat& m);

/// G G^dagger / Tr(G G^dagger) with G a d x rank Ginibre matrix.
DensityState random_density(Eigen::Index d, Eigen::Index rank,
                            std::uint64_t seed);

/// diag(p) with p uniform on the simplex; sparse_zeros forces some entries
/// to zero so that embedded blocks are exercised.
DensityState random_incoherent_state(Eigen::Index d, std::uint64_t seed,
                                     bool sparse_zeros = false);

/// rho (+) 0_extra.
DensityState pad_zeros(const DensityState& rho, Eigen::Index extra);

/// sum_n p_n rho_n for states of a common dimension.
DensityState mixture(const std::vector<double>& weights,
                     const std::vector<DensityState>& states);

/// sum_n p_n |n><n| (x) rho_n for states of a common dimension.
DensityState flagged_state(const std::vector<double>& weights,
                           const std::vector<DensityState>& states);

struct CounterexampleStates {
  DensityState rho;   // 5x5, rho_1/2 (+) rho_2/2
  DensityState rho1;  // max_coherent(2)
  DensityState rho2;  // max_coherent(3)
};

CounterexampleStates counterexample_state();

/// BlockSpec for the counterexample: weights (1/2, 1/2) over rho1, rho2.
BlockSpec counterexample_spec();

}  // namespace cohframe
