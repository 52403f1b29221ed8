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
#include <limits>

#include "cohframe/matcore.hpp"
#include "cohframe/random.hpp"
#include "cohframe/states.hpp"

namespace cohframe {

/// Feasible diagonals D for min_D ||rho - diag(D)||_tr.
enum class DiagConstraint {
  Simplex,        // diagonal of an incoherent state
  NonnegOrthant,  // lambda * delta with lambda >= 0
};

enum class OptMethod {
  Admm,         // splitting X = rho - diag(D), eigenvalue soft-thresholding
  Subgradient,  // projected subgradient with alpha_k = alpha_0 / sqrt(k+1)
};

struct OptOptions {
  double tol = 1e-6;
  std::uint64_t seed = 0;
  int starts = 5;  // dephased diagonal plus starts-1 random feasible points
  OptMethod method = OptMethod::Admm;
  std::size_t max_iterations = 50000;
  std::size_t stall_window = 200;
  double step0 = 0.5;
};

struct OptResult {
  double value = std::numeric_limits<double>::infinity();
  RVec argmin;
  std::size_t iterations = 0;
  bool converged = false;
  /// Best dual bound seen; value - lower_bound bounds the suboptimality.
  double lower_bound = -std::numeric_limits<double>::infinity();
};

/// ||rho - diag(d)||_tr.
double diag_objective(const CMat& rho, const RVec& diag);

/// Euclidean projection onto {x >= 0, sum x = 1} (sort and threshold).
RVec project_simplex(const RVec& v);

RVec project_orthant(const RVec& v);

RVec project(const RVec& v, DiagConstraint c);

bool is_feasible(const RVec& d, DiagConstraint c, double tol = 1e-12);

/// Dual bound from any Hermitian W: W is rescaled (and, for the orthant,
/// has its positive diagonal removed) into the dual feasible set first.
double dual_bound(const CMat& rho, const CMat& w, DiagConstraint c);

/// One run from a given feasible start.
OptResult minimize_from(const DensityState& rho, DiagConstraint c,
                        const RVec& start, const OptOptions& opts = {});

/// Multi-start minimization; the best run is kept and its value is
/// re-evaluated at the argmin with a fresh eigendecomposition.
OptResult minimize_trace_distance(const DensityState& rho, DiagConstraint c,
                                  const OptOptions& opts = {});

/// Random point of the feasible set. Orthant points are drawn with total
/// mass uniform in [0, 2].
RVec random_feasible_point(Eigen::Index d, DiagConstraint c, Rng& rng);

inline constexpr Eigen::Index kGridOracleMaxDim = 4;

/// Brute-force minimum over a uniform grid of feasible diagonals: the simplex
/// points k/resolution with sum k = resolution, or for the orthant the box
/// [0, 1]^d in steps of 1/resolution. Always an upper bound on the minimum.
double grid_oracle(const DensityState& rho, DiagConstraint c,
                   std::size_t resolution);

}  // namespace cohframe
