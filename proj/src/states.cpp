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

#include "cohframe/states.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace cohframe {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void require_common_dim(const std::vector<DensityState>& states) {
  if (states.empty()) {
    throw Error(ErrorKind::InvalidArgument, "empty ensemble");
  }
  for (const auto& s : states) {
    if (s.dim() != states.front().dim()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "ensemble members have dimensions " +
                      std::to_string(states.front().dim()) + " and " +
                      std::to_string(s.dim()));
    }
  }
}

void require_distribution(const std::vector<double>& weights, std::size_t n) {
  if (weights.size() != n) {
    throw Error(ErrorKind::InvalidArgument,
                std::to_string(weights.size()) + " weights for " +
                    std::to_string(n) + " states");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "negative weight " + fmt(w));
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument,
                "weights sum to 1 + " + fmt(total - 1.0));
  }
}

}  // namespace

DensityState make_density(const CMat& mat, double tol) {
  require_square(mat);
  if (mat.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "zero-dimensional state");
  }
  if (!mat.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "non-finite entry");
  }
  const double asym = hermitian_asymmetry(mat);
  if (asym > tol) {
    throw Error(ErrorKind::NotHermitian,
                "max |rho - rho^dagger| = " + fmt(asym));
  }
  CMat sym = (mat + mat.adjoint()) / 2.0;
  const double trace = sym.trace().real();
  if (std::abs(trace - 1.0) > tol) {
    throw Error(ErrorKind::NotUnitTrace, "trace = 1 + " + fmt(trace - 1.0));
  }
  const double lowest = herm_eig(sym).eigenvalues.minCoeff();
  if (lowest < -tol) {
    throw Error(ErrorKind::NotPSD, "minimum eigenvalue " + fmt(lowest));
  }
  return DensityState(std::move(sym));
}

void BlockSpec::validate() const {
  if (blocks.empty()) {
    throw Error(ErrorKind::InvalidArgument, "block spec without blocks");
  }
  require_distribution(weights, blocks.size());
}

DensityState max_coherent(Eigen::Index d) {
  if (d < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_coherent needs d >= 1");
  }
  return make_density(CMat::Constant(d, d, 1.0 / static_cast<double>(d)));
}

DensityState block_mix(const BlockSpec& spec) {
  spec.validate();
  CMat out(0, 0);
  for (std::size_t k = 0; k < spec.blocks.size(); ++k) {
    out = direct_sum(out, spec.weights[k] * spec.blocks[k].mat());
  }
  return make_density(out);
}

DensityState dephase(const DensityState& rho) {
  return make_density(CMat(rho.mat().diagonal().asDiagonal()));
}

double offdiagonal_mass(const CMat& m) {
  return m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
}

bool is_incoherent(const DensityState& rho, double tol) {
  const CMat& m = rho.mat();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

DensityState random_density(Eigen::Index d, Eigen::Index rank,
                            std::uint64_t seed) {
  if (d < 1 || rank < 1 || rank > d) {
    throw Error(ErrorKind::InvalidArgument,
                "random_density needs 1 <= rank <= d, got rank " +
                    std::to_string(rank) + ", d " + std::to_string(d));
  }
  Rng rng = make_rng(seed);
  const CMat g = ginibre(d, rank, rng);
  const CMat gg = g * g.adjoint();
  return make_density(gg / gg.trace().real());
}

DensityState random_incoherent_state(Eigen::Index d, std::uint64_t seed,
                                     bool sparse_zeros) {
  Rng rng = make_rng(seed);
  RVec p = random_probabilities(d, rng);
  if (sparse_zeros && d > 1) {
    const auto keep = uniform_int<Eigen::Index>(rng, 0, d - 1);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i != keep && std::bernoulli_distribution(0.5)(rng)) p(i) = 0.0;
    }
    p /= p.sum();
  }
  return make_density(CMat(p.cast<cplx>().asDiagonal()));
}

DensityState pad_zeros(const DensityState& rho, Eigen::Index extra) {
  return make_density(direct_sum(rho.mat(), CMat::Zero(extra, extra)));
}

DensityState mixture(const std::vector<double>& weights,
                     const std::vector<DensityState>& states) {
  require_common_dim(states);
  require_distribution(weights, states.size());
  CMat out = CMat::Zero(states.front().dim(), states.front().dim());
  for (std::size_t n = 0; n < states.size(); ++n) {
    out += weights[n] * states[n].mat();
  }
  return make_density(out);
}

DensityState flagged_state(const std::vector<double>& weights,
                           const std::vector<DensityState>& states) {
  require_common_dim(states);
  require_distribution(weights, states.size());
  const auto flags = static_cast<Eigen::Index>(states.size());
  CMat out = CMat::Zero(flags * states.front().dim(),
                        flags * states.front().dim());
  for (Eigen::Index n = 0; n < flags; ++n) {
    out += weights[n] * kron(basis_projector(flags, n), states[n].mat());
  }
  return make_density(out);
}

CounterexampleStates counterexample_state() {
  auto rho1 = max_coherent(2);
  auto rho2 = max_coherent(3);
  auto rho = block_mix(BlockSpec{{0.5, 0.5}, {rho1, rho2}});
  return {std::move(rho), std::move(rho1), std::move(rho2)};
}

BlockSpec counterexample_spec() {
  return BlockSpec{{0.5, 0.5}, {max_coherent(2), max_coherent(3)}};
}

}  // namespace cohframe
