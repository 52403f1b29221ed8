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
#include <random>

#include "cohframe/matcore.hpp"

namespace cohframe {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent per-trial streams.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index = 0) {
  return mix_seed(mix_seed(mix_seed(seed) ^ stream) ^ index);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix_seed(seed)); }

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
inline cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline CMat ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMat g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = complex_gaussian(rng);
  }
  return g;
}

/// Uniform draw from the probability simplex (flat Dirichlet).
inline RVec random_probabilities(Eigen::Index n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  RVec p(n);
  for (Eigen::Index i = 0; i < n; ++i) p(i) = expo(rng);
  return p / p.sum();
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
inline CMat random_unitary(Eigen::Index d, Rng& rng) {
  const CMat g = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(d, d);
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

template <typename T>
T uniform_int(Rng& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

}  // namespace cohframe
