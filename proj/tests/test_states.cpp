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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "cohframe/states.hpp"
#include "testing.hpp"

namespace cohframe {
namespace {

using testing::diag;
using testing::MatNear;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Parse;
}

TEST(MakeDensity, ValidationErrors) {
  EXPECT_NO_THROW(make_density(CMat::Identity(2, 2) / 2.0));
  EXPECT_EQ(kind_of([] { make_density(diag({0.7, 0.4})); }), ErrorKind::NotUnitTrace);

  CMat m(2, 2);
  m << 0.5, 0.6, 0.6, 0.5;
  // Independent 2x2 formula: eigenvalues 0.5 -/+ 0.6.
  EXPECT_NEAR(testing::eig2x2(m).first, -0.1, 1e-15);
  EXPECT_EQ(kind_of([&] { make_density(m); }), ErrorKind::NotPSD);

  CMat asym = CMat::Identity(2, 2) / 2.0;
  asym(0, 1) = 0.1;
  EXPECT_EQ(kind_of([&] { make_density(asym); }), ErrorKind::NotHermitian);
  EXPECT_EQ(kind_of([] { make_density(CMat::Zero(2, 3)); }), ErrorKind::NonSquare);

  CMat nan = CMat::Identity(2, 2) / 2.0;
  nan(0, 0) = std::nan("");
  EXPECT_EQ(kind_of([&] { make_density(nan); }), ErrorKind::InvalidArgument);
}

TEST(MakeDensity, DiagnosticNamesMagnitude) {
  try {
    make_density(diag({0.7, 0.4}));
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("NotUnitTrace"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("1.000e-01"), std::string::npos);
  }
}

TEST(MaxCoherent, Entries) {
  EXPECT_TRUE(MatNear(max_coherent(1).mat(), CMat::Ones(1, 1), 0.0));
  EXPECT_TRUE(MatNear(max_coherent(2).mat(), CMat::Constant(2, 2, 0.5), 0.0));
  const auto psi3 = max_coherent(3);
  EXPECT_TRUE(MatNear(psi3.mat(), CMat::Constant(3, 3, 1.0 / 3.0), 1e-16));
  EXPECT_NEAR((psi3.mat() * psi3.mat()).trace().real(), 1.0, 1e-14);
  EXPECT_EQ(kind_of([] { max_coherent(0); }), ErrorKind::InvalidArgument);
}

TEST(BlockMix, Examples) {
  const auto rho = random_density(3, 2, 1);
  EXPECT_TRUE(MatNear(block_mix({{1.0}, {rho}}).mat(), rho.mat(), 1e-15));

  const auto ket0 = make_density(CMat::Ones(1, 1));
  EXPECT_TRUE(MatNear(block_mix({{0.5, 0.5}, {ket0, ket0}}).mat(), diag({0.5, 0.5}), 0.0));
}

TEST(BlockMix, RejectsBadWeights) {
  const auto a = max_coherent(2);
  EXPECT_EQ(kind_of([&] { block_mix({{0.6, 0.6}, {a, a}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { block_mix({{1.2, -0.2}, {a, a}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { block_mix({{1.0}, {a, a}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { block_mix({{}, {}}); }), ErrorKind::InvalidArgument);
}

TEST(BlockMix, SpectrumIsUnionOfWeightedBlocks) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng = make_rng(seed);
    const auto n = uniform_int<std::size_t>(rng, 2, 3);
    BlockSpec spec;
    std::vector<double> expected;
    const RVec p = random_probabilities(static_cast<Eigen::Index>(n), rng);
    for (std::size_t k = 0; k < n; ++k) {
      const auto d = uniform_int<Eigen::Index>(rng, 1, 4);
      spec.blocks.push_back(random_density(d, uniform_int<Eigen::Index>(rng, 1, d), rng()));
      spec.weights.push_back(p(k));
      const RVec block = herm_eigenvalues(spec.blocks.back().mat());
      for (double x : block) expected.push_back(p(k) * x);
    }
    std::sort(expected.begin(), expected.end());
    const RVec actual = herm_eigenvalues(block_mix(spec).mat());
    ASSERT_EQ(actual.size(), static_cast<Eigen::Index>(expected.size()));
    for (Eigen::Index i = 0; i < actual.size(); ++i) {
      EXPECT_NEAR(actual(i), expected[i], 1e-10);
    }
  }
}

TEST(Dephase, Examples) {
  EXPECT_TRUE(MatNear(dephase(max_coherent(2)).mat(), diag({0.5, 0.5}), 0.0));
  const auto d = make_density(diag({0.2, 0.3, 0.5}));
  EXPECT_TRUE(MatNear(dephase(d).mat(), d.mat(), 0.0));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = random_density(4, 1 + seed % 4, seed);
    const auto once = dephase(rho);
    EXPECT_NEAR(once.mat().trace().real(), rho.mat().trace().real(), 1e-14);
    EXPECT_TRUE(MatNear(dephase(once).mat(), once.mat(), 0.0));
    EXPECT_TRUE(is_incoherent(once));
  }
}

TEST(IsIncoherent, Examples) {
  EXPECT_TRUE(is_incoherent(make_density(diag({0.3, 0.7}))));
  EXPECT_FALSE(is_incoherent(max_coherent(2)));
  CMat almost = diag({0.5, 0.5});
  almost(0, 1) = almost(1, 0) = 1e-10;
  EXPECT_TRUE(is_incoherent(make_density(almost)));
  EXPECT_FALSE(is_incoherent(make_density(almost), 1e-11));
}

TEST(RandomDensity, RankOneIsPure) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rho = random_density(2, 1, seed);
    EXPECT_NEAR((rho.mat() * rho.mat()).trace().real(), 1.0, 1e-10);
  }
}

TEST(RandomDensity, Deterministic) {
  EXPECT_EQ(max_entry_diff(random_density(4, 2, 99).mat(), random_density(4, 2, 99).mat()), 0.0);
  EXPECT_GT(max_entry_diff(random_density(4, 2, 99).mat(), random_density(4, 2, 98).mat()), 0.0);
}

TEST(RandomDensity, FullRank) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_GT(herm_eigenvalues(random_density(4, 4, seed).mat()).minCoeff(), 0.0);
  }
}

TEST(RandomDensity, RankOutOfRange) {
  EXPECT_EQ(kind_of([] { random_density(3, 0, 1); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { random_density(3, 4, 1); }), ErrorKind::InvalidArgument);
}

TEST(Counterexample, Entries) {
  const auto ce = counterexample_state();
  ASSERT_EQ(ce.rho.dim(), 5);
  EXPECT_TRUE(MatNear(ce.rho.mat().topLeftCorner(2, 2), CMat::Constant(2, 2, 0.25), 1e-16));
  EXPECT_TRUE(MatNear(ce.rho.mat().bottomRightCorner(3, 3), CMat::Constant(3, 3, 1.0 / 6.0), 1e-16));
  EXPECT_EQ(ce.rho.mat().topRightCorner(2, 3).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(ce.rho.mat().trace().real(), 1.0, 1e-15);
  EXPECT_TRUE(MatNear(dephase(ce.rho).mat(),
                      diag({0.25, 0.25, 1.0 / 6, 1.0 / 6, 1.0 / 6}), 1e-16));
  EXPECT_TRUE(MatNear(ce.rho1.mat(), max_coherent(2).mat(), 0.0));
  EXPECT_TRUE(MatNear(ce.rho2.mat(), max_coherent(3).mat(), 0.0));
  EXPECT_TRUE(MatNear(block_mix(counterexample_spec()).mat(), ce.rho.mat(), 0.0));
}

TEST(Ensembles, MixtureAndFlags) {
  const auto a = random_density(2, 2, 1);
  const auto b = random_density(2, 1, 2);
  const auto mixed = mixture({0.25, 0.75}, {a, b});
  EXPECT_TRUE(MatNear(mixed.mat(), 0.25 * a.mat() + 0.75 * b.mat(), 1e-15));

  const auto flagged = flagged_state({0.25, 0.75}, {a, b});
  EXPECT_TRUE(MatNear(flagged.mat(), direct_sum(0.25 * a.mat(), 0.75 * b.mat()), 1e-15));
  EXPECT_EQ(kind_of([&] { mixture({0.5, 0.5}, {a, max_coherent(3)}); }),
            ErrorKind::DimensionMismatch);

  const auto padded = pad_zeros(a, 3);
  EXPECT_EQ(padded.dim(), 5);
  EXPECT_TRUE(MatNear(padded.mat().topLeftCorner(2, 2), a.mat(), 0.0));
}

TEST(RandomIncoherentState, IsDiagonal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rho = random_incoherent_state(4, seed, seed % 2 == 1);
    EXPECT_TRUE(is_incoherent(rho, 0.0));
    EXPECT_NEAR(rho.mat().trace().real(), 1.0, 1e-14);
  }
}

}  // namespace
}  // namespace cohframe
