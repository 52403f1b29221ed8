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

#include <gtest/gtest.h>

#include "cohframe/matcore.hpp"
#include "testing.hpp"

namespace cohframe {
namespace {

using testing::MatNear;
using testing::random_hermitian;

TEST(HermEig, IdentityHasUnitSpectrum) {
  const auto eig = herm_eig(CMat::Identity(3, 3));
  EXPECT_TRUE(eig.eigenvalues.isApprox(RVec::Ones(3)));
}

TEST(HermEig, PauliX) {
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  const auto eig = herm_eig(x);
  EXPECT_NEAR(eig.eigenvalues(0), -1.0, 1e-14);
  EXPECT_NEAR(eig.eigenvalues(1), 1.0, 1e-14);
}

TEST(HermEig, RandomReconstructionAndOrthonormality) {
  Rng rng = make_rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat m = random_hermitian(6, rng);
    const auto eig = herm_eig(m);
    const double radius = eig.eigenvalues.cwiseAbs().maxCoeff();
    EXPECT_TRUE(MatNear(eig.reconstruct(), m, 1e-10 * std::max(1.0, radius)));
    EXPECT_TRUE(MatNear(eig.eigenvectors.adjoint() * eig.eigenvectors,
                        CMat::Identity(6, 6), 1e-10));
    for (Eigen::Index k = 1; k < 6; ++k) {
      EXPECT_LE(eig.eigenvalues(k - 1), eig.eigenvalues(k));
    }
    EXPECT_NEAR(eig.eigenvalues.sum(), m.trace().real(), 1e-10);
  }
}

TEST(HermEig, RealScalarInstantiation) {
  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 1, 2;
  const auto eig = herm_eig(m);
  EXPECT_NEAR(eig.eigenvalues(0), 1.0, 1e-14);
  EXPECT_NEAR(eig.eigenvalues(1), 3.0, 1e-14);
}

TEST(HermEig, RejectsNonSquare) {
  try {
    herm_eig(CMat::Zero(2, 3));
    FAIL() << "expected NonSquare";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonSquare);
  }
}

TEST(HermEig, AsymmetryThreshold) {
  CMat m = CMat::Identity(2, 2);
  m(0, 1) = 1e-12;  // below threshold: symmetrized silently
  EXPECT_NO_THROW(herm_eig(m));
  m(0, 1) = 1e-6;
  try {
    herm_eig(m);
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
  EXPECT_NO_THROW(herm_eig(m, 1e-5));
}

TEST(TraceNorm, Examples) {
  EXPECT_DOUBLE_EQ(trace_norm(testing::diag({1.0, -1.0})), 2.0);
  EXPECT_DOUBLE_EQ(trace_norm(CMat::Zero(3, 3)), 0.0);

  // |Psi_2><Psi_2| - I/2 = [[0, 1/2], [1/2, 0]], eigenvalues -1/2 and 1/2.
  const CMat m = CMat::Constant(2, 2, 0.5) - CMat::Identity(2, 2) / 2.0;
  const auto [lo, hi] = testing::eig2x2(m);
  EXPECT_NEAR(lo, -0.5, 1e-15);
  EXPECT_NEAR(hi, 0.5, 1e-15);
  EXPECT_NEAR(trace_norm(m), 1.0, 1e-14);
}

TEST(TraceNorm, Properties) {
  Rng rng = make_rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    const CMat a = random_hermitian(d, rng);
    const CMat b = random_hermitian(d, rng);
    const CMat u = random_unitary(d, rng);
    EXPECT_NEAR(trace_norm(u * a * u.adjoint()), trace_norm(a), 1e-9);
    EXPECT_GE(trace_norm(a) + trace_norm(b), trace_norm(CMat(a + b)) - 1e-9);
    const CMat c = random_hermitian(1 + trial % 3, rng);
    EXPECT_NEAR(trace_norm(direct_sum(a, c)), trace_norm(a) + trace_norm(c), 1e-9);
  }
}

TEST(DirectSum, Examples) {
  CMat one(1, 1), two(1, 1);
  one << 1.0;
  two << 2.0;
  EXPECT_TRUE(MatNear(direct_sum(one, two),
                      testing::diag({1.0, 2.0}), 0.0));

  Rng rng = make_rng(3);
  const CMat a = ginibre(3, 2, rng);
  EXPECT_TRUE(MatNear(direct_sum(a, CMat(0, 0)), a, 0.0));

  const CMat b = ginibre(2, 4, rng);
  const CMat s = direct_sum(a, b);
  ASSERT_EQ(s.rows(), 5);
  ASSERT_EQ(s.cols(), 6);
  EXPECT_EQ(s.topRightCorner(3, 4).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.bottomLeftCorner(2, 2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(DirectSum, TraceIsAdditive) {
  Rng rng = make_rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat a = ginibre(1 + trial % 4, 1 + trial % 4, rng);
    const CMat b = ginibre(1 + trial % 3, 1 + trial % 3, rng);
    EXPECT_NEAR(std::abs(direct_sum(a, b).trace() - (a.trace() + b.trace())), 0.0, 1e-12);
  }
}

TEST(Kron, Examples) {
  EXPECT_TRUE(MatNear(kron(CMat::Identity(2, 2), CMat::Identity(3, 3)),
                      CMat::Identity(6, 6), 0.0));

  Rng rng = make_rng(5);
  const CMat rho = random_hermitian(3, rng);
  const CMat flagged = kron(basis_projector(2, 0), rho);
  EXPECT_TRUE(MatNear(flagged.topLeftCorner(3, 3), rho, 0.0));
  EXPECT_EQ(flagged.bottomRows(3).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(flagged.rightCols(3).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Kron, TraceIsMultiplicative) {
  Rng rng = make_rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat a = ginibre(1 + trial % 3, 1 + trial % 3, rng);
    const CMat b = ginibre(2 + trial % 2, 2 + trial % 2, rng);
    EXPECT_NEAR(std::abs(kron(a, b).trace() - a.trace() * b.trace()), 0.0, 1e-12);
  }
}

TEST(MatSqrt, Examples) {
  const CMat m = testing::diag({4.0, 9.0});
  EXPECT_TRUE(MatNear(mat_sqrt_psd(m),
                      testing::diag({2.0, 3.0}), 1e-14));
  EXPECT_TRUE(MatNear(mat_sqrt_psd(CMat::Identity(4, 4)), CMat::Identity(4, 4), 1e-14));
}

TEST(MatSqrt, RandomRoundTrip) {
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 1 + trial % 6;
    const CMat g = ginibre(d, 1 + trial % d, rng);
    const CMat psd = g * g.adjoint();
    const CMat root = mat_sqrt_psd(psd);
    EXPECT_TRUE(MatNear(root * root, psd, 1e-9));
    EXPECT_LT(hermitian_asymmetry(root), 1e-12);
  }
}

TEST(MatSqrt, RejectsNegativeSpectrum) {
  const CMat slightly = testing::diag({1.0, -1e-11});
  EXPECT_NO_THROW(mat_sqrt_psd(slightly));
  const CMat clearly = testing::diag({1.0, -1e-6});
  try {
    mat_sqrt_psd(clearly);
    FAIL() << "expected NotPSD";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
}

}  // namespace
}  // namespace cohframe
