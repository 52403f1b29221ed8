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

#include <cmath>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "cohframe/error.hpp"

namespace cohframe {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Default tolerances. Every function taking one of these accepts an override.
inline constexpr double kHermitianTol = 1e-8;  // asymmetry that is an error
inline constexpr double kPsdTol = 1e-8;        // negative eigenvalues rejected
inline constexpr double kSignZeroTol = 1e-12;  // spectral sign treats as zero

template <typename Scalar>
struct EigDecomp {
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  Eigen::Matrix<RealScalar, Eigen::Dynamic, 1> eigenvalues;  // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;

  auto reconstruct() const {
    return (eigenvectors * eigenvalues.template cast<Scalar>().asDiagonal() *
            eigenvectors.adjoint())
        .eval();
  }
};

/// Largest entrywise modulus of m - m^dagger.
template <typename Derived>
double hermitian_asymmetry(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return static_cast<double>((m - m.adjoint()).cwiseAbs().maxCoeff());
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::NonSquare, "matrix is " + std::to_string(m.rows()) +
                                          "x" + std::to_string(m.cols()));
  }
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m,
                       double tol = kHermitianTol) {
  require_square(m);
  const double asym = hermitian_asymmetry(m);
  if (!(asym <= tol)) {
    throw Error(ErrorKind::NotHermitian,
                "max |m - m^dagger| = " + std::to_string(asym) +
                    " exceeds " + std::to_string(tol));
  }
}

/// Spectral decomposition of a Hermitian matrix. The input is symmetrized as
/// (m + m^dagger)/2 before decomposition; eigenvalues come back ascending.
template <typename Derived>
EigDecomp<typename Derived::Scalar> herm_eig(
    const Eigen::MatrixBase<Derived>& m, double herm_tol = kHermitianTol) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  require_hermitian(m, herm_tol);
  EigDecomp<Scalar> out;
  if (m.rows() == 0) {
    out.eigenvalues.resize(0);
    out.eigenvectors.resize(0, 0);
    return out;
  }
  const Mat sym = (m + m.adjoint()) / typename Eigen::NumTraits<Scalar>::Real(2);
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NotConverged, "Hermitian eigensolver failed");
  }
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  return out;
}

/// Eigenvalues only (ascending), same validation as herm_eig.
template <typename Derived>
auto herm_eigenvalues(const Eigen::MatrixBase<Derived>& m,
                      double herm_tol = kHermitianTol) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  require_hermitian(m, herm_tol);
  if (m.rows() == 0) return Eigen::Matrix<Real, Eigen::Dynamic, 1>(0);
  const Mat sym = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NotConverged, "Hermitian eigensolver failed");
  }
  return Eigen::Matrix<Real, Eigen::Dynamic, 1>(solver.eigenvalues());
}

/// Rebuilds U f(Lambda) U^dagger for a real function f of the spectrum.
template <typename Scalar, typename F>
auto spectral_apply(const EigDecomp<Scalar>& eig, F&& f) {
  auto values = eig.eigenvalues.unaryExpr(std::forward<F>(f)).eval();
  return (eig.eigenvectors * values.template cast<Scalar>().asDiagonal() *
          eig.eigenvectors.adjoint())
      .eval();
}

/// Tr|m|, the sum of absolute eigenvalues.
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& m,
                  double herm_tol = kHermitianTol) {
  return static_cast<double>(herm_eigenvalues(m, herm_tol).cwiseAbs().sum());
}

/// Block-diagonal a (+) b with exactly zero off-diagonal blocks.
template <typename DerivedA, typename DerivedB>
auto direct_sum(const Eigen::MatrixBase<DerivedA>& a,
                const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
          a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b.template cast<Scalar>();
  return out;
}

/// Tensor product a (x) b, with a's index as the most significant one.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a,
          const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.template cast<Scalar>();
    }
  }
  return out;
}

/// Hermitian PSD square root. Eigenvalues below the numerical rank threshold
/// (d * eps * max|lambda|) are treated as 0, so round-off in a rank-deficient
/// input does not turn into sqrt(eps) noise; anything below -psd_tol is rejected.
template <typename Derived>
auto mat_sqrt_psd(const Eigen::MatrixBase<Derived>& m,
                  double psd_tol = kPsdTol) {
  const auto eig = herm_eig(m);
  if (eig.eigenvalues.size() > 0) {
    const double lowest = static_cast<double>(eig.eigenvalues.minCoeff());
    if (lowest < -psd_tol) {
      throw Error(ErrorKind::NotPSD,
                  "minimum eigenvalue " + std::to_string(lowest));
    }
  }
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const Real scale = eig.eigenvalues.size() > 0
                         ? eig.eigenvalues.cwiseAbs().maxCoeff()
                         : Real(0);
  const Real floor = Real(eig.eigenvalues.size()) *
                     Eigen::NumTraits<Real>::epsilon() * scale;
  return spectral_apply(eig, [floor](Real x) {
    return x > floor ? std::sqrt(x) : Real(0);
  });
}

/// |i><i| in dimension d.
CMat basis_projector(Eigen::Index d, Eigen::Index i);

/// max_ij |a_ij - b_ij|; infinity when shapes differ.
double max_entry_diff(const CMat& a, const CMat& b);

}  // namespace cohframe
