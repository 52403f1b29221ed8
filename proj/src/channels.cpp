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

#include "cohframe/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cohframe/random.hpp"

namespace cohframe {

namespace {

CMat apply_raw(const KrausChannel& ch, const CMat& rho) {
  CMat out = CMat::Zero(ch.out_dim(), ch.out_dim());
  for (const auto& k : ch.kraus()) out.noalias() += k * rho * k.adjoint();
  return out;
}

void require_input_dim(const KrausChannel& ch, Eigen::Index dim) {
  if (dim != ch.in_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "channel input dimension " + std::to_string(ch.in_dim()) +
                    ", state dimension " + std::to_string(dim));
  }
}

void require_positive(Eigen::Index n, const char* what) {
  if (n < 1) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + " must be >= 1, got " + std::to_string(n));
  }
}

}  // namespace

KrausChannel KrausChannel::make(Eigen::Index in_dim, Eigen::Index out_dim,
                                std::vector<CMat> kraus, double tol) {
  require_positive(in_dim, "in_dim");
  require_positive(out_dim, "out_dim");
  if (kraus.empty()) {
    throw Error(ErrorKind::InvalidArgument, "channel without Kraus operators");
  }
  for (std::size_t n = 0; n < kraus.size(); ++n) {
    if (kraus[n].rows() != out_dim || kraus[n].cols() != in_dim) {
      throw Error(ErrorKind::DimensionMismatch,
                  "Kraus operator " + std::to_string(n) + " is " +
                      std::to_string(kraus[n].rows()) + "x" +
                      std::to_string(kraus[n].cols()) + ", expected " +
                      std::to_string(out_dim) + "x" + std::to_string(in_dim));
    }
    if (!kraus[n].allFinite()) {
      throw Error(ErrorKind::InvalidArgument,
                  "Kraus operator " + std::to_string(n) + " is not finite");
    }
  }
  KrausChannel ch(in_dim, out_dim, std::move(kraus));
  const double err = ch.completeness_error();
  if (!(err <= tol)) {
    throw Error(ErrorKind::NotTracePreserving,
                "max |sum K^dagger K - I| = " + std::to_string(err));
  }
  return ch;
}

double KrausChannel::completeness_error() const {
  CMat sum = CMat::Zero(in_dim_, in_dim_);
  for (const auto& k : kraus_) sum.noalias() += k.adjoint() * k;
  return max_entry_diff(sum, CMat::Identity(in_dim_, in_dim_));
}

Observable Observable::make(const CMat& mat, double tol) {
  require_hermitian(mat, tol);
  if (mat.rows() == 0 || !mat.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "observable must be finite and non-empty");
  }
  return Observable((mat + mat.adjoint()) / 2.0);
}

CMat Observable::evolution(double t) const {
  const auto eig = herm_eig(mat_);
  CVec phases(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::exp(cplx(0.0, -eig.eigenvalues(k) * t));
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

Observable direct_sum(const Observable& a, const Observable& b) {
  return Observable::make(direct_sum(a.mat(), b.mat()));
}

DensityState apply(const KrausChannel& ch, const DensityState& rho) {
  require_input_dim(ch, rho.dim());
  return make_density(apply_raw(ch, rho.mat()), kChannelOutputTol);
}

std::vector<Outcome> selective_outcomes(const KrausChannel& ch,
                                        const DensityState& rho) {
  require_input_dim(ch, rho.dim());
  std::vector<Outcome> out;
  out.reserve(ch.kraus().size());
  for (std::size_t n = 0; n < ch.kraus().size(); ++n) {
    const CMat& k = ch.kraus()[n];
    const CMat branch = k * rho.mat() * k.adjoint();
    const double p = branch.trace().real();
    if (p < kNullOutcomeProb) {
      out.push_back({n, std::max(p, 0.0), std::nullopt});
    } else {
      out.push_back({n, p, make_density(branch / p, kChannelOutputTol)});
    }
  }
  return out;
}

bool is_incoherent_channel(const KrausChannel& ch, double tol) {
  for (const auto& k : ch.kraus()) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      int large = 0;
      for (Eigen::Index i = 0; i < k.rows(); ++i) {
        if (std::abs(k(i, j)) > tol && ++large > 1) return false;
      }
    }
  }
  return true;
}

KrausChannel identity_channel(Eigen::Index d) {
  require_positive(d, "dimension");
  return KrausChannel::make(d, d, {CMat::Identity(d, d)});
}

KrausChannel dephasing_channel(Eigen::Index d) {
  require_positive(d, "dimension");
  std::vector<CMat> kraus;
  for (Eigen::Index i = 0; i < d; ++i) kraus.push_back(basis_projector(d, i));
  return KrausChannel::make(d, d, std::move(kraus));
}

KrausChannel unitary_channel(const CMat& u) {
  require_square(u);
  return KrausChannel::make(u.cols(), u.rows(), {u});
}

KrausChannel projector_channel(Eigen::Index n1, Eigen::Index n2) {
  require_positive(n1, "N1");
  require_positive(n2, "N2");
  const Eigen::Index d = n1 + n2;
  CMat p1 = CMat::Zero(d, d);
  CMat p2 = CMat::Zero(d, d);
  p1.topLeftCorner(n1, n1).setIdentity();
  p2.bottomRightCorner(n2, n2).setIdentity();
  return KrausChannel::make(d, d, {p1, p2});
}

KrausChannel embed_channel(Eigen::Index n1, Eigen::Index n2) {
  require_positive(n1, "N1");
  require_positive(n2, "N2");
  CMat k = CMat::Zero(n1 + n2, n1);
  k.topRows(n1).setIdentity();
  return KrausChannel::make(n1, n1 + n2, {k});
}

KrausChannel truncate_channel(Eigen::Index n1, Eigen::Index n2) {
  require_positive(n1, "N1");
  require_positive(n2, "N2");
  const Eigen::Index d = n1 + n2;
  const Eigen::Index last = (n2 + n1 - 1) / n1;  // ceil(n2 / n1)
  std::vector<CMat> kraus;
  for (Eigen::Index n = 0; n <= last; ++n) {
    CMat k = CMat::Zero(n1, d);
    for (Eigen::Index j = 0; j < n1; ++j) {
      const Eigen::Index i = j + n * n1;
      if (i < d) k(j, i) = 1.0;
    }
    kraus.push_back(std::move(k));
  }
  return KrausChannel::make(d, n1, std::move(kraus));
}

CMat shift_unitary(Eigen::Index n_dim, Eigen::Index shift) {
  require_positive(n_dim, "N");
  if (shift < 0 || shift >= n_dim) {
    throw Error(ErrorKind::InvalidArgument,
                "shift " + std::to_string(shift) + " outside [0, " +
                    std::to_string(n_dim) + ")");
  }
  CMat u = CMat::Zero(n_dim, n_dim);
  for (Eigen::Index k = 0; k < n_dim; ++k) u((k + shift) % n_dim, k) = 1.0;
  return u;
}

KrausChannel flag_channel(const KrausChannel& ch) {
  if (!ch.square()) {
    throw Error(ErrorKind::NonSquare,
                "flag construction needs a channel with in_dim == out_dim");
  }
  const auto flags = static_cast<Eigen::Index>(ch.kraus().size());
  std::vector<CMat> kraus;
  for (Eigen::Index n = 0; n < flags; ++n) {
    kraus.push_back(kron(shift_unitary(flags, n), ch.kraus()[n]));
  }
  const Eigen::Index d = flags * ch.in_dim();
  return KrausChannel::make(d, d, std::move(kraus));
}

KrausChannel merge_flag_channel(Eigen::Index n_flags, Eigen::Index d) {
  require_positive(n_flags, "N");
  require_positive(d, "d");
  std::vector<CMat> kraus;
  for (Eigen::Index n = 0; n < n_flags; ++n) {
    CMat flag = CMat::Zero(n_flags, n_flags);
    flag(0, n) = 1.0;
    kraus.push_back(kron(flag, CMat::Identity(d, d)));
  }
  return KrausChannel::make(n_flags * d, n_flags * d, std::move(kraus));
}

KrausChannel random_incoherent_channel(Eigen::Index in_dim,
                                       Eigen::Index out_dim,
                                       Eigen::Index n_kraus,
                                       std::uint64_t seed) {
  require_positive(in_dim, "in_dim");
  require_positive(out_dim, "out_dim");
  require_positive(n_kraus, "n_kraus");
  Rng rng = make_rng(seed);
  std::vector<std::vector<Eigen::Index>> rows(
      n_kraus, std::vector<Eigen::Index>(in_dim));
  std::vector<CMat> drawn(n_kraus, CMat::Zero(out_dim, in_dim));
  for (Eigen::Index j = 0; j < in_dim; ++j) {
    CVec amp(n_kraus);
    for (Eigen::Index n = 0; n < n_kraus; ++n) {
      rows[n][j] = uniform_int<Eigen::Index>(rng, 0, out_dim - 1);
      amp(n) = complex_gaussian(rng);
    }
    amp /= amp.norm();
    for (Eigen::Index n = 0; n < n_kraus; ++n) drawn[n](rows[n][j], j) = amp(n);
  }

  // Two columns sharing a row would put cross terms into K^dagger K. Such an
  // operator is replaced by in_dim copies K diag(w^{kj}) / sqrt(in_dim),
  // w = exp(2 pi i / in_dim), whose cross terms cancel.
  std::vector<CMat> kraus;
  for (Eigen::Index n = 0; n < n_kraus; ++n) {
    std::vector<Eigen::Index> sorted = rows[n];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
      kraus.push_back(std::move(drawn[n]));
      continue;
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim));
    for (Eigen::Index k = 0; k < in_dim; ++k) {
      CVec phases(in_dim);
      for (Eigen::Index j = 0; j < in_dim; ++j) {
        phases(j) = scale * std::exp(cplx(0.0, 2.0 * M_PI *
                                                   static_cast<double>(k * j) /
                                                   static_cast<double>(in_dim)));
      }
      kraus.push_back(drawn[n] * phases.asDiagonal());
    }
  }
  return KrausChannel::make(in_dim, out_dim, std::move(kraus), 1e-12);
}

KrausChannel random_permutation_mixture(Eigen::Index d, Eigen::Index n_kraus,
                                        std::uint64_t seed) {
  require_positive(d, "dimension");
  require_positive(n_kraus, "n_kraus");
  Rng rng = make_rng(seed);
  const RVec weights = random_probabilities(n_kraus, rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::vector<CMat> kraus;
  for (Eigen::Index n = 0; n < n_kraus; ++n) {
    std::vector<Eigen::Index> perm(d);
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    CMat k = CMat::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      k(perm[j], j) = std::sqrt(weights(n)) * std::exp(cplx(0.0, angle(rng)));
    }
    kraus.push_back(std::move(k));
  }
  return KrausChannel::make(d, d, std::move(kraus));
}

Observable random_nondegenerate_observable(Eigen::Index d, std::uint64_t seed,
                                           double min_gap) {
  require_positive(d, "dimension");
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> extra(0.0, 1.0);
  RVec energies(d);
  double level = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    level += (k == 0 ? 0.0 : min_gap) + extra(rng);
    energies(k) = level;
  }
  energies.array() -= energies.mean();
  const CMat v = random_unitary(d, rng);
  return Observable::make(v * energies.cast<cplx>().asDiagonal() * v.adjoint());
}

KrausChannel random_translation_invariant_channel(const Observable& h,
                                                  std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const Eigen::Index d = h.dim();
  const auto eig = herm_eig(h.mat());
  const CMat& v = eig.eigenvectors;

  const auto n_unitaries = uniform_int<Eigen::Index>(rng, 1, 3);
  const bool with_dephasing = std::bernoulli_distribution(0.5)(rng);
  const RVec weights =
      random_probabilities(n_unitaries + (with_dephasing ? 1 : 0), rng);

  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::vector<CMat> kraus;
  for (Eigen::Index k = 0; k < n_unitaries; ++k) {
    CVec phases(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      phases(i) = std::exp(cplx(0.0, angle(rng)));
    }
    kraus.push_back(std::sqrt(weights(k)) * v * phases.asDiagonal() *
                    v.adjoint());
  }
  if (with_dephasing) {
    const double w = std::sqrt(weights(n_unitaries));
    for (Eigen::Index i = 0; i < d; ++i) {
      kraus.push_back(w * v.col(i) * v.col(i).adjoint());
    }
  }
  return KrausChannel::make(d, d, std::move(kraus));
}

TranslationInvarianceResult is_translation_invariant(
    const KrausChannel& ch, const Observable& h,
    const std::vector<double>& times, std::size_t state_samples,
    std::uint64_t seed, double tol) {
  if (!ch.square() || ch.in_dim() != h.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "translation invariance needs a square channel on dimension " +
                    std::to_string(h.dim()));
  }
  TranslationInvarianceResult result;
  const Eigen::Index d = h.dim();
  for (std::size_t s = 0; s < state_samples; ++s) {
    Rng pick = make_rng(derive_seed(seed, 0x7157, s));
    const auto rank = uniform_int<Eigen::Index>(pick, 1, d);
    const DensityState rho = random_density(d, rank, derive_seed(seed, 0x7158, s));
    const CMat out = apply_raw(ch, rho.mat());
    for (double t : times) {
      const CMat u = h.evolution(t);
      const CMat lhs = u * out * u.adjoint();
      const CMat rhs = apply_raw(ch, u * rho.mat() * u.adjoint());
      const double residual = max_entry_diff(lhs, rhs);
      ++result.trials;
      if (residual > result.worst_residual) {
        result.worst_residual = residual;
        if (residual > tol) {
          result.invariant = false;
          result.witness_time = t;
          result.witness_state = rho;
        }
      }
    }
  }
  return result;
}

}  // namespace cohframe
