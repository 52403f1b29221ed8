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
#include <optional>
#include <vector>

#include "cohframe/matcore.hpp"
#include "cohframe/states.hpp"

namespace cohframe {

inline constexpr double kCompletenessTol = 1e-10;
inline constexpr double kNullOutcomeProb = 1e-12;
inline constexpr double kKrausEntryTol = 1e-12;
inline constexpr double kChannelOutputTol = 1e-9;

/// Kraus representation rho -> sum_n K_n rho K_n^dagger. Each K_n is
/// out_dim x in_dim; construction enforces sum_n K_n^dagger K_n = I.
class KrausChannel {
 public:
  static KrausChannel make(Eigen::Index in_dim, Eigen::Index out_dim,
                           std::vector<CMat> kraus,
                           double tol = kCompletenessTol);

  Eigen::Index in_dim() const { return in_dim_; }
  Eigen::Index out_dim() const { return out_dim_; }
  const std::vector<CMat>& kraus() const { return kraus_; }
  bool square() const { return in_dim_ == out_dim_; }

  /// max entry of |sum K^dagger K - I|.
  double completeness_error() const;

 private:
  KrausChannel(Eigen::Index in_dim, Eigen::Index out_dim,
               std::vector<CMat> kraus)
      : in_dim_(in_dim), out_dim_(out_dim), kraus_(std::move(kraus)) {}

  Eigen::Index in_dim_;
  Eigen::Index out_dim_;
  std::vector<CMat> kraus_;
};

/// Hermitian observable H; its eigenbasis plays the role of the fixed basis
/// in the translation-invariance setting.
class Observable {
 public:
  static Observable make(const CMat& mat, double tol = kStateTol);

  Eigen::Index dim() const { return mat_.rows(); }
  const CMat& mat() const { return mat_; }

  /// exp(-i H t).
  CMat evolution(double t) const;

 private:
  explicit Observable(CMat m) : mat_(std::move(m)) {}
  CMat mat_;
};

/// H_1 (+) H_2.
Observable direct_sum(const Observable& a, const Observable& b);

DensityState apply(const KrausChannel& ch, const DensityState& rho);

/// Result of a selective measurement. Null outcomes (p < 1e-12) carry no
/// post-measurement state.
struct Outcome {
  std::size_t index;
  double probability;
  std::optional<DensityState> state;
};

std::vector<Outcome> selective_outcomes(const KrausChannel& ch,
                                        const DensityState& rho);

/// True iff every Kraus column has at most one entry of modulus above tol,
/// i.e. each K_n maps diagonal matrices to diagonal matrices.
bool is_incoherent_channel(const KrausChannel& ch,
                           double tol = kKrausEntryTol);

KrausChannel identity_channel(Eigen::Index d);

/// Kraus operators |i><i|, i < d.
KrausChannel dephasing_channel(Eigen::Index d);

/// Single Kraus operator u (must be unitary).
KrausChannel unitary_channel(const CMat& u);

/// P_1 onto the first n1 basis vectors, P_2 onto the next n2.
KrausChannel projector_channel(Eigen::Index n1, Eigen::Index n2);

/// rho_1 -> rho_1 (+) 0_{n2}; one (n1+n2) x n1 Kraus operator.
KrausChannel embed_channel(Eigen::Index n1, Eigen::Index n2);

/// rho_1 (+) 0 -> rho_1; ceil(n2/n1) + 1 Kraus operators of shape
/// n1 x (n1+n2) with <j|K_n|i> = delta_{i, j + n n1}.
KrausChannel truncate_channel(Eigen::Index n1, Eigen::Index n2);

/// U_n = sum_k |k+n mod N><k|.
CMat shift_unitary(Eigen::Index n_dim, Eigen::Index shift);

/// Lifts a square channel with N Kraus operators to the flagged channel with
/// Kraus operators U_n (x) K_n on dimension N d.
KrausChannel flag_channel(const KrausChannel& ch);

/// Kraus operators |0><n| (x) I_d, n < N.
KrausChannel merge_flag_channel(Eigen::Index n_flags, Eigen::Index d);

/// Incoherent CPTP channel built from n_kraus drawn operators of shape
/// out_dim x in_dim: column j of K_n holds a single amplitude c_nj at a
/// uniformly drawn row, and sum_n |c_nj|^2 = 1 per column. A drawn operator
/// that sends two columns to the same row is split into in_dim phase-twisted
/// copies so that completeness holds exactly.
KrausChannel random_incoherent_channel(Eigen::Index in_dim,
                                       Eigen::Index out_dim,
                                       Eigen::Index n_kraus,
                                       std::uint64_t seed);

inline KrausChannel random_incoherent_channel(Eigen::Index d,
                                              Eigen::Index n_kraus,
                                              std::uint64_t seed) {
  return random_incoherent_channel(d, d, n_kraus, seed);
}

/// Mixture of n_kraus random phased permutations, sqrt(q_n) P_n diag(e^{i phi}):
/// an incoherent channel with exactly n_kraus Kraus operators.
KrausChannel random_permutation_mixture(Eigen::Index d, Eigen::Index n_kraus,
                                        std::uint64_t seed);

/// Random H = V diag(e) V^dagger with Haar V and eigenvalues separated by at
/// least min_gap.
Observable random_nondegenerate_observable(Eigen::Index d, std::uint64_t seed,
                                           double min_gap = 0.2);

/// Convex mixture of unitaries commuting with H, optionally mixed with
/// dephasing in the eigenbasis of H. Translationally invariant whenever H is
/// nondegenerate.
KrausChannel random_translation_invariant_channel(const Observable& h,
                                                  std::uint64_t seed);

struct TranslationInvarianceResult {
  bool invariant = true;
  double worst_residual = 0.0;
  std::size_t trials = 0;
  std::optional<double> witness_time;
  std::optional<DensityState> witness_state;

  explicit operator bool() const { return invariant; }
};

inline const std::vector<double>& default_translation_times() {
  static const std::vector<double> times{0.37, 1.0, 2.5, 3.14159265358979323846};
  return times;
}

/// Sampled check of exp(-iHt) L(rho) exp(iHt) == L(exp(-iHt) rho exp(iHt))
/// (max-entry residual). A failure is exact with witness (t, rho); a pass is
/// evidence over the samples only.
TranslationInvarianceResult is_translation_invariant(
    const KrausChannel& ch, const Observable& h,
    const std::vector<double>& times = default_translation_times(),
    std::size_t state_samples = 8, std::uint64_t seed = 0,
    double tol = 1e-9);

}  // namespace cohframe
