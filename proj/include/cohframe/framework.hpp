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
#include <string>
#include <vector>

#include "cohframe/json_io.hpp"
#include "cohframe/measures.hpp"

namespace cohframe {

struct SuiteConfig {
  std::vector<Eigen::Index> dims{2, 3};
  std::size_t samples = 50;
  std::uint64_t seed = 0;
  double tol_exact = 1e-8;  // closed-form measures and algebraic identities
  double tol_opt = 1e-4;    // optimizer-backed measures
  OptOptions opt;

  void validate() const;
};

/// Outcome of one sampled condition check. A pass means no violation was
/// found among `trials` samples; a failure carries the worst witness.
struct VerificationReport {
  std::string measure;
  std::string condition;
  bool passed = true;
  std::size_t trials = 0;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  std::optional<json> witness;
  std::uint64_t seed = 0;
};

json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const json& doc);

/// Tolerance the framework applies to `m`.
double tolerance_for(const MeasureHandle& m, const SuiteConfig& cfg);

// Basis-measure conditions. Each trial derives its own generator from
// (cfg.seed, condition, trial index), so reports are deterministic.
VerificationReport check_c1(const MeasureHandle& m, const SuiteConfig& cfg);
VerificationReport check_c2(const MeasureHandle& m, const SuiteConfig& cfg);
VerificationReport check_c3(const MeasureHandle& m, const SuiteConfig& cfg);
VerificationReport check_b3(const MeasureHandle& m, const SuiteConfig& cfg);
VerificationReport check_b4(const MeasureHandle& m, const SuiteConfig& cfg);

/// C(sum p_n |n><n| (x) rho_n) vs sum p_n C(rho_n): equality when
/// require_equality, otherwise only the upper bound.
VerificationReport check_flag_monotonicity(const MeasureHandle& m,
                                           const SuiteConfig& cfg,
                                           bool require_equality = true);

// Observable-measure conditions, relative to random nondegenerate H drawn
// from h_seed.
VerificationReport check_m1(const MeasureHandle& m, std::uint64_t h_seed,
                            const SuiteConfig& cfg);
VerificationReport check_m2(const MeasureHandle& m, std::uint64_t h_seed,
                            const SuiteConfig& cfg);
VerificationReport check_m3(const MeasureHandle& m, std::uint64_t h_seed,
                            const SuiteConfig& cfg);

/// M1, M2 and M3 in that order.
std::vector<VerificationReport> check_ms(const MeasureHandle& m,
                                         std::uint64_t h_seed,
                                         const SuiteConfig& cfg);

/// Suite names accepted by run_suite: c1 c2 c3 b3 b4 flag ms.
const std::vector<std::string>& suite_names();

std::vector<VerificationReport> run_suite(const MeasureHandle& m,
                                          const std::string& suite,
                                          const SuiteConfig& cfg);

/// Recomputes the violation stored in a report's witness.
double replay_witness(const MeasureHandle& m, const VerificationReport& r);

struct CounterexampleRecord {
  double c_rho1 = 0.0;                 // expect 1
  double c_rho2 = 0.0;                 // expect 4/3
  double rhs = 0.0;                    // (c_rho1 + c_rho2) / 2
  double delta0_bound = 0.0;           // ||rho - diag(1/2,1/2,0,0,0)||_tr
  double optimizer_value = 0.0;
  double optimizer_lower_bound = 0.0;  // dual certificate
  double additivity_gap = 0.0;         // rhs - min(delta0_bound, optimizer)
  double tol = 0.0;
  bool rho1_matches = false;
  bool rho2_matches = false;
  bool upper_bound_holds = false;
  bool additivity_fails = false;

  bool reproduced() const {
    return rho1_matches && rho2_matches && upper_bound_holds && additivity_fails;
  }
};

CounterexampleRecord reproduce_counterexample(double tol, std::uint64_t seed);

json counterexample_to_json(const CounterexampleRecord& r);

// Channel-algebra identities behind the flag constructions; each returns the
// max entrywise residual.

/// flag_channel(ch) applied to |0><0| (x) rho against sum_n p_n |n><n| (x) rho_n
/// built from the selective outcomes of ch.
double flag_identity_residual(const KrausChannel& ch, const DensityState& rho);

/// merge_flag_channel applied to sum_n p_n |n><n| (x) rho_n against
/// |0><0| (x) sum_n p_n rho_n.
double merge_identity_residual(const std::vector<double>& weights,
                               const std::vector<DensityState>& states);

/// truncate(embed(rho)) against rho, with n2 padding dimensions.
double embed_truncate_residual(const DensityState& rho, Eigen::Index n2);

namespace controls {

/// C = 0 everywhere; must fail the strict-positivity half of C1.
MeasureHandle constant_zero();

/// max_{i != j} |(rho^2)_ij|; not monotone under incoherent operations.
MeasureHandle squared_offdiagonal();

}  // namespace controls

}  // namespace cohframe
