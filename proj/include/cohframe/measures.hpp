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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cohframe/channels.hpp"
#include "cohframe/diagopt.hpp"
#include "cohframe/states.hpp"

namespace cohframe {

inline constexpr double kNegativeClipTol = 1e-9;

/// -sum p log2 p with 0 log 0 = 0.
double shannon_entropy(const RVec& p);

/// Von Neumann entropy in bits.
double von_neumann_entropy(const DensityState& rho);

/// S(dephase(rho)) - S(rho).
double relative_entropy_coherence(const DensityState& rho);

/// sum_{i != j} |rho_ij|.
double l1_coherence(const DensityState& rho);

/// Thrown when an optimizer-backed measure exhausts its iteration budget.
class NotConvergedError : public Error {
 public:
  explicit NotConvergedError(OptResult partial)
      : Error(ErrorKind::NotConverged,
              "optimizer stopped after " + std::to_string(partial.iterations) +
                  " iterations at value " + std::to_string(partial.value)),
        partial_(std::move(partial)) {}

  const OptResult& partial() const { return partial_; }

 private:
  OptResult partial_;
};

/// min over incoherent delta of ||rho - delta||_tr.
double trace_norm_coherence(const DensityState& rho, const OptOptions& opts = {});

/// min over lambda >= 0 and incoherent delta of ||rho - lambda delta||_tr.
double modified_trace_norm_coherence(const DensityState& rho,
                                     const OptOptions& opts = {});

/// Wigner-Yanase skew information -1/2 Tr([sqrt(rho), H]^2).
double skew_information(const DensityState& rho, const Observable& h);

enum class MeasureKind { Basis, Observable };

/// A named coherence quantifier. Basis measures read only rho; observable
/// measures are relative to a fixed H.
struct MeasureHandle {
  std::string name;
  MeasureKind kind = MeasureKind::Basis;
  bool optimizer_backed = false;
  std::function<double(const DensityState&)> basis;
  std::function<double(const DensityState&, const Observable&)> observable;

  double operator()(const DensityState& rho) const;
  double operator()(const DensityState& rho, const Observable& h) const;
};

/// CLI names: rel-entropy, l1, trace-norm, mod-trace-norm, skew-info.
const std::vector<std::string>& measure_names();

/// Throws InvalidArgument for unknown names. Optimizer-backed measures use
/// `opts` for every evaluation.
MeasureHandle make_measure(std::string_view name, const OptOptions& opts = {});

}  // namespace cohframe
