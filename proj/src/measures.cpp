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

#include "cohframe/measures.hpp"

#include <cmath>

namespace cohframe {

namespace {

double clip_negative(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value >= -kNegativeClipTol) return 0.0;
  throw Error(ErrorKind::ContractViolation,
              std::string(what) + " evaluated to " + std::to_string(value));
}

double optimize(const DensityState& rho, DiagConstraint c,
                const OptOptions& opts) {
  OptResult result = minimize_trace_distance(rho, c, opts);
  if (!result.converged) throw NotConvergedError(std::move(result));
  return result.value;
}

}  // namespace

double shannon_entropy(const RVec& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log2(p(i));
  }
  return h;
}

double von_neumann_entropy(const DensityState& rho) {
  const RVec spectrum = herm_eigenvalues(rho.mat()).cwiseMax(0.0);
  return std::max(shannon_entropy(spectrum), 0.0);
}

double relative_entropy_coherence(const DensityState& rho) {
  const RVec populations = rho.mat().diagonal().real().cwiseMax(0.0);
  return clip_negative(shannon_entropy(populations) - von_neumann_entropy(rho),
                       "relative entropy of coherence");
}

double l1_coherence(const DensityState& rho) {
  return offdiagonal_mass(rho.mat());
}

double trace_norm_coherence(const DensityState& rho, const OptOptions& opts) {
  return optimize(rho, DiagConstraint::Simplex, opts);
}

double modified_trace_norm_coherence(const DensityState& rho,
                                     const OptOptions& opts) {
  return optimize(rho, DiagConstraint::NonnegOrthant, opts);
}

double skew_information(const DensityState& rho, const Observable& h) {
  if (rho.dim() != h.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state dimension " + std::to_string(rho.dim()) +
                    ", observable dimension " + std::to_string(h.dim()));
  }
  const CMat root = mat_sqrt_psd(rho.mat());
  const CMat comm = root * h.mat() - h.mat() * root;
  return clip_negative(-0.5 * (comm * comm).trace().real(), "skew information");
}

double MeasureHandle::operator()(const DensityState& rho) const {
  if (kind != MeasureKind::Basis) {
    throw Error(ErrorKind::InvalidArgument,
                "measure '" + name + "' needs an observable");
  }
  return basis(rho);
}

double MeasureHandle::operator()(const DensityState& rho,
                                 const Observable& h) const {
  if (kind == MeasureKind::Observable) return observable(rho, h);
  return basis(rho);
}

const std::vector<std::string>& measure_names() {
  static const std::vector<std::string> names{
      "rel-entropy", "l1", "trace-norm", "mod-trace-norm", "skew-info"};
  return names;
}

MeasureHandle make_measure(std::string_view name, const OptOptions& opts) {
  MeasureHandle m;
  m.name = std::string(name);
  if (name == "rel-entropy") {
    m.basis = relative_entropy_coherence;
  } else if (name == "l1") {
    m.basis = l1_coherence;
  } else if (name == "trace-norm") {
    m.optimizer_backed = true;
    m.basis = [opts](const DensityState& rho) {
      return trace_norm_coherence(rho, opts);
    };
  } else if (name == "mod-trace-norm") {
    m.optimizer_backed = true;
    m.basis = [opts](const DensityState& rho) {
      return modified_trace_norm_coherence(rho, opts);
    };
  } else if (name == "skew-info") {
    m.kind = MeasureKind::Observable;
    m.observable = skew_information;
  } else {
    throw Error(ErrorKind::InvalidArgument,
                "unknown measure '" + std::string(name) + "'");
  }
  return m;
}

}  // namespace cohframe
