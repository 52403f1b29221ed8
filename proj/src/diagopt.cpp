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

#include "cohframe/diagopt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace cohframe {

namespace {

constexpr std::size_t kCheckEvery = 10;

/// Tracks the best feasible point and the stall criterion: the best value
/// must improve by at least tol/10 within every stall_window iterations.
struct BestTracker {
  OptResult result;
  double reference;
  std::size_t reference_iter = 0;
  double min_improvement;
  std::size_t window;

  BestTracker(double value, const RVec& d, double tol, std::size_t window_)
      : reference(value), min_improvement(tol / 10.0), window(window_) {
    result.value = value;
    result.argmin = d;
  }

  void offer(double value, const RVec& d, std::size_t iter) {
    if (value < result.value) {
      result.value = value;
      result.argmin = d;
    }
    if (reference - result.value >= min_improvement) {
      reference = result.value;
      reference_iter = iter;
    }
  }

  bool stalled(std::size_t iter) const { return iter - reference_iter >= window; }
};

OptResult run_admm(const CMat& rho, DiagConstraint c, RVec d,
                   const OptOptions& opts) {
  const Eigen::Index n = rho.rows();
  BestTracker best(diag_objective(rho, d), d, opts.tol, opts.stall_window);
  CMat u = CMat::Zero(n, n);
  double beta = 1.0;
  std::size_t iter = 0;
  while (iter < opts.max_iterations) {
    ++iter;
    const CMat target = rho - CMat(d.cast<cplx>().asDiagonal()) - u;
    const double shrink = 1.0 / beta;
    const CMat x = spectral_apply(herm_eig(target), [shrink](double lam) {
      const double mag = std::abs(lam) - shrink;
      return mag > 0.0 ? std::copysign(mag, lam) : 0.0;
    });
    const RVec d_prev = d;
    d = project((rho - x - u).diagonal().real(), c);
    const CMat residual = x + CMat(d.cast<cplx>().asDiagonal()) - rho;
    u += residual;
    u = ((u + u.adjoint()) / 2.0).eval();

    if (iter % kCheckEvery == 0) {
      best.offer(diag_objective(rho, d), d, iter);
      best.result.lower_bound = std::max(best.result.lower_bound,
                                         dual_bound(rho, -beta * u, c));
      if (best.result.value - best.result.lower_bound <= opts.tol ||
          best.stalled(iter)) {
        best.result.converged = true;
        break;
      }
    }

    const double primal = residual.norm();
    const double dual = beta * (d - d_prev).norm();
    if (primal > 10.0 * dual) {
      beta *= 2.0;
      u /= 2.0;
    } else if (dual > 10.0 * primal) {
      beta /= 2.0;
      u *= 2.0;
    }
  }
  best.offer(diag_objective(rho, d), d, iter);
  best.result.iterations = iter;
  return best.result;
}

OptResult run_subgradient(const CMat& rho, DiagConstraint c, RVec d,
                          const OptOptions& opts) {
  BestTracker best(diag_objective(rho, d), d, opts.tol, opts.stall_window);
  std::size_t iter = 0;
  while (iter < opts.max_iterations) {
    const auto eig = herm_eig(rho - CMat(d.cast<cplx>().asDiagonal()));
    const double value = eig.eigenvalues.cwiseAbs().sum();
    const bool improved = value < best.result.value;
    best.offer(value, d, iter);
    const CMat sign = spectral_apply(eig, [](double lam) {
      return std::abs(lam) < kSignZeroTol ? 0.0 : std::copysign(1.0, lam);
    });
    if (improved || iter % kCheckEvery == 0) {
      best.result.lower_bound =
          std::max(best.result.lower_bound, dual_bound(rho, sign, c));
    }
    if (best.stalled(iter) ||
        best.result.value - best.result.lower_bound <= opts.tol) {
      best.result.converged = true;
      break;
    }
    const RVec grad = -sign.diagonal().real();
    const double step = opts.step0 / std::sqrt(static_cast<double>(iter) + 1.0);
    d = project(d - step * grad, c);
    ++iter;
  }
  best.result.iterations = iter;
  return best.result;
}

}  // namespace

double diag_objective(const CMat& rho, const RVec& diag) {
  return trace_norm(rho - CMat(diag.cast<cplx>().asDiagonal()));
}

RVec project_simplex(const RVec& v) {
  const Eigen::Index n = v.size();
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  RVec out = (v.array() - theta).cwiseMax(0.0);
  // Re-normalize away the last ulp of drift.
  const double total = out.sum();
  if (total > 0.0) out /= total;
  return out;
}

RVec project_orthant(const RVec& v) { return v.cwiseMax(0.0); }

RVec project(const RVec& v, DiagConstraint c) {
  return c == DiagConstraint::Simplex ? project_simplex(v) : project_orthant(v);
}

bool is_feasible(const RVec& d, DiagConstraint c, double tol) {
  if (d.size() > 0 && d.minCoeff() < -tol) return false;
  return c == DiagConstraint::NonnegOrthant || std::abs(d.sum() - 1.0) <= tol;
}

double dual_bound(const CMat& rho, const CMat& w_in, DiagConstraint c) {
  CMat w = (w_in + w_in.adjoint()) / 2.0;
  if (c == DiagConstraint::NonnegOrthant) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      w(i, i) = std::min(w(i, i).real(), 0.0);
    }
  }
  const RVec spectrum = herm_eigenvalues(w);
  const double op_norm = spectrum.size() ? spectrum.cwiseAbs().maxCoeff() : 0.0;
  if (op_norm > 1.0) w /= op_norm;
  const double overlap = w.cwiseProduct(rho.transpose()).sum().real();
  if (c == DiagConstraint::NonnegOrthant) return overlap;
  return overlap - w.diagonal().real().maxCoeff();
}

OptResult minimize_from(const DensityState& rho, DiagConstraint c,
                        const RVec& start, const OptOptions& opts) {
  if (start.size() != rho.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "start point has " + std::to_string(start.size()) +
                    " entries for a state of dimension " +
                    std::to_string(rho.dim()));
  }
  if (!(opts.tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  }
  const RVec d0 = project(start, c);
  return opts.method == OptMethod::Admm ? run_admm(rho.mat(), c, d0, opts)
                                        : run_subgradient(rho.mat(), c, d0, opts);
}

RVec random_feasible_point(Eigen::Index d, DiagConstraint c, Rng& rng) {
  RVec p = random_probabilities(d, rng);
  if (c == DiagConstraint::NonnegOrthant) {
    p *= std::uniform_real_distribution<double>(0.0, 2.0)(rng);
  }
  return p;
}

OptResult minimize_trace_distance(const DensityState& rho, DiagConstraint c,
                                  const OptOptions& opts) {
  if (opts.starts < 1) {
    throw Error(ErrorKind::InvalidArgument, "need at least one start");
  }
  Rng rng = make_rng(opts.seed);
  OptResult best;
  std::size_t total_iterations = 0;
  double lower_bound = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.starts; ++s) {
    const RVec start = s == 0 ? RVec(rho.mat().diagonal().real())
                              : random_feasible_point(rho.dim(), c, rng);
    OptResult run = minimize_from(rho, c, start, opts);
    total_iterations += run.iterations;
    lower_bound = std::max(lower_bound, run.lower_bound);
    if (run.value < best.value) best = std::move(run);
  }
  best.value = diag_objective(rho.mat(), best.argmin);
  best.iterations = total_iterations;
  best.lower_bound = std::min(lower_bound, best.value);
  return best;
}

double grid_oracle(const DensityState& rho, DiagConstraint c,
                   std::size_t resolution) {
  const Eigen::Index d = rho.dim();
  if (d > kGridOracleMaxDim) {
    throw Error(ErrorKind::DimensionTooLarge,
                "grid oracle supports dimension <= " +
                    std::to_string(kGridOracleMaxDim) + ", got " +
                    std::to_string(d));
  }
  if (resolution < 1) {
    throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 1");
  }
  const double step = 1.0 / static_cast<double>(resolution);
  const auto res = static_cast<long>(resolution);
  double best = std::numeric_limits<double>::infinity();
  RVec point(d);
  std::vector<long> counts(d, 0);

  // Simplex: counts sum to resolution. Orthant: each count in [0, res].
  std::function<void(Eigen::Index, long)> visit = [&](Eigen::Index axis,
                                                      long remaining) {
    if (axis == d - 1) {
      if (c == DiagConstraint::Simplex) {
        counts[axis] = remaining;
        for (Eigen::Index i = 0; i < d; ++i) point(i) = counts[i] * step;
        best = std::min(best, diag_objective(rho.mat(), point));
      } else {
        for (long k = 0; k <= res; ++k) {
          counts[axis] = k;
          for (Eigen::Index i = 0; i < d; ++i) point(i) = counts[i] * step;
          best = std::min(best, diag_objective(rho.mat(), point));
        }
      }
      return;
    }
    const long upper = c == DiagConstraint::Simplex ? remaining : res;
    for (long k = 0; k <= upper; ++k) {
      counts[axis] = k;
      visit(axis + 1, remaining - k);
    }
  };
  visit(0, res);
  return best;
}

}  // namespace cohframe
