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

#include "cohframe/framework.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace cohframe {

namespace {

// Stream identifiers keep the per-condition generators independent.
enum Stream : std::uint64_t {
  kStreamC1 = 0xC1,
  kStreamC2 = 0xC2,
  kStreamC3 = 0xC3,
  kStreamB3 = 0xB3,
  kStreamB4 = 0xB4,
  kStreamFlag = 0xF1A6,
  kStreamM1 = 0x3101,
  kStreamM2 = 0x3102,
  kStreamM3 = 0x3103,
};

constexpr double kMinCoherentMass = 0.05;
constexpr double kMinCommutator = 0.05;

// ---------------------------------------------------------------------------
// sampling helpers

Eigen::Index pick_dim(Rng& rng, const std::vector<Eigen::Index>& dims) {
  return dims[uniform_int<std::size_t>(rng, 0, dims.size() - 1)];
}

DensityState sample_state(Eigen::Index d, Rng& rng) {
  const auto rank = uniform_int<Eigen::Index>(rng, 1, d);
  return random_density(d, rank, rng());
}

std::vector<double> to_weights(const RVec& p) {
  return std::vector<double>(p.data(), p.data() + p.size());
}

std::vector<double> sample_weights(std::size_t n, Rng& rng) {
  return to_weights(random_probabilities(static_cast<Eigen::Index>(n), rng));
}

Observable sum_observables(const std::vector<Observable>& parts) {
  CMat out(0, 0);
  for (const auto& h : parts) out = direct_sum(out, h.mat());
  return Observable::make(out);
}

CMat commutator(const CMat& a, const CMat& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------
// witness (de)serialization

json states_to_json(const std::vector<DensityState>& states) {
  json out = json::array();
  for (const auto& s : states) out.push_back(state_to_json(s));
  return out;
}

std::vector<DensityState> states_from_json(const json& doc) {
  std::vector<DensityState> out;
  for (const auto& s : doc) out.push_back(state_from_json(s));
  return out;
}

json observables_to_json(const std::vector<Observable>& hs) {
  json out = json::array();
  for (const auto& h : hs) out.push_back(observable_to_json(h));
  return out;
}

std::vector<Observable> observables_from_json(const json& doc) {
  std::vector<Observable> out;
  for (const auto& h : doc) out.push_back(observable_from_json(h));
  return out;
}

// ---------------------------------------------------------------------------
// violation formulas, shared by the checks and replay_witness

// Incoherent inputs must give C <= tol; coherent inputs must give C >= tol,
// scored as 2 tol - C so that the common "violation <= tol" rule applies.
double positivity_violation(double value, bool expect_positive, double tol) {
  return expect_positive ? 2.0 * tol - value : value;
}

double c2_violation(const MeasureHandle& m, const DensityState& rho,
                    const KrausChannel& ch) {
  return m(apply(ch, rho)) - m(rho);
}

double c3_violation(const MeasureHandle& m, const BlockSpec& spec) {
  double weighted = 0.0;
  for (std::size_t k = 0; k < spec.blocks.size(); ++k) {
    weighted += spec.weights[k] * m(spec.blocks[k]);
  }
  return std::abs(m(block_mix(spec)) - weighted);
}

double b3_violation(const MeasureHandle& m, const DensityState& rho,
                    const KrausChannel& ch) {
  double weighted = 0.0;
  for (const auto& outcome : selective_outcomes(ch, rho)) {
    if (outcome.state) weighted += outcome.probability * m(*outcome.state);
  }
  return weighted - m(rho);
}

double weighted_sum(const MeasureHandle& m, const std::vector<double>& weights,
                    const std::vector<DensityState>& states) {
  double total = 0.0;
  for (std::size_t n = 0; n < states.size(); ++n) {
    if (weights[n] > 0.0) total += weights[n] * m(states[n]);
  }
  return total;
}

double b4_violation(const MeasureHandle& m, const std::vector<double>& weights,
                    const std::vector<DensityState>& states) {
  return m(mixture(weights, states)) - weighted_sum(m, weights, states);
}

double flag_violation(const MeasureHandle& m,
                      const std::vector<double>& weights,
                      const std::vector<DensityState>& states,
                      bool require_equality) {
  const double diff =
      m(flagged_state(weights, states)) - weighted_sum(m, weights, states);
  return require_equality ? std::abs(diff) : diff;
}

double m2_violation(const MeasureHandle& m, const DensityState& rho,
                    const Observable& h, const KrausChannel& ch) {
  return m(apply(ch, rho), h) - m(rho, h);
}

double m3_violation(const MeasureHandle& m, const BlockSpec& spec,
                    const std::vector<Observable>& parts) {
  double weighted = 0.0;
  for (std::size_t k = 0; k < spec.blocks.size(); ++k) {
    weighted += spec.weights[k] * m(spec.blocks[k], parts[k]);
  }
  return std::abs(m(block_mix(spec), sum_observables(parts)) - weighted);
}

// ---------------------------------------------------------------------------

class Tally {
 public:
  Tally(const MeasureHandle& m, std::string condition, double tol,
        std::uint64_t seed) {
    report_.measure = m.name;
    report_.condition = std::move(condition);
    report_.tolerance = tol;
    report_.seed = seed;
    report_.worst_violation = -std::numeric_limits<double>::infinity();
  }

  void record(double violation, const std::function<json()>& witness) {
    ++report_.trials;
    if (violation > report_.worst_violation) {
      report_.worst_violation = violation;
      worst_witness_ = violation > report_.tolerance
                           ? std::optional<json>(witness())
                           : std::nullopt;
    }
  }

  VerificationReport finish() {
    report_.passed = report_.worst_violation <= report_.tolerance;
    if (!report_.passed) report_.witness = std::move(worst_witness_);
    return std::move(report_);
  }

 private:
  VerificationReport report_;
  std::optional<json> worst_witness_;
};

void require_kind(const MeasureHandle& m, MeasureKind kind) {
  if (m.kind != kind) {
    throw Error(ErrorKind::InvalidArgument,
                "measure '" + m.name + "' is not a " +
                    (kind == MeasureKind::Basis ? "basis" : "observable") +
                    " measure");
  }
}

json channel_witness(const DensityState& rho, const KrausChannel& ch,
                     const std::string& construction) {
  return json{{"kind", "channel"},
              {"construction", construction},
              {"state", state_to_json(rho)},
              {"channel", channel_to_json(ch)}};
}

json blocks_witness(const BlockSpec& spec) {
  return json{{"kind", "blocks"},
              {"weights", spec.weights},
              {"blocks", states_to_json(spec.blocks)}};
}

json ensemble_witness(const char* kind, const std::vector<double>& weights,
                      const std::vector<DensityState>& states) {
  return json{{"kind", kind}, {"weights", weights}, {"states", states_to_json(states)}};
}

BlockSpec random_block_spec(const SuiteConfig& cfg, Rng& rng) {
  const std::size_t n_blocks = uniform_int<std::size_t>(rng, 2, 3);
  BlockSpec spec;
  for (std::size_t k = 0; k < n_blocks; ++k) {
    spec.blocks.push_back(sample_state(pick_dim(rng, cfg.dims), rng));
  }
  spec.weights = sample_weights(n_blocks, rng);
  return spec;
}

DensityState sample_coherent_state(Eigen::Index d, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    DensityState rho = sample_state(d, rng);
    if (offdiagonal_mass(rho.mat()) >= kMinCoherentMass) return rho;
  }
  throw Error(ErrorKind::InvalidArgument, "could not sample a coherent state");
}

}  // namespace

// ---------------------------------------------------------------------------

void SuiteConfig::validate() const {
  if (samples < 1) {
    throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  }
  if (!(tol_exact > 0.0) || !(tol_opt > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  }
  if (dims.empty()) {
    throw Error(ErrorKind::InvalidArgument, "at least one dimension required");
  }
  for (auto d : dims) {
    if (d < 1 || d > 64) {
      throw Error(ErrorKind::InvalidArgument,
                  "dimension " + std::to_string(d) + " outside [1, 64]");
    }
  }
}

double tolerance_for(const MeasureHandle& m, const SuiteConfig& cfg) {
  return m.optimizer_backed ? cfg.tol_opt : cfg.tol_exact;
}

VerificationReport check_c1(const MeasureHandle& m, const SuiteConfig& cfg) {
  require_kind(m, MeasureKind::Basis);
  cfg.validate();
  const double tol = tolerance_for(m, cfg);
  Tally tally(m, "C1", tol, cfg.seed);
  for (std::size_t t = 0; t < cfg.samples; ++t) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamC1, t));
    const Eigen::Index d = pick_dim(rng, cfg.dims);
    const DensityState free_state =
        random_incoherent_state(d, rng(), /*sparse_zeros=*/t % 2 == 1);
    tally.record(positivity_violation(m(free_state), false, tol), [&] {
      return json{{"kind", "state"}, {"expect_positive", false},
                  {"state", state_to_json(free_state)}};
    });
    if (d < 2) continue;
    const DensityState coherent = sample_coherent_state(d, rng);
    tally.record(positivity_violation(m(coherent), true, tol), [&] {
      return json{{"kind", "state"}, {"expect_positive", true},
                  {"state", state_to_json(coherent)}};
    });
  }
  return tally.finish();
}

VerificationReport check_c2(const MeasureHandle& m, const SuiteConfig& cfg) {
  require_kind(m, MeasureKind::Basis);
  cfg.validate();
  Tally tally(m, "C2", tolerance_for(m, cfg), cfg.seed);
  auto run = [&](const DensityState& rho, const KrausChannel& ch,
                 const std::string& name) {
    tally.record(c2_violation(m, rho, ch),
                 [&] { return channel_witness(rho, ch, name); });
  };

  for (std::size_t t = 0; t < cfg.samples; ++t) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamC2, t));
    const Eigen::Index d = pick_dim(rng, cfg.dims);
    const Eigen::Index out =
        std::bernoulli_distribution(1.0 / 3.0)(rng) ? pick_dim(rng, cfg.dims) : d;
    const auto n_kraus = uniform_int<Eigen::Index>(rng, 1, 4);
    const DensityState rho = sample_state(d, rng);
    run(rho, random_incoherent_channel(d, out, n_kraus, rng()), "random");
  }

  // Named constructions, one round per configured dimension.
  for (std::size_t k = 0; k < cfg.dims.size(); ++k) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamC2, cfg.samples + k));
    const Eigen::Index n1 = cfg.dims[k];
    const Eigen::Index n2 = cfg.dims[(k + 1) % cfg.dims.size()];
    run(sample_state(n1 + n2, rng), projector_channel(n1, n2), "projector");
    run(sample_state(n1, rng), embed_channel(n1, n2), "embed");
    run(sample_state(n1 + n2, rng), truncate_channel(n1, n2), "truncate");
    run(sample_state(n1, rng), dephasing_channel(n1), "dephasing");
    const KrausChannel lifted = flag_channel(random_permutation_mixture(n1, 2, rng()));
    run(sample_state(lifted.in_dim(), rng), lifted, "flag");
    run(sample_state(2 * n1, rng), merge_flag_channel(2, n1), "merge-flag");
  }
  return tally.finish();
}

VerificationReport check_c3(const MeasureHandle& m, const SuiteConfig& cfg) {
  require_kind(m, MeasureKind::Basis);
  cfg.validate();
  Tally tally(m, "C3", tolerance_for(m, cfg), cfg.seed);
  auto run = [&](const BlockSpec& spec) {
    tally.record(c3_violation(m, spec), [&] { return blocks_witness(spec); });
  };
  run(counterexample_spec());
  for (std::size_t t = 1; t < cfg.samples; ++t) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamC3, t));
    run(random_block_spec(cfg, rng));
  }
  return tally.finish();
}

VerificationReport check_b3(const MeasureHandle& m, const SuiteConfig& cfg) {
  require_kind(m, MeasureKind::Basis);
  cfg.validate();
  Tally tally(m, "B3", tolerance_for(m, cfg), cfg.seed);
  auto run = [&](const DensityState& rho, const KrausChannel& ch,
                 const std::string& name) {
    tally.record(b3_violation(m, rho, ch),
                 [&] { return channel_witness(rho, ch, name); });
  };
  run(counterexample_state().rho, projector_channel(2, 3), "projector");
  for (std::size_t t = 1; t < cfg.samples; ++t) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamB3, t));
    const Eigen::Index d = pick_dim(rng, cfg.dims);
    const Eigen::Index out =
        std::bernoulli_distribution(1.0 / 3.0)(rng) ? pick_dim(rng, cfg.dims) : d;
    const auto n_kraus = uniform_int<Eigen::Index>(rng, 1, 4);
    const DensityState rho = sample_state(d, rng);
    run(rho, random_incoherent_channel(d, out, n_kraus, rng()), "random");
  }
  return tally.finish();
}

VerificationReport check_b4(const MeasureHandle& m, const SuiteConfig& cfg) {
  require_kind(m, MeasureKind::Basis);
  cfg.validate();
  Tally tally(m, "B4", tolerance_for(m, cfg), cfg.seed);
  auto run = [&](const std::vector<double>& w,
                 const std::vector<DensityState>& states) {
    tally.record(b4_violation(m, w, states),
                 [&] { return ensemble_witness("ensemble", w, states); });
  };
  for (std::size_t t = 0; t < cfg.samples; ++t) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamB4, t));
    const Eigen::Index d = pick_dim(rng, cfg.dims);
    if (t == 0) {
      const DensityState rho = sample_state(d, rng);
      run(sample_weights(2, rng), {rho, rho});
      continue;
    }
    const std::size_t n = uniform_int<std::size_t>(rng, 2, 3);
    std::vector<DensityState> states;
    for (std::size_t k = 0; k < n; ++k) states.push_back(sample_state(d, rng));
    run(sample_weights(n, rng), states);
  }
  return tally.finish();
}

VerificationReport check_flag_monotonicity(const MeasureHandle& m,
                                           const SuiteConfig& cfg,
                                           bool require_equality) {
  require_kind(m, MeasureKind::Basis);
  cfg.validate();
  Tally tally(m, "flag", tolerance_for(m, cfg), cfg.seed);
  auto run = [&](const std::vector<double>& w,
                 const std::vector<DensityState>& states) {
    tally.record(flag_violation(m, w, states, require_equality), [&] {
      json doc = ensemble_witness("flag", w, states);
      doc["require_equality"] = require_equality;
      return doc;
    });
  };
  for (std::size_t t = 0; t < cfg.samples; ++t) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamFlag, t));
    const Eigen::Index d = pick_dim(rng, cfg.dims);
    if (t == 0) {
      // |0><0| (x) rho, padded with an unused flag.
      run({1.0, 0.0}, {sample_state(d, rng), sample_state(d, rng)});
      continue;
    }
    const std::size_t n = uniform_int<std::size_t>(rng, 2, 3);
    std::vector<DensityState> states;
    for (std::size_t k = 0; k < n; ++k) states.push_back(sample_state(d, rng));
    run(sample_weights(n, rng), states);
  }
  return tally.finish();
}

VerificationReport check_m1(const MeasureHandle& m, std::uint64_t h_seed,
                            const SuiteConfig& cfg) {
  require_kind(m, MeasureKind::Observable);
  cfg.validate();
  const double tol = cfg.tol_exact;
  Tally tally(m, "M1", tol, cfg.seed);
  auto run = [&](const DensityState& rho, const Observable& h, bool positive) {
    tally.record(positivity_violation(m(rho, h), positive, tol), [&] {
      return json{{"kind", "observable_state"},
                  {"expect_positive", positive},
                  {"state", state_to_json(rho)},
                  {"observable", observable_to_json(h)}};
    });
  };
  for (std::size_t t = 0; t < cfg.samples; ++t) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamM1, t));
    const Eigen::Index d = pick_dim(rng, cfg.dims);
    const Observable h =
        random_nondegenerate_observable(d, derive_seed(h_seed, kStreamM1, t));
    const auto eig = herm_eig(h.mat());
    const RVec p = random_probabilities(d, rng);
    const CMat commuting = eig.eigenvectors * p.cast<cplx>().asDiagonal() *
                           eig.eigenvectors.adjoint();
    run(make_density(commuting), h, false);
    if (d < 2) continue;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      DensityState rho = sample_state(d, rng);
      if (commutator(rho.mat(), h.mat()).norm() >= kMinCommutator) {
        run(rho, h, true);
        break;
      }
    }
  }
  return tally.finish();
}

VerificationReport check_m2(const MeasureHandle& m, std::uint64_t h_seed,
                            const SuiteConfig& cfg) {
  require_kind(m, MeasureKind::Observable);
  cfg.validate();
  Tally tally(m, "M2", cfg.tol_exact, cfg.seed);
  auto run = [&](const DensityState& rho, const Observable& h,
                 const KrausChannel& ch, const std::string& name) {
    tally.record(m2_violation(m, rho, h, ch), [&] {
      json doc = channel_witness(rho, ch, name);
      doc["kind"] = "observable_channel";
      doc["observable"] = observable_to_json(h);
      return doc;
    });
  };
  for (std::size_t t = 0; t < cfg.samples; ++t) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamM2, t));
    const Eigen::Index d = pick_dim(rng, cfg.dims);
    const Observable h =
        random_nondegenerate_observable(d, derive_seed(h_seed, kStreamM2, t));
    const DensityState rho = sample_state(d, rng);
    run(rho, h, random_translation_invariant_channel(h, rng()), "random");
  }
  for (std::size_t k = 0; k < cfg.dims.size(); ++k) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamM2, cfg.samples + k));
    const Eigen::Index d = cfg.dims[k];
    const Observable h = random_nondegenerate_observable(
        d, derive_seed(h_seed, kStreamM2, cfg.samples + k));
    run(sample_state(d, rng), h, unitary_channel(h.evolution(0.7)), "evolution");
    const auto eig = herm_eig(h.mat());
    std::vector<CMat> kraus;
    for (Eigen::Index i = 0; i < d; ++i) {
      kraus.push_back(eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint());
    }
    run(sample_state(d, rng), h, KrausChannel::make(d, d, std::move(kraus)),
        "eigenbasis-dephasing");
  }
  return tally.finish();
}

VerificationReport check_m3(const MeasureHandle& m, std::uint64_t h_seed,
                            const SuiteConfig& cfg) {
  require_kind(m, MeasureKind::Observable);
  cfg.validate();
  Tally tally(m, "M3", cfg.tol_exact, cfg.seed);
  for (std::size_t t = 0; t < cfg.samples; ++t) {
    Rng rng = make_rng(derive_seed(cfg.seed, kStreamM3, t));
    const BlockSpec spec = random_block_spec(cfg, rng);
    std::vector<Observable> parts;
    for (std::size_t k = 0; k < spec.blocks.size(); ++k) {
      parts.push_back(random_nondegenerate_observable(
          spec.blocks[k].dim(), derive_seed(h_seed, kStreamM3, t * 4 + k)));
    }
    tally.record(m3_violation(m, spec, parts), [&] {
      json doc = blocks_witness(spec);
      doc["kind"] = "observable_blocks";
      doc["observables"] = observables_to_json(parts);
      return doc;
    });
  }
  return tally.finish();
}

std::vector<VerificationReport> check_ms(const MeasureHandle& m,
                                         std::uint64_t h_seed,
                                         const SuiteConfig& cfg) {
  return {check_m1(m, h_seed, cfg), check_m2(m, h_seed, cfg),
          check_m3(m, h_seed, cfg)};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"c1", "c2", "c3", "b3",
                                              "b4", "flag", "ms"};
  return names;
}

std::vector<VerificationReport> run_suite(const MeasureHandle& m,
                                          const std::string& suite,
                                          const SuiteConfig& cfg) {
  if (suite == "c1") return {check_c1(m, cfg)};
  if (suite == "c2") return {check_c2(m, cfg)};
  if (suite == "c3") return {check_c3(m, cfg)};
  if (suite == "b3") return {check_b3(m, cfg)};
  if (suite == "b4") return {check_b4(m, cfg)};
  if (suite == "flag") return {check_flag_monotonicity(m, cfg)};
  if (suite == "ms") return check_ms(m, cfg.seed, cfg);
  throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "'");
}

double replay_witness(const MeasureHandle& m, const VerificationReport& r) {
  if (!r.witness) {
    throw Error(ErrorKind::InvalidArgument, "report carries no witness");
  }
  const json& w = *r.witness;
  const std::string& c = r.condition;
  if (c == "C1") {
    return positivity_violation(m(state_from_json(w.at("state"))),
                                w.at("expect_positive").get<bool>(),
                                r.tolerance);
  }
  if (c == "C2" || c == "B3") {
    const DensityState rho = state_from_json(w.at("state"));
    const KrausChannel ch = channel_from_json(w.at("channel"));
    return c == "C2" ? c2_violation(m, rho, ch) : b3_violation(m, rho, ch);
  }
  if (c == "C3" || c == "M3") {
    BlockSpec spec{w.at("weights").get<std::vector<double>>(),
                   states_from_json(w.at("blocks"))};
    if (c == "C3") return c3_violation(m, spec);
    return m3_violation(m, spec, observables_from_json(w.at("observables")));
  }
  if (c == "B4" || c == "flag") {
    const auto weights = w.at("weights").get<std::vector<double>>();
    const auto states = states_from_json(w.at("states"));
    if (c == "B4") return b4_violation(m, weights, states);
    return flag_violation(m, weights, states,
                          w.at("require_equality").get<bool>());
  }
  if (c == "M1") {
    return positivity_violation(
        m(state_from_json(w.at("state")), observable_from_json(w.at("observable"))),
        w.at("expect_positive").get<bool>(), r.tolerance);
  }
  if (c == "M2") {
    return m2_violation(m, state_from_json(w.at("state")),
                        observable_from_json(w.at("observable")),
                        channel_from_json(w.at("channel")));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown condition '" + c + "'");
}

json report_to_json(const VerificationReport& r) {
  return json{{"measure", r.measure},
              {"condition", r.condition},
              {"passed", r.passed},
              {"trials", r.trials},
              {"worst_violation", r.worst_violation},
              {"tolerance", r.tolerance},
              {"witness", r.witness ? *r.witness : json(nullptr)},
              {"seed", r.seed}};
}

VerificationReport report_from_json(const json& doc) {
  VerificationReport r;
  try {
    r.measure = doc.at("measure").get<std::string>();
    r.condition = doc.at("condition").get<std::string>();
    r.passed = doc.at("passed").get<bool>();
    r.trials = doc.at("trials").get<std::size_t>();
    r.worst_violation = doc.at("worst_violation").get<double>();
    r.tolerance = doc.at("tolerance").get<double>();
    if (!doc.at("witness").is_null()) r.witness = doc.at("witness");
    r.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("report: ") + e.what());
  }
  return r;
}

CounterexampleRecord reproduce_counterexample(double tol, std::uint64_t seed) {
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  }
  OptOptions opts;
  opts.tol = std::min(tol / 10.0, 1e-6);
  opts.seed = seed;
  const auto states = counterexample_state();

  CounterexampleRecord r;
  r.tol = tol;
  r.c_rho1 = trace_norm_coherence(states.rho1, opts);
  r.c_rho2 = trace_norm_coherence(states.rho2, opts);
  r.rhs = 0.5 * r.c_rho1 + 0.5 * r.c_rho2;

  RVec delta0 = RVec::Zero(5);
  delta0.head(2).setConstant(0.5);
  r.delta0_bound = diag_objective(states.rho.mat(), delta0);

  const OptResult opt =
      minimize_trace_distance(states.rho, DiagConstraint::Simplex, opts);
  if (!opt.converged) throw NotConvergedError(opt);
  r.optimizer_value = opt.value;
  r.optimizer_lower_bound = opt.lower_bound;
  r.additivity_gap = r.rhs - std::min(r.delta0_bound, r.optimizer_value);

  r.rho1_matches = std::abs(r.c_rho1 - 1.0) <= tol;
  r.rho2_matches = std::abs(r.c_rho2 - 4.0 / 3.0) <= tol;
  r.upper_bound_holds = r.delta0_bound <= 1.0 + tol && r.optimizer_value <= 1.0 + tol;
  r.additivity_fails = r.additivity_gap >= 7.0 / 6.0 - 1.0 - 2.0 * tol;
  return r;
}

json counterexample_to_json(const CounterexampleRecord& r) {
  return json{{"c_tr_rho1", r.c_rho1},
              {"c_tr_rho2", r.c_rho2},
              {"rhs", r.rhs},
              {"lhs_upper_bound", r.delta0_bound},
              {"lhs_optimizer", r.optimizer_value},
              {"lhs_lower_bound", r.optimizer_lower_bound},
              {"additivity_gap", r.additivity_gap},
              {"tol", r.tol},
              {"reproduced", r.reproduced()}};
}

double flag_identity_residual(const KrausChannel& ch, const DensityState& rho) {
  const auto flags = static_cast<Eigen::Index>(ch.kraus().size());
  const DensityState input = make_density(kron(basis_projector(flags, 0), rho.mat()));
  const DensityState lifted = apply(flag_channel(ch), input);
  CMat expected = CMat::Zero(lifted.dim(), lifted.dim());
  for (const auto& outcome : selective_outcomes(ch, rho)) {
    if (!outcome.state) continue;
    expected += outcome.probability *
                kron(basis_projector(flags, static_cast<Eigen::Index>(outcome.index)),
                     outcome.state->mat());
  }
  return max_entry_diff(lifted.mat(), expected);
}

double merge_identity_residual(const std::vector<double>& weights,
                               const std::vector<DensityState>& states) {
  const auto flags = static_cast<Eigen::Index>(states.size());
  const Eigen::Index d = states.front().dim();
  const DensityState merged =
      apply(merge_flag_channel(flags, d), flagged_state(weights, states));
  const CMat expected =
      kron(basis_projector(flags, 0), mixture(weights, states).mat());
  return max_entry_diff(merged.mat(), expected);
}

double embed_truncate_residual(const DensityState& rho, Eigen::Index n2) {
  const DensityState padded = apply(embed_channel(rho.dim(), n2), rho);
  const DensityState back = apply(truncate_channel(rho.dim(), n2), padded);
  return max_entry_diff(back.mat(), rho.mat());
}

namespace controls {

MeasureHandle constant_zero() {
  MeasureHandle m;
  m.name = "constant-zero";
  m.basis = [](const DensityState&) { return 0.0; };
  return m;
}

MeasureHandle squared_offdiagonal() {
  MeasureHandle m;
  m.name = "squared-offdiagonal";
  m.basis = [](const DensityState& rho) {
    const CMat sq = rho.mat() * rho.mat();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < sq.cols(); ++j) {
      for (Eigen::Index i = 0; i < sq.rows(); ++i) {
        if (i != j) worst = std::max(worst, std::abs(sq(i, j)));
      }
    }
    return worst;
  };
  return m;
}

}  // namespace controls

}  // namespace cohframe
