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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cohframe/framework.hpp"

namespace cohframe::cli {

namespace {

struct ComputeArgs {
  std::string measure;
  std::string state;
  std::string observable;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 50000;
};

struct VerifyArgs {
  std::string measure;
  std::vector<std::string> suites;
  std::vector<long> dims{2, 3};
  std::size_t samples = 50;
  std::uint64_t seed = 0;
  double tol_exact = 1e-8;
  double tol_opt = 1e-4;
  std::string out;
  bool markdown = false;
};

struct ReproduceArgs {
  std::string which;
  std::uint64_t seed = 0;
  double tol = 1e-5;
};

struct MkStateArgs {
  std::string kind;
  long dim = 2;
  long rank = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void emit(std::ostream& out, const std::string& path, const json& doc) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    write_json_file(path, doc);
  }
}

int cmd_compute(const ComputeArgs& a, std::ostream& out) {
  OptOptions opts;
  opts.tol = a.tol;
  opts.seed = a.seed;
  opts.max_iterations = a.max_iterations;
  const MeasureHandle m = make_measure(a.measure, opts);
  const DensityState rho = state_from_json(read_json_file(a.state));
  double value = 0.0;
  if (m.kind == MeasureKind::Observable) {
    if (a.observable.empty()) {
      throw Error(ErrorKind::InvalidArgument,
                  "measure '" + a.measure + "' requires --observable");
    }
    value = m(rho, observable_from_json(read_json_file(a.observable)));
  } else {
    value = m(rho);
  }
  out << json{{"measure", a.measure},
              {"value", value},
              {"dim", rho.dim()},
              {"tol", a.tol},
              {"seed", a.seed}}
             .dump(2)
      << '\n';
  return kOk;
}

std::string markdown_report(const std::vector<VerificationReport>& reports) {
  std::ostringstream md;
  md << "| measure | condition | result | trials | worst violation | tolerance |\n"
     << "|---|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    md << "| " << r.measure << " | " << r.condition << " | "
       << (r.passed ? "pass" : "FAIL") << " | " << r.trials << " | "
       << r.worst_violation << " | " << r.tolerance << " |\n";
  }
  return md.str();
}

int cmd_verify(VerifyArgs a, std::ostream& out) {
  const MeasureHandle m = make_measure(a.measure);
  if (a.suites.empty()) {
    if (m.kind == MeasureKind::Observable) {
      a.suites = {"ms"};
    } else {
      a.suites = {"c1", "c2", "c3", "b3", "b4", "flag"};
    }
  }
  for (const auto& s : a.suites) {
    const auto& known = suite_names();
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw Error(ErrorKind::InvalidArgument, "unknown suite '" + s + "'");
    }
    const bool observable_suite = s == "ms";
    if (observable_suite != (m.kind == MeasureKind::Observable)) {
      throw Error(ErrorKind::InvalidArgument,
                  "suite '" + s + "' does not apply to measure '" + a.measure + "'");
    }
  }
  SuiteConfig cfg;
  cfg.dims.assign(a.dims.begin(), a.dims.end());
  cfg.samples = a.samples;
  cfg.seed = a.seed;
  cfg.tol_exact = a.tol_exact;
  cfg.tol_opt = a.tol_opt;
  cfg.opt.seed = a.seed;
  cfg.validate();

  const MeasureHandle configured = make_measure(a.measure, cfg.opt);
  std::vector<VerificationReport> reports;
  for (const auto& s : a.suites) {
    for (auto& r : run_suite(configured, s, cfg)) reports.push_back(std::move(r));
  }
  json doc = json::array();
  bool all_passed = true;
  for (const auto& r : reports) {
    doc.push_back(report_to_json(r));
    all_passed = all_passed && r.passed;
  }
  emit(out, a.out, doc);
  if (a.markdown) {
    const std::string md = markdown_report(reports);
    if (a.out.empty()) {
      out << '\n' << md;
    } else {
      std::ofstream(std::filesystem::path(a.out).replace_extension(".md")) << md;
    }
  }
  return all_passed ? kOk : kConditionFailed;
}

int cmd_reproduce(const ReproduceArgs& a, std::ostream& out) {
  json doc{{"case", a.which}};
  bool ok = true;
  if (a.which == "eq17") {
    OptOptions opts;
    opts.seed = a.seed;
    json rows = json::array();
    for (int d = 2; d <= 5; ++d) {
      const double computed = trace_norm_coherence(max_coherent(d), opts);
      const double expected = 2.0 * (d - 1) / d;
      const double residual = std::abs(computed - expected);
      ok = ok && residual < a.tol;
      rows.push_back({{"d", d}, {"computed", computed}, {"expected", expected},
                      {"residual", residual}});
    }
    doc["rows"] = rows;
  } else if (a.which == "eq18") {
    const CounterexampleRecord r = reproduce_counterexample(a.tol, a.seed);
    doc.update(counterexample_to_json(r));
    ok = r.reproduced();
  } else if (a.which == "entropy-additivity") {
    double worst = 0.0;
    const std::size_t trials = 100;
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng = make_rng(derive_seed(a.seed, 0xE17, t));
      const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const auto d1 = uniform_int<Eigen::Index>(rng, 1, 5);
      const auto d2 = uniform_int<Eigen::Index>(rng, 1, 5);
      const DensityState r1 = random_density(d1, uniform_int<Eigen::Index>(rng, 1, d1), rng());
      const DensityState r2 = random_density(d2, uniform_int<Eigen::Index>(rng, 1, d2), rng());
      const double lhs = von_neumann_entropy(block_mix({{p, 1.0 - p}, {r1, r2}}));
      RVec weights(2);
      weights << p, 1.0 - p;
      const double rhs = shannon_entropy(weights) + p * von_neumann_entropy(r1) +
                         (1.0 - p) * von_neumann_entropy(r2);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    ok = worst < 1e-8;
    doc["trials"] = trials;
    doc["max_residual"] = worst;
    doc["threshold"] = 1e-8;
  } else if (a.which == "flag-identities") {
    double worst7 = 0.0;
    double worst13 = 0.0;
    const std::size_t trials = 20;
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng = make_rng(derive_seed(a.seed, 0xF7, t));
      const auto d = uniform_int<Eigen::Index>(rng, 2, 4);
      const auto n = uniform_int<Eigen::Index>(rng, 2, 3);
      const DensityState rho = random_density(d, uniform_int<Eigen::Index>(rng, 1, d), rng());
      worst7 = std::max(worst7, flag_identity_residual(
                                    random_incoherent_channel(d, n, rng()), rho));
      std::vector<DensityState> states;
      for (Eigen::Index k = 0; k < n; ++k) states.push_back(random_density(d, d, rng()));
      const RVec p = random_probabilities(n, rng);
      worst13 = std::max(worst13, merge_identity_residual(
                                      std::vector<double>(p.data(), p.data() + n), states));
    }
    ok = worst7 < 1e-10 && worst13 < 1e-10;
    doc["trials"] = trials;
    doc["flag_residual"] = worst7;
    doc["merge_residual"] = worst13;
    doc["threshold"] = 1e-10;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown case '" + a.which + "'");
  }
  doc["ok"] = ok;
  out << doc.dump(2) << '\n';
  return ok ? kOk : kConditionFailed;
}

int cmd_mk_state(const MkStateArgs& a, std::ostream& out) {
  if (a.dim < 1) {
    throw Error(ErrorKind::InvalidArgument, "--dim must be >= 1");
  }
  std::optional<DensityState> rho;
  if (a.kind == "max-coherent") {
    rho = max_coherent(a.dim);
  } else if (a.kind == "random") {
    rho = random_density(a.dim, a.rank == 0 ? a.dim : a.rank, a.seed);
  } else if (a.kind == "counterexample") {
    rho = counterexample_state().rho;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown kind '" + a.kind + "'");
  }
  emit(out, a.out, state_to_json(*rho));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Coherence measures and framework-condition verifier", "cohframe"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Evaluate a coherence measure on a state file");
  c->add_option("--measure", compute.measure, "rel-entropy | l1 | trace-norm | mod-trace-norm | skew-info")
      ->required();
  c->add_option("--state", compute.state, "Density-state JSON document")->required();
  c->add_option("--observable", compute.observable, "Observable JSON document (skew-info)");
  c->add_option("--tol", compute.tol, "Optimizer tolerance")->check(CLI::PositiveNumber);
  c->add_option("--seed", compute.seed, "Optimizer multi-start seed");
  c->add_option("--max-iter", compute.max_iterations, "Optimizer iteration budget per start")
      ->check(CLI::PositiveNumber);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run framework-condition suites for a measure");
  v->add_option("--measure", verify.measure)->required();
  v->add_option("--suite", verify.suites, "c1,c2,c3,b3,b4,flag,ms")->delimiter(',');
  v->add_option("--dims", verify.dims, "Block/state dimensions")->delimiter(',');
  v->add_option("--samples", verify.samples)->check(CLI::PositiveNumber);
  v->add_option("--seed", verify.seed);
  v->add_option("--tol-exact", verify.tol_exact)->check(CLI::PositiveNumber);
  v->add_option("--tol-opt", verify.tol_opt)->check(CLI::PositiveNumber);
  v->add_option("--out", verify.out, "Report path (default: stdout)");
  v->add_flag("--md", verify.markdown, "Also emit a markdown summary");

  ReproduceArgs reproduce;
  auto* r = app.add_subcommand("reproduce", "Reproduce a closed form or identity");
  r->add_option("--case", reproduce.which, "eq17 | eq18 | entropy-additivity | flag-identities")
      ->required()
      ->check(CLI::IsMember({"eq17", "eq18", "entropy-additivity", "flag-identities"}));
  r->add_option("--seed", reproduce.seed);
  r->add_option("--tol", reproduce.tol)->check(CLI::PositiveNumber);

  MkStateArgs mk;
  auto* s = app.add_subcommand("mk-state", "Write a density-state JSON document");
  s->add_option("--kind", mk.kind, "max-coherent | random | counterexample")
      ->required()
      ->check(CLI::IsMember({"max-coherent", "random", "counterexample"}));
  s->add_option("--dim", mk.dim);
  s->add_option("--rank", mk.rank, "Rank for --kind random (default: dim)");
  s->add_option("--seed", mk.seed);
  s->add_option("--out", mk.out, "Output path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (c->parsed()) return cmd_compute(compute, out);
    if (v->parsed()) return cmd_verify(verify, out);
    if (r->parsed()) return cmd_reproduce(reproduce, out);
    if (s->parsed()) return cmd_mk_state(mk, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::NotConverged ? kNotConverged : kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace cohframe::cli
