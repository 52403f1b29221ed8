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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "cohframe/json_io.hpp"
#include "testing.hpp"

namespace cohframe {
namespace {

using testing::MatNear;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("cohframe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_state(const std::string& name, const DensityState& rho) const {
    write_json_file(path(name), state_to_json(rho));
    return path(name);
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, ComputeValues) {
  const auto psi3 = write_state("psi3.json", max_coherent(3));
  const auto diag = write_state("diag.json", make_density(testing::diag({0.2, 0.8})));

  auto r = run_cli({"compute", "--measure", "l1", "--state", psi3});
  ASSERT_EQ(r.code, 0) << r.err;
  json doc = json::parse(r.out);
  EXPECT_NEAR(doc.at("value").get<double>(), 2.0, 1e-12);
  EXPECT_EQ(doc.at("measure"), "l1");
  EXPECT_EQ(doc.at("dim"), 3);
  EXPECT_TRUE(doc.contains("tol"));
  EXPECT_EQ(doc.at("seed"), 0);

  r = run_cli({"compute", "--measure", "trace-norm", "--state", psi3});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out).at("value").get<double>(), 4.0 / 3.0, 1e-5);

  r = run_cli({"compute", "--measure", "rel-entropy", "--state", diag});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out).at("value").get<double>(), 0.0);
}

TEST_F(CliTest, ComputeSkewInfoNeedsObservable) {
  const auto rho = write_state("rho.json", random_density(2, 1, 3));
  auto r = run_cli({"compute", "--measure", "skew-info", "--state", rho});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("observable"), std::string::npos);

  write_json_file(path("h.json"), observable_to_json(Observable::make(testing::diag({0, 1}))));
  r = run_cli({"compute", "--measure", "skew-info", "--state", rho, "--observable", path("h.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GT(json::parse(r.out).at("value").get<double>(), 0.0);
}

TEST_F(CliTest, ExitCodes) {
  const auto psi3 = write_state("psi3.json", max_coherent(3));
  EXPECT_EQ(run_cli({"compute", "--measure", "nope", "--state", psi3}).code, 2);
  EXPECT_EQ(run_cli({"compute", "--measure", "l1", "--state", path("missing.json")}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"compute", "--measure", "l1", "--state", psi3, "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"verify", "--measure", "l1", "--suite", "ms"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--measure", "l1", "--suite", "c9"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "--measure", "l1", "--samples", "0"}).code, 2);
  EXPECT_EQ(run_cli({"mk-state", "--kind", "weird"}).code, 2);
  EXPECT_EQ(run_cli({"mk-state", "--kind", "random", "--dim", "3", "--rank", "5"}).code, 2);
  EXPECT_EQ(run_cli({"reproduce", "--case", "eq99"}).code, 2);

  std::ofstream(path("bad.json")) << R"({"dim":2,"re":[[0.6,0],[0,0.6]],"im":[[0,0],[0,0]]})";
  const auto bad = run_cli({"compute", "--measure", "l1", "--state", path("bad.json")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("NotUnitTrace"), std::string::npos);

  std::ofstream(path("junk.json")) << "[1, 2";
  EXPECT_EQ(run_cli({"compute", "--measure", "l1", "--state", path("junk.json")}).code, 2);

  const auto rnd = write_state("rnd.json", random_density(4, 4, 9));
  const auto nc = run_cli({"compute", "--measure", "trace-norm", "--state", rnd, "--max-iter", "2"});
  EXPECT_EQ(nc.code, 3);
  EXPECT_NE(nc.err.find("NotConverged"), std::string::npos);
}

TEST_F(CliTest, VerifyTraceNormC3FailsWithCounterexample) {
  const auto r = run_cli({"verify", "--measure", "trace-norm", "--suite", "c3", "--seed", "7"});
  ASSERT_EQ(r.code, 1) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc[0].at("condition"), "C3");
  EXPECT_FALSE(doc[0].at("passed").get<bool>());
  const json& w = doc[0].at("witness");
  const auto spec = counterexample_spec();
  EXPECT_EQ(w.at("weights").get<std::vector<double>>(), spec.weights);
  EXPECT_TRUE(MatNear(state_from_json(w.at("blocks")[0]).mat(), spec.blocks[0].mat(), 0.0));
  EXPECT_TRUE(MatNear(state_from_json(w.at("blocks")[1]).mat(), spec.blocks[1].mat(), 0.0));
}

TEST_F(CliTest, VerifyPassingSuites) {
  auto r = run_cli({"verify", "--measure", "l1", "--suite", "c1,c2,c3", "--samples", "200",
                    "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json::parse(r.out).size(), 3u);

  r = run_cli({"verify", "--measure", "skew-info", "--suite", "ms", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json::parse(r.out).size(), 3u);
}

TEST_F(CliTest, VerifyWritesFilesAndMarkdown) {
  const auto out = path("report.json");
  const auto r = run_cli({"verify", "--measure", "l1", "--suite", "c1,b4", "--samples", "20",
                          "--out", out, "--md"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = read_json_file(out);
  EXPECT_EQ(doc.size(), 2u);
  std::ifstream md(path("report.md"));
  std::stringstream text;
  text << md.rdbuf();
  EXPECT_NE(text.str().find("| l1 | C1 | pass |"), std::string::npos);
  EXPECT_NE(text.str().find("| l1 | B4 | pass |"), std::string::npos);

  const auto stdout_md = run_cli({"verify", "--measure", "l1", "--suite", "c1", "--samples", "5", "--md"});
  EXPECT_NE(stdout_md.out.find("| measure | condition |"), std::string::npos);
}

TEST_F(CliTest, VerifyIsDeterministic) {
  const std::vector<std::string> args{"verify", "--measure", "mod-trace-norm", "--suite", "c3,b4",
                                      "--samples", "8", "--seed", "3", "--dims", "2,3"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST_F(CliTest, Reproduce) {
  auto r = run_cli({"reproduce", "--case", "eq17"});
  ASSERT_EQ(r.code, 0) << r.out;
  json doc = json::parse(r.out);
  ASSERT_EQ(doc.at("rows").size(), 4u);
  for (const auto& row : doc.at("rows")) {
    const int d = row.at("d");
    EXPECT_NEAR(row.at("computed").get<double>(), 2.0 * (d - 1) / d, 1e-5);
  }

  r = run_cli({"reproduce", "--case", "eq18"});
  ASSERT_EQ(r.code, 0) << r.out;
  doc = json::parse(r.out);
  EXPECT_NEAR(doc.at("lhs_upper_bound").get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(doc.at("rhs").get<double>(), 7.0 / 6.0, 1e-5);
  EXPECT_TRUE(doc.at("reproduced").get<bool>());

  r = run_cli({"reproduce", "--case", "entropy-additivity"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_LT(json::parse(r.out).at("max_residual").get<double>(), 1e-8);

  r = run_cli({"reproduce", "--case", "flag-identities"});
  ASSERT_EQ(r.code, 0) << r.out;
  doc = json::parse(r.out);
  EXPECT_LT(doc.at("flag_residual").get<double>(), 1e-10);
  EXPECT_LT(doc.at("merge_residual").get<double>(), 1e-10);
}

TEST_F(CliTest, MkStateKinds) {
  auto r = run_cli({"mk-state", "--kind", "max-coherent", "--dim", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(MatNear(state_from_json(json::parse(r.out)).mat(), CMat::Constant(3, 3, 1.0 / 3), 1e-16));

  r = run_cli({"mk-state", "--kind", "counterexample"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(MatNear(state_from_json(json::parse(r.out)).mat(), counterexample_state().rho.mat(), 0.0));

  const std::vector<std::string> args{"mk-state", "--kind", "random", "--dim", "4", "--rank", "2",
                                      "--seed", "11"};
  r = run_cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run_cli(args).out, r.out);
  const RVec ev = herm_eigenvalues(state_from_json(json::parse(r.out)).mat());
  EXPECT_LT(ev(1), 1e-12);
  EXPECT_GT(ev(2), 1e-6);
}

TEST_F(CliTest, MkStateThenComputeRoundTrip) {
  for (const auto& name : {"rel-entropy", "l1", "mod-trace-norm"}) {
    const auto ce = path("ce.json");
    ASSERT_EQ(run_cli({"mk-state", "--kind", "counterexample", "--out", ce}).code, 0);
    EXPECT_EQ(run_cli({"compute", "--measure", name, "--state", ce}).code, 0) << name;
  }
  for (int d = 1; d <= 16; ++d) {
    for (const auto* kind : {"max-coherent", "random"}) {
      const auto file = path("s.json");
      ASSERT_EQ(run_cli({"mk-state", "--kind", kind, "--dim", std::to_string(d), "--seed",
                         std::to_string(d), "--out", file})
                    .code,
                0);
      for (const auto* name : {"rel-entropy", "l1"}) {
        const auto r = run_cli({"compute", "--measure", name, "--state", file});
        EXPECT_EQ(r.code, 0) << kind << " " << d << " " << r.err;
      }
    }
  }
  // Optimizer-backed measures on a representative subset of sizes.
  for (int d : {1, 2, 5, 8}) {
    const auto file = path("t.json");
    ASSERT_EQ(run_cli({"mk-state", "--kind", "random", "--dim", std::to_string(d), "--out", file}).code, 0);
    for (const auto* name : {"trace-norm", "mod-trace-norm"}) {
      const auto r = run_cli({"compute", "--measure", name, "--state", file});
      EXPECT_EQ(r.code, 0) << name << " " << d << " " << r.err;
    }
  }
}

}  // namespace
}  // namespace cohframe
