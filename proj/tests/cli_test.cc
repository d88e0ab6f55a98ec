// Copyright 2026 The Auto-GDA Authors.
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

// Drives the autogda binary end to end.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "autogda/corpus.h"
#include "autogda/run_config.h"
#include "autogda/simlab.h"

namespace autogda {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("autogda_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Outcome run(const std::string& args) const {
    const std::string log = path("stdout.txt");
    const std::string cmd = std::string("env -u AUTOGDA_CACHE_DIR \"") + AUTOGDA_CLI +
                            "\" " + args + " > \"" + log + "\" 2> \"" +
                            path("stderr.txt") + "\"";
    const int status = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.out = slurp(log);
    return o;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  // Sim-backend config plus the matching targets file.
  void write_sim_inputs() const {
    json cfg = {{"samples_per_evidence", 4},
                {"max_iterations", 1},
                {"seed", 5},
                {"backend", "sim"},
                {"sim", {{"seed", 5}, {"n_evidences", 4}, {"facts_per_evidence", 5}}}};
    write("sim.json", cfg.dump());
    const World w = make_world(5, 4, 5);
    std::string text;
    for (const EvidenceTargets& t : w.targets()) {
      for (const std::string& c : t.claims) {
        text += json{{"evidence_id", t.evidence.evidence_id},
                     {"evidence", t.evidence.text},
                     {"claim", c}}
                    .dump() +
                "\n";
      }
    }
    write("targets.jsonl", text);
  }

  fs::path dir_;
};

TEST_F(Cli, UsageErrorsExitWithOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("run --config x.json --out y.jsonl").code, 1);
  EXPECT_EQ(run("simulate --runs 0").code, 1);
  EXPECT_EQ(run("simulate --runs 1 --teacher-noise 2").code, 1);
  EXPECT_EQ(run("run --config " + path("missing.json") + " --targets t --out o").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, PerfectSimulatorScoresOne) {
  const Outcome o = run(
      "simulate --runs 1 --n-evidence 4 --samples-per-evidence 4 --iterations 1 "
      "--teacher-noise 0 --generator-fidelity 1 --compare-random");
  ASSERT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("seed 0: objective 1.0000 random 1.0000"), std::string::npos)
      << o.out;
  EXPECT_NE(o.out.find("objective non-increasing on every evidence: yes"),
            std::string::npos);
}

TEST_F(Cli, SimRunIsReproducibleAndResumable) {
  write_sim_inputs();
  const std::string base = "run --config " + path("sim.json") + " --targets " +
                           path("targets.jsonl");
  ASSERT_EQ(run(base + " --out " + path("a.jsonl") + " --report " + path("a.json")).code, 0);
  ASSERT_EQ(run(base + " --out " + path("b.jsonl") + " --report " + path("b.json") +
                " --workers 3")
                .code,
            0);
  EXPECT_FALSE(slurp(path("a.jsonl")).empty());
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));

  const std::string ck = " --checkpoint-dir " + path("ck");
  ASSERT_EQ(run(base + ck + " --out " + path("c.jsonl")).code, 0);
  for (const auto& e : fs::directory_iterator(path("ck"))) {
    if (!e.path().filename().string().ends_with("-0000.json")) fs::remove(e.path());
  }
  ASSERT_EQ(run(base + ck + " --resume --out " + path("d.jsonl") + " --report " +
                path("d.json"))
                .code,
            0);
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("d.jsonl")));
  EXPECT_EQ(slurp(path("a.json")), slurp(path("d.json")));

  const Outcome inspect = run("inspect --checkpoint-dir " + path("ck"));
  EXPECT_EQ(inspect.code, 0);
  EXPECT_NE(inspect.out.find("e003"), std::string::npos);
  EXPECT_EQ(run("inspect --dataset " + path("a.jsonl")).code, 0);
  EXPECT_EQ(run("inspect --dataset " + path("a.jsonl") + ck).code, 1);
  EXPECT_EQ(run(base + " --resume --out " + path("e.jsonl")).code, 1);
}

TEST_F(Cli, ScoreErrors) {
  write_sim_inputs();
  ASSERT_EQ(run("run --config " + path("sim.json") + " --targets " +
                path("targets.jsonl") + " --out " + path("a.jsonl"))
                .code,
            0);
  const std::string cfg = " --config " + path("sim.json");
  const Outcome ok = run("score" + cfg + " --dataset " + path("a.jsonl") +
                         " --targets " + path("targets.jsonl"));
  ASSERT_EQ(ok.code, 0);
  const std::string dataset = slurp(path("a.jsonl"));
  EXPECT_EQ(std::count(ok.out.begin(), ok.out.end(), '\n'),
            std::count(dataset.begin(), dataset.end(), '\n'));

  // Targets without e000 leave its samples unscorable.
  std::istringstream lines(slurp(path("targets.jsonl")));
  std::string partial;
  for (std::string l; std::getline(lines, l);) {
    if (l.find("\"e000\"") == std::string::npos) partial += l + "\n";
  }
  write("partial.jsonl", partial);
  EXPECT_EQ(run("score" + cfg + " --dataset " + path("a.jsonl") + " --targets " +
                path("partial.jsonl"))
                .code,
            4);
  EXPECT_EQ(run("score" + cfg + " --dataset " + path("a.jsonl") + " --targets " +
                path("nope.jsonl"))
                .code,
            2);
  write("bad.jsonl", "{\"evidence_id\": \"e000\", \"claim\": \n");
  EXPECT_EQ(run("score" + cfg + " --dataset " + path("a.jsonl") + " --targets " +
                path("bad.jsonl"))
                .code,
            4);
  EXPECT_EQ(run("run" + cfg + " --targets " + path("bad.jsonl") + " --out " +
                path("x.jsonl"))
                .code,
            4);
}

TEST_F(Cli, UnreachableServicesExitWithThree) {
  write_sim_inputs();
  const std::string url = "http://127.0.0.1:1";
  json cfg = {{"samples_per_evidence", 2},
              {"max_iterations", 1},
              {"endpoints",
               {{"complete", url}, {"entail", url}, {"utility", url}, {"embed", url},
                {"paraphrase", url}, {"timeout_seconds", 1}, {"retries", 1}}}};
  write("http.json", cfg.dump());
  const Outcome o = run("run --config " + path("http.json") + " --targets " +
                        path("targets.jsonl") + " --out " + path("o.jsonl"));
  EXPECT_EQ(o.code, 3) << slurp(path("stderr.txt"));
  EXPECT_FALSE(fs::exists(path("o.jsonl")));
}

TEST(ConfigPresets, LoadWithPublishedHyperparameters) {
  struct Preset {
    const char* file;
    int k;
    int iterations;
    double lambda_d;
    double lambda_u;
  };
  for (const Preset& p : {Preset{"ragtruth_qa.json", 12, 2, 32.67, 20.57},
                          Preset{"ragtruth_summary.json", 12, 2, 198.85, 19.51},
                          Preset{"lfqa.json", 4, 1, 25.27, 6.83},
                          Preset{"summedits.json", 32, 1, 0.02, 92.11}}) {
    SCOPED_TRACE(p.file);
    const RunConfig c = load_run_config(std::string(AUTOGDA_CONFIG_DIR) + "/" + p.file);
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.samples_per_evidence, p.k);
    EXPECT_EQ(c.max_iterations, p.iterations);
    EXPECT_EQ(c.weights.lambda_d, p.lambda_d);
    EXPECT_EQ(c.weights.lambda_u, p.lambda_u);
    EXPECT_EQ(c.offspring.total(), 12);
  }
  const RunConfig sim = load_run_config(std::string(AUTOGDA_CONFIG_DIR) + "/sim.json");
  EXPECT_EQ(sim.backend, "sim");
  EXPECT_NO_THROW(sim.validate());
}

}  // namespace
}  // namespace autogda
