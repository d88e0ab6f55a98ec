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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Uses only in-process mocks and the simulator.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "autogda/certainty.h"
#include "autogda/errors.h"
#include "autogda/experiment.h"
#include "autogda/gateway.h"
#include "autogda/prompts.h"
#include "autogda/selection.h"
#include "autogda/simlab.h"
#include "json.hpp"

namespace {

using namespace autogda;
using json = nlohmann::json;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int number, const char* title, double budget_s,
               const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.ok = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (v.ok && secs >= budget_s) {
    v.ok = false;
    v.detail = "over time budget";
  }
  char line[512];
  std::snprintf(line, sizeof line, "%s criterion %d: %s (%.2f s / %.0f s)%s%s\n",
                v.ok ? "PASS" : "FAIL", number, title, secs, budget_s,
                v.detail.empty() ? "" : " - ", v.detail.c_str());
  std::fputs(line, stdout);
  std::fflush(stdout);
  if (!v.ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(AUTOGDA_TEST_DATA) + "/golden/" + name,
                   std::ios::binary);
  if (!in) throw std::runtime_error("missing golden file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Gauss-integral quadrature at 50 digits (tests/oracles/digamma_oracle.py).
constexpr std::pair<double, double> kDigamma[] = {
    {0.5, -1.963510026021423479440976},
    {1.0, -0.5772156649015328606065121},
    {2.0, 0.4227843350984671393934879},
    {10.0, 2.251752589066721107647456},
    {99.5, 4.595124101325563804833503},
};

Verdict digamma_values() {
  Verdict v;
  for (auto [x, psi] : kDigamma) {
    v.require(std::abs(digamma(x) - psi) <= 1e-9, fmt("psi(%g) off by %.3g", x,
                                                      std::abs(digamma(x) - psi)));
  }
  v.require(digamma(2.0) - digamma(1.0) == 1.0, "psi(2) - psi(1) != 1");
  return v;
}

Verdict ldiv_values() {
  Verdict v;
  v.require(ldiv(1.0, 1) == 0.0, "ldiv(1,1) != 0");
  v.require(std::abs(ldiv(0.5, 0) - 1.0) <= 1e-9, "ldiv(0.5,0)");
  v.require(std::abs(ldiv(0.5, 1) - 1.0) <= 1e-9, "ldiv(0.5,1)");
  v.require(std::abs(ldiv(0.75, 1) - 1.0 / 3.0) <= 1e-9, "ldiv(0.75,1)");
  v.require(std::abs(ldiv(0.25, 1) - 11.0 / 6.0) <= 1e-9, "ldiv(0.25,1)");
  double prev = INFINITY;
  for (int i = 1; i <= 1000; ++i) {
    const double s = i / 1001.0;
    const double cur = ldiv(s, 1);
    v.require(cur < prev, fmt("not strictly decreasing at s = %g", s));
    prev = cur;
  }
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = u(gen);
    v.require(ldiv(r, 1) == ldiv(1.0 - r, 0), fmt("label symmetry at r = %g", r));
  }
  return v;
}

Verdict beta_solving() {
  Verdict v;
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(kCertaintyClamp, 1.0 - kCertaintyClamp);
  for (int i = 0; i < 1000; ++i) {
    const double r = u(gen);
    const int y = static_cast<int>(gen() & 1u);
    const BetaParams p = solve_beta_params(r, y);
    v.require(std::abs(p.mean() - r) <= 1e-9, fmt("mean off at r = %g", r));
    const double s = y == 1 ? r : 1.0 - r;
    if (s > 0.5) {
      const double mode = (p.alpha - 1.0) / (p.alpha + p.beta - 2.0);
      v.require(std::abs(mode - y) <= 1e-9, fmt("mode off at r = %g", r));
    }
    if (std::abs(r - 0.5) <= 1e-4) {
      v.require(std::max(std::abs(p.alpha - 1.0), std::abs(p.beta - 1.0)) <= 1e-3,
                fmt("not near uniform at r = %g", r));
    }
  }
  for (double r : {0.5, 0.5 + 1e-4, 0.5 - 1e-4}) {
    for (int y : {0, 1}) {
      const BetaParams p = solve_beta_params(r, y);
      v.require(std::max(std::abs(p.alpha - 1.0), std::abs(p.beta - 1.0)) <= 1e-3,
                fmt("not near uniform at r = %g", r));
    }
  }
  return v;
}

// Sum over every keep/flip path of the two-state chain.
double chain_oracle(double r0, const std::vector<double>& links) {
  double total = 0.0;
  const std::size_t n = links.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int start : {0, 1}) {
      double p = start == 1 ? r0 : 1.0 - r0;
      int state = start;
      for (std::size_t i = 0; i < n; ++i) {
        const bool keep = (mask >> i) & 1u;
        p *= keep ? links[i] : 1.0 - links[i];
        if (!keep) state = 1 - state;
      }
      if (state == 1) total += p;
    }
  }
  return total;
}

Verdict certainty_chain() {
  Verdict v;
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double r0 = u(gen);
    std::vector<double> links(1 + gen() % 10);
    for (double& t : links) t = u(gen);
    double r = r0;
    for (double t : links) r = update_certainty(r, t);
    const double want = chain_oracle(r0, links);
    v.require(std::abs(r - want) <= 1e-12, fmt("chain %g off by %.3g", trial,
                                               std::abs(r - want)));
  }
  return v;
}

// Minimum-sum subset by enumeration; equal sums prefer the lexicographically
// smallest sorted id list.
std::vector<std::string> exhaustive(const std::vector<ObjectiveBreakdown>& c,
                                    std::size_t k) {
  const std::size_t n = c.size();
  const std::size_t take = std::min(k, n);
  double best = INFINITY;
  std::vector<std::string> best_ids;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != take) continue;
    double sum = 0.0;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) {
        sum += c[i].contribution;
        ids.push_back(c[i].sample_id);
      }
    }
    std::sort(ids.begin(), ids.end());
    if (sum < best || (sum == best && ids < best_ids)) {
      best = sum;
      best_ids = ids;
    }
  }
  return best_ids;
}

Verdict greedy_selection() {
  Verdict v;
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + gen() % 12;
    const std::size_t k = 1 + gen() % 5;
    std::vector<ObjectiveBreakdown> pool(n);
    for (std::size_t i = 0; i < n; ++i) {
      pool[i].sample_id = "s" + std::to_string(100 + i);
      // Small integers so ties are common.
      pool[i].contribution = static_cast<double>(static_cast<int>(gen() % 5) - 2);
    }
    std::shuffle(pool.begin(), pool.end(), gen);
    std::vector<std::string> got = select_top_k(pool, k).selected;
    std::sort(got.begin(), got.end());
    v.require(got == exhaustive(pool, k), fmt("instance %g differs", trial));
  }
  return v;
}

ExperimentConfig lift_experiment(bool compare_random) {
  ExperimentConfig ec;
  ec.seed = 0;
  ec.runs = 20;
  ec.n_evidences = 30;
  ec.facts_per_evidence = 5;
  ec.params.teacher_noise = 0.3;
  ec.params.link_teacher_noise = 0.3;
  ec.params.generator_fidelity = 0.8;
  ec.pipeline = default_sim_run_config();  // K = 8, 2 iterations
  ec.compare_random = compare_random;
  return ec;
}

Verdict monotone_objective() {
  Verdict v;
  const ExperimentConfig ec = lift_experiment(false);
  v.require(ec.pipeline.samples_per_evidence == 8 &&
                ec.pipeline.offspring.total() == 12 && ec.pipeline.max_iterations == 2,
            "unexpected pipeline defaults");
  const ExperimentSummary s = run_experiment(ec);
  int evidences = 0;
  for (const SeedOutcome& o : s.seeds) {
    for (const auto& e : o.objective.report["evidences"]) {
      ++evidences;
      v.require(e["status"] == "ok", "evidence failed");
      const auto h = e["objective_history"].get<std::vector<double>>();
      for (std::size_t i = 1; i < h.size(); ++i) {
        v.require(h[i] <= h[i - 1], "objective increased in " +
                                        e["evidence_id"].get<std::string>());
      }
    }
  }
  v.require(evidences == 600, "expected 600 evidence runs");
  v.require(s.all_monotone, "trajectory increased");
  return v;
}

Verdict selection_lift() {
  Verdict v;
  const ExperimentSummary s = run_experiment(lift_experiment(true));
  v.detail = fmt("objective %.4f vs random %.4f", s.mean_objective, s.mean_random) +
             fmt(", lift %+.4f, sign test p = %.3g", s.mean_difference, s.sign_test_p);
  v.ok = s.mean_difference >= 0.03 && s.sign_test_p < 0.05;
  return v;
}

Verdict determinism() {
  Verdict v;
  const World world = make_world(0, 30, 5);
  RunConfig config = default_sim_run_config();
  config.seed = 0;
  const StrategyOutcome a = run_sim_once(world, config);
  config.workers = 1;
  const StrategyOutcome b = run_sim_once(world, config);
  v.require(!a.dataset_jsonl.empty(), "empty dataset");
  v.require(a.dataset_jsonl == b.dataset_jsonl, "datasets differ");
  v.require(a.report.dump() == b.report.dump(), "reports differ");

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("autogda_acceptance_cache_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  {
    Gateway cold(std::make_shared<SimTransport>(world),
                 std::make_shared<ResponseCache>(dir));
    const RunResult first = run_pipeline(config, world.targets(), cold);
    auto offline = std::make_shared<FunctionTransport>(
        [](Endpoint, const json&) -> json { throw TransportError("offline"); });
    Gateway warm(offline, std::make_shared<ResponseCache>(dir));
    const RunResult second = run_pipeline(config, world.targets(), warm);
    v.require(warm.upstream_requests() == 0 && offline->calls() == 0,
              "warm rerun went upstream");
    v.require(format_dataset(second.dataset) == a.dataset_jsonl,
              "warm rerun changed the dataset");
    v.require(second.report.dump() == first.report.dump(),
              "warm rerun changed the report");
  }
  std::filesystem::remove_all(dir);
  return v;
}

Verdict golden_files() {
  Verdict v;
  const std::vector<std::string> examples = {"The council passed the budget.",
                                             "The budget passed 9 to 0 on Friday."};
  const std::string doc =
      "The council approved the budget on Monday. The vote was 7 to 2.";
  v.require(render_initial_prompt(doc, examples, 3, 1) == golden("initial_entailed.txt"),
            "initial (entailed) prompt");
  v.require(render_initial_prompt(doc, examples, 3, 0) ==
                golden("initial_non_entailed.txt"),
            "initial (non-entailed) prompt");
  v.require(render_rephrase_prompt(
                "The council approved the budget on Monday after a long debate.",
                "The council approved the _ _ Monday after a long debate.", 3) ==
                golden("partial_rephrase.txt"),
            "partial rephrase prompt");
  v.require(render_entailment_prompt(doc, "The council passed the budget.") ==
                golden("entailment.txt"),
            "entailment prompt");
  for (const json& c : json::parse(golden("tagged_cases.json"))) {
    const std::string name = c["name"];
    if (c.value("error", false)) {
      bool threw = false;
      try {
        parse_tagged(c["text"].get<std::string>(), c["tag"].get<std::string>(),
                     c["n"].get<int>());
      } catch (const ParseError&) {
        threw = true;
      }
      v.require(threw, "tag case " + name + " should fail");
      continue;
    }
    const TaggedItems got = parse_tagged(c["text"].get<std::string>(),
                                         c["tag"].get<std::string>(), c["n"].get<int>());
    v.require(got.items == c["items"].get<std::vector<std::string>>() &&
                  got.missing == c["missing"].get<std::vector<int>>(),
              "tag case " + name);
  }
  return v;
}

}  // namespace

int main() {
  criterion(1, "digamma against quadrature oracle", 1, digamma_values);
  criterion(2, "LDiv golden values, monotonicity, label symmetry", 1, ldiv_values);
  criterion(3, "Beta parameter solve", 1, beta_solving);
  criterion(4, "certainty update equals two-state chain oracle", 1, certainty_chain);
  criterion(5, "greedy top-K equals exhaustive search", 5, greedy_selection);
  criterion(6, "objective non-increasing, 30 evidences x 20 seeds", 60,
            monotone_objective);
  criterion(7, "objective selection beats random selection", 120, selection_lift);
  criterion(8, "byte-identical reruns and warm cache", 60, determinism);
  criterion(9, "prompt and tag-parsing golden files", 1, golden_files);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
