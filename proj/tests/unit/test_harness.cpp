// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "elaa/errors.hpp"
#include "elaa/harness.hpp"

namespace elaa {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Harness, SeedRanges) {
  EXPECT_EQ(parse_seed_range("1..4"), (std::vector<std::uint64_t>{1, 2, 3, 4}));
  EXPECT_EQ(parse_seed_range("7"), (std::vector<std::uint64_t>{7}));
  EXPECT_EQ(parse_seed_range("5,2,9"), (std::vector<std::uint64_t>{5, 2, 9}));
  EXPECT_THROW(parse_seed_range("4..1"), ConfigError);
  EXPECT_THROW(parse_seed_range("x"), ConfigError);
  EXPECT_THROW(parse_seed_range(""), ConfigError);
}

TEST(Harness, ExperimentNames) {
  for (Experiment e : {Experiment::convergence, Experiment::power_vs_s, Experiment::power_vs_users}) {
    EXPECT_EQ(experiment_from_string(to_string(e)), e);
  }
  EXPECT_EQ(experiment_from_string("power_vs_S"), Experiment::power_vs_s);
  EXPECT_THROW(experiment_from_string("nope"), ConfigError);
}

TEST(Harness, DefaultSweeps) {
  for (bool full : {false, true}) {
    for (Experiment e : {Experiment::convergence, Experiment::power_vs_s, Experiment::power_vs_users}) {
      const auto sweep = default_sweep(e, full);
      ASSERT_FALSE(sweep.empty());
      for (const auto& p : sweep) {
        EXPECT_EQ(p.element_count() % p.elements_per_subarray, 0);
        EXPECT_GE(p.nfue_count + p.ffue_count, 1);
      }
    }
  }
  for (const auto& p : default_sweep(Experiment::power_vs_users, false)) EXPECT_EQ(p.nfue_count + p.ffue_count, 4);
}

TEST(Harness, Digests) {
  EXPECT_EQ(git_blob_digest("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(git_blob_digest(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(format_number(0.5), "5.0000000000e-01");
}

ExperimentSpec small_spec(Experiment e, const fs::path& out, int workers) {
  ExperimentSpec spec;
  spec.experiment = e;
  spec.base = desk_profile();
  spec.base.mc_samples = 32;
  spec.sweep = {SweepPoint{4, 4, 4, 1, 1}, SweepPoint{8, 4, 8, 1, 1}};
  spec.seeds = {1, 2, 3};
  spec.output_dir = out;
  spec.with_oracle = true;
  spec.workers = workers;
  return spec;
}

TEST(Harness, OutputIsIndependentOfWorkerCount) {
  const fs::path root = fs::temp_directory_path() / "elaa_harness_test";
  fs::remove_all(root);
  const ExperimentOutput a = run_experiment(small_spec(Experiment::convergence, root / "w1", 1));
  const ExperimentOutput b = run_experiment(small_spec(Experiment::convergence, root / "w3", 3));
  ASSERT_EQ(a.files, b.files);
  EXPECT_EQ(a.files, (std::vector<std::string>{"convergence.csv", "convergence_summary.csv", "convergence_runs.csv",
                                                "manifest.json"}));
  for (const auto& f : a.files) EXPECT_EQ(slurp(root / "w1" / f), slurp(root / "w3" / f)) << f;
  ASSERT_EQ(a.runs.size(), 6u);
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].point, static_cast<int>(i / 3));
    EXPECT_EQ(a.runs[i].seed, i % 3 + 1);
    EXPECT_TRUE(a.runs[i].has_oracle);
  }

  const nlohmann::json manifest = nlohmann::json::parse(slurp(root / "w1" / "manifest.json"));
  EXPECT_EQ(manifest["experiment"], "convergence");
  EXPECT_EQ(manifest["outputs"].size(), 3u);
  for (const auto& [file, entry] : manifest["outputs"].items()) {
    const std::string body = slurp(root / "w1" / file);
    EXPECT_EQ(entry["git_blob_sha1"], git_blob_digest(body));
    EXPECT_EQ(entry["bytes"], body.size());
  }
  fs::remove_all(root);
}

TEST(Harness, CsvShapes) {
  const fs::path root = fs::temp_directory_path() / "elaa_harness_csv";
  fs::remove_all(root);
  ExperimentSpec spec = small_spec(Experiment::power_vs_s, root, 1);
  spec.sweep.pop_back();
  const ExperimentOutput out = run_power_vs_s(spec);
  const std::string runs = runs_csv(out.runs);
  EXPECT_EQ(runs.substr(0, runs.find('\n')),
            "M_t,S,M_s,K_N,K_F,seed,scheme,power_W,active_subarrays,feasible,iterations,converged,binarity_gap");
  // 3 seeds x 4 schemes plus header.
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 13);

  const std::string summary = summary_csv(Experiment::power_vs_s, out.runs);
  std::istringstream lines(summary);
  std::string header, line;
  std::getline(lines, header);
  EXPECT_EQ(header, "M_t,S,M_s,K_N,K_F,scheme,mean_power_W,std_power_W,runs,feasible_runs");
  double mean = 0;
  for (const auto& r : out.runs) mean += r.all_on.power_W / 3;
  bool found = false;
  while (std::getline(lines, line)) {
    if (line.find(",all_subarrays,") == std::string::npos) continue;
    found = true;
    EXPECT_NE(line.find(format_number(mean)), std::string::npos) << line;
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(fs::exists(root / "power_vs_s_summary.csv"));
  EXPECT_FALSE(fs::exists(root / "power_vs_s.csv"));
  fs::remove_all(root);
}

}  // namespace
}  // namespace elaa
