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


#include "elaa/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "elaa/errors.hpp"
#include "elaa/metrics.hpp"

namespace elaa {

namespace {

std::string digest_hex(const EVP_MD* md, const std::string& content) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(content.data(), content.size(), out, &len, md, nullptr) != 1) {
    throw Error("message digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string text;
  text.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    text.push_back(hex[out[i] >> 4]);
    text.push_back(hex[out[i] & 0x0F]);
  }
  return text;
}

SeedRun run_one(const ExperimentSpec& spec, int point, std::uint64_t seed) {
  const SweepPoint& layout = spec.sweep[static_cast<std::size_t>(point)];
  SystemConfig config = spec.base.with_layout(layout.elements_x, layout.elements_y, layout.elements_per_subarray)
                            .with_users(layout.nfue_count, layout.ffue_count);
  config = config.resolve_placements(seed);

  const SystemModel model = build_system_model(config);
  const QoSTargets targets = derive_qos_targets(model);

  SeedRun run;
  run.point = point;
  run.seed = seed;
  run.layout = layout;
  run.proposed = run_sca(model, targets, spec.qcqp);
  run.all_on = all_subarrays(model, targets);
  RngStream rng(seed, Stream::random_baseline);
  run.random = random_activation(model, targets, rng, std::max(1, run.proposed.activation.active_count()));
  if (spec.with_oracle && model.subarray_count() <= spec.oracle_max_subarrays) {
    run.has_oracle = true;
    run.oracle = exhaustive_oracle(model, targets);
  }
  return run;
}

std::vector<SeedRun> run_jobs(const ExperimentSpec& spec) {
  const std::size_t points = spec.sweep.size();
  const std::size_t jobs = points * spec.seeds.size();
  std::vector<SeedRun> runs(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      try {
        runs[j] = run_one(spec, static_cast<int>(j / spec.seeds.size()), spec.seeds[j % spec.seeds.size()]);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(spec.workers, 1, static_cast<int>(std::max<std::size_t>(jobs, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Job order is (point, seed), so the first error is deterministic too.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return runs;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string layout_columns(const SweepPoint& p) {
  std::ostringstream out;
  out << p.element_count() << ',' << p.subarray_count() << ',' << p.elements_per_subarray << ',' << p.nfue_count
      << ',' << p.ffue_count;
  return out.str();
}

constexpr const char* kLayoutHeader = "M_t,S,M_s,K_N,K_F";

struct SchemeRow {
  Scheme scheme;
  double power_W;
  int active;
  bool feasible;
  int iterations;
  bool converged;
  double binarity_gap;
};

std::vector<SchemeRow> scheme_rows(const SeedRun& r) {
  std::vector<SchemeRow> rows;
  rows.push_back({Scheme::proposed, r.proposed.power_W, r.proposed.activation.active_count(), r.proposed.feasible,
                  r.proposed.iterations, r.proposed.converged, r.proposed.relaxed_final.binarity_gap()});
  rows.push_back({Scheme::all_subarrays, r.all_on.power_W, r.all_on.activation.active_count(), r.all_on.feasible, 0,
                  true, 0.0});
  rows.push_back({Scheme::random, r.random.power_W, r.random.activation.active_count(), r.random.feasible, 0, true,
                  0.0});
  if (r.has_oracle) {
    rows.push_back({Scheme::oracle, r.oracle.power_W, r.oracle.activation.active_count(), r.oracle.feasible, 0, true,
                    0.0});
  }
  return rows;
}

std::string file_stem(Experiment e) { return to_string(e); }

}  // namespace

const char* to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::convergence: return "convergence";
    case Experiment::power_vs_s: return "power_vs_s";
    case Experiment::power_vs_users: return "power_vs_users";
  }
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  if (name == "convergence") return Experiment::convergence;
  if (name == "power_vs_s" || name == "power_vs_S") return Experiment::power_vs_s;
  if (name == "power_vs_users") return Experiment::power_vs_users;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::vector<SweepPoint> default_sweep(Experiment experiment, bool full_scale) {
  std::vector<SweepPoint> sweep;
  if (!full_scale) {
    switch (experiment) {
      case Experiment::convergence:
        for (int ey : {4, 6, 8}) sweep.push_back({8, ey, 4, 1, 1});
        break;
      case Experiment::power_vs_s:
        for (int ms : {16, 8, 4}) sweep.push_back({8, 8, ms, 2, 2});
        break;
      case Experiment::power_vs_users:
        for (int kn = 0; kn <= 4; ++kn) sweep.push_back({8, 8, 8, kn, 4 - kn});
        break;
    }
    return sweep;
  }
  switch (experiment) {
    case Experiment::convergence:
      for (int ey : {20, 25, 30}) sweep.push_back({20, ey, 50, 2, 2});
      break;
    case Experiment::power_vs_s:
      for (int ms : {100, 50, 40, 25}) sweep.push_back({20, 20, ms, 2, 2});
      break;
    case Experiment::power_vs_users:
      for (int kn = 0; kn <= 4; ++kn) sweep.push_back({20, 20, 50, kn, 4 - kn});
      break;
  }
  return sweep;
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  try {
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
      const std::uint64_t a = std::stoull(text.substr(0, dots));
      const std::uint64_t b = std::stoull(text.substr(dots + 2));
      if (b < a) throw ConfigError("seed range '" + text + "' is empty");
      for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
    } else {
      std::stringstream in(text);
      std::string item;
      while (std::getline(in, item, ',')) seeds.push_back(std::stoull(item));
    }
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse seeds '" + text + "'");
  }
  if (seeds.empty()) throw ConfigError("no seeds given");
  return seeds;
}

std::string format_number(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10e", value);
  return buf;
}

std::string git_blob_digest(const std::string& content) {
  return digest_hex(EVP_sha1(), "blob " + std::to_string(content.size()) + '\0' + content);
}

std::string sha256_hex(const std::string& content) { return digest_hex(EVP_sha256(), content); }

std::string convergence_csv(const std::vector<SeedRun>& runs) {
  std::ostringstream out;
  out << kLayoutHeader << ",seed,iteration,P_C1_W,P_C_W,binarity_gap,penalty\n";
  for (const auto& r : runs) {
    for (const auto& t : r.proposed.trace) {
      out << layout_columns(r.layout) << ',' << r.seed << ',' << t.iteration << ','
          << format_number(t.penalized_objective) << ',' << format_number(t.power_W) << ','
          << format_number(t.binarity_gap) << ',' << format_number(t.penalty) << '\n';
    }
  }
  return out.str();
}

std::string runs_csv(const std::vector<SeedRun>& runs) {
  std::ostringstream out;
  out << kLayoutHeader << ",seed,scheme,power_W,active_subarrays,feasible,iterations,converged,binarity_gap\n";
  for (const auto& r : runs) {
    for (const auto& row : scheme_rows(r)) {
      out << layout_columns(r.layout) << ',' << r.seed << ',' << to_string(row.scheme) << ','
          << format_number(row.power_W) << ',' << row.active << ',' << (row.feasible ? 1 : 0) << ','
          << row.iterations << ',' << (row.converged ? 1 : 0) << ',' << format_number(row.binarity_gap) << '\n';
    }
  }
  return out.str();
}

std::string summary_csv(Experiment, const std::vector<SeedRun>& runs) {
  // (point, scheme) -> powers, in first-seen order of points.
  std::map<std::pair<int, int>, std::vector<double>> powers;
  std::map<std::pair<int, int>, int> feasible;
  std::map<int, SweepPoint> layouts;
  for (const auto& r : runs) {
    layouts[r.point] = r.layout;
    for (const auto& row : scheme_rows(r)) {
      const auto key = std::make_pair(r.point, static_cast<int>(row.scheme));
      powers[key].push_back(row.power_W);
      feasible[key] += row.feasible ? 1 : 0;
    }
  }
  std::ostringstream out;
  out << kLayoutHeader << ",scheme,mean_power_W,std_power_W,runs,feasible_runs\n";
  for (const auto& [key, values] : powers) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stddev = values.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    out << layout_columns(layouts[key.first]) << ',' << to_string(static_cast<Scheme>(key.second)) << ','
        << format_number(mean) << ',' << format_number(stddev) << ',' << values.size() << ',' << feasible[key]
        << '\n';
  }
  return out.str();
}

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  if (spec.sweep.empty()) throw ConfigError("experiment sweep is empty");
  if (spec.seeds.empty()) throw ConfigError("experiment needs at least one seed");
  for (const auto& p : spec.sweep) {
    if (p.elements_per_subarray <= 0 || p.element_count() % p.elements_per_subarray != 0) {
      throw ConfigError("sweep point: M_s must divide M_t");
    }
  }

  ExperimentOutput result;
  result.runs = run_jobs(spec);
  for (const auto& r : result.runs) {
    result.any_degraded = result.any_degraded || r.proposed.degraded;
    result.any_infeasible = result.any_infeasible || !r.proposed.feasible;
  }

  std::vector<std::pair<std::string, std::string>> files;
  const std::string stem = file_stem(spec.experiment);
  if (spec.experiment == Experiment::convergence) files.emplace_back(stem + ".csv", convergence_csv(result.runs));
  files.emplace_back(stem + "_summary.csv", summary_csv(spec.experiment, result.runs));
  files.emplace_back(stem + "_runs.csv", runs_csv(result.runs));

  nlohmann::json manifest;
  manifest["experiment"] = to_string(spec.experiment);
  const nlohmann::json config = config_to_json(spec.base);
  manifest["config"] = config;
  manifest["config_sha256"] = sha256_hex(config.dump());
  manifest["seeds"] = spec.seeds;
  auto sweep = nlohmann::json::array();
  for (const auto& p : spec.sweep) {
    sweep.push_back({{"M_x", p.elements_x}, {"M_y", p.elements_y}, {"M_s", p.elements_per_subarray},
                     {"K_N", p.nfue_count}, {"K_F", p.ffue_count}});
  }
  manifest["sweep"] = sweep;
  manifest["with_oracle"] = spec.with_oracle;
  auto outputs = nlohmann::json::object();
  std::string tree;
  for (const auto& [name, content] : files) {
    const std::string blob = git_blob_digest(content);
    outputs[name] = {{"bytes", content.size()}, {"git_blob_sha1", blob}};
    tree += blob + ' ' + name + '\n';
  }
  manifest["outputs"] = outputs;
  manifest["content_digest"] = git_blob_digest(tree);

  if (!spec.output_dir.empty()) {
    std::filesystem::create_directories(spec.output_dir);
    for (const auto& [name, content] : files) write_file(spec.output_dir / name, content);
    write_file(spec.output_dir / "manifest.json", manifest.dump(2) + '\n');
  }
  for (const auto& f : files) result.files.push_back(f.first);
  result.files.push_back("manifest.json");
  return result;
}

ExperimentOutput run_convergence(const ExperimentSpec& spec) {
  ExperimentSpec s = spec;
  s.experiment = Experiment::convergence;
  return run_experiment(s);
}

ExperimentOutput run_power_vs_s(const ExperimentSpec& spec) {
  ExperimentSpec s = spec;
  s.experiment = Experiment::power_vs_s;
  return run_experiment(s);
}

ExperimentOutput run_power_vs_users(const ExperimentSpec& spec) {
  ExperimentSpec s = spec;
  s.experiment = Experiment::power_vs_users;
  return run_experiment(s);
}

}  // namespace elaa
