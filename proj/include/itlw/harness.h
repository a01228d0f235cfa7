// Copyright 2026 The qaoa-itlw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itlw/graph.h"
#include "itlw/metrics.h"
#include "itlw/optimizers.h"
#include "itlw/strategies.h"
#include "json.hpp"

namespace itlw {

enum class RunMode { kProgressive, kDirect };
enum class Initializer { kBilinear, kTqa, kRandom };
enum class StrategyKind { kItlw, kFullOptimization, kLayerwise };

std::string_view to_string(RunMode mode);
std::string_view to_string(Initializer init);
std::string_view to_string(StrategyKind strategy);
Initializer parse_initializer(std::string_view name);
StrategyKind parse_strategy(std::string_view name);

/// bilinear chains depths; tqa and random initialize each depth directly.
RunMode mode_of(Initializer init);

/// A family of generated graphs, or a single graph loaded from disk.
struct GraphSpec {
    ClassTag tag;
    int n = 0;
    int count = 0;
    /// Explicit generator seeds; when empty, seeds derive from the global seed.
    std::vector<std::uint64_t> seeds;
    std::filesystem::path file;
};

struct ExperimentConfig {
    std::string name = "custom";
    std::vector<GraphSpec> graphs;
    std::optional<RunMode> mode;
    int p_start = 3;
    int p_target = 8;
    std::vector<KRule> k_rules;
    std::vector<OptimizerKind> optimizers;
    std::vector<Initializer> initializers;
    /// ITLW implies a full-optimization baseline under matched conditions.
    std::vector<StrategyKind> strategies;
    /// Independent initial points per graph (meaningful for random init).
    int restarts = 1;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::filesystem::path out_dir = "results";
};

/// Throws ParseError for malformed documents and ConfigError for invalid
/// combinations.
ExperimentConfig config_from_json(const nlohmann::json &doc);
ExperimentConfig load_config(const std::filesystem::path &path);
nlohmann::json config_to_json(const ExperimentConfig &config);

/// Throws ConfigError describing the first problem found.
void validate_config(const ExperimentConfig &config);

/// "desk" (10 graphs, n = 10, p up to 8) or "paper" (30 graphs, n = 10..12,
/// p up to 10).
ExperimentConfig preset(std::string_view name);

struct EnsembleGraph {
    std::string id;
    Graph graph;
    int c_max;
};

/// Builds every graph named by the config, rejecting edgeless graphs and
/// fingerprint duplicates by advancing the seed. Deterministic in the config.
std::vector<EnsembleGraph> build_ensemble(const ExperimentConfig &config);

struct RunOptions {
    bool dry_run = false;
    /// Overrides config.jobs when positive.
    int jobs = 0;
    std::ostream *log = nullptr;
};

struct RunSummary {
    std::size_t total_cells = 0;
    std::size_t skipped_cells = 0;
    std::size_t new_records = 0;
    std::size_t failed_units = 0;
};

/// Runs every cell of the config into config.out_dir. Records are appended
/// to records.jsonl as each work unit finishes; cells already present are
/// skipped, so an interrupted run resumes where it stopped.
RunSummary run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

inline constexpr std::string_view kRecordsFile = "records.jsonl";

/// One JSON object per line of records.jsonl.
std::vector<nlohmann::json> load_records(const std::filesystem::path &results_dir);

/// Pairs every ITLW record with its full-optimization baseline.
std::vector<ComparisonMetrics> compare_records(const std::vector<nlohmann::json> &records);

std::vector<RunMetrics> run_metrics(const std::vector<nlohmann::json> &records);

enum class Figure { kEpsVsP, kRVsP, kRcVsP, kAlphaVsIter };

std::string_view to_string(Figure figure);
Figure parse_figure(std::string_view name);

/// CSV text for one figure.
std::string plot_csv(const std::vector<nlohmann::json> &records, Figure figure);

/// Writes <figure>.csv into `dest_dir` and returns its path.
std::filesystem::path emit_plot_data(const std::filesystem::path &results_dir, Figure figure,
                                     const std::filesystem::path &dest_dir);

/// Mean/std/sem of epsilon, r and r_c per (optimizer, initializer, k, p).
std::string summary_csv(const std::vector<nlohmann::json> &records);

/// Human-readable mean-epsilon table.
std::string summary_table(const std::vector<nlohmann::json> &records);

}  // namespace itlw
