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

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "itlw/errors.h"
#include "itlw/harness.h"
#include "itlw/random.h"

namespace itlw {

using nlohmann::json;

namespace {

constexpr std::string_view kNoInitializer = "none";

struct Cell {
    std::string key;
    int p = 0;
};

// A unit is the smallest piece of work that runs start to finish: one
// depth for direct runs, a whole depth chain for progressive and layerwise.
struct WorkUnit {
    size_t graph = 0;
    StrategyKind strategy = StrategyKind::kFullOptimization;
    OptimizerKind optimizer = OptimizerKind::kNelderMead;
    std::optional<Initializer> init;
    std::optional<KRule> k;
    int restart = 0;
    std::vector<Cell> cells;

    std::string describe(const std::vector<EnsembleGraph> &graphs) const {
        std::string text = fmt::format("{} {} {}", graphs[graph].id, to_string(strategy), to_string(optimizer));
        if (init) {
            text += fmt::format(" {}", to_string(*init));
        }
        if (k) {
            text += " k=" + k->label();
        }
        if (cells.size() == 1) {
            text += fmt::format(" p={}", cells[0].p);
        } else if (!cells.empty()) {
            text += fmt::format(" p={}..{}", cells.front().p, cells.back().p);
        }
        if (restart > 0) {
            text += fmt::format(" restart={}", restart);
        }
        return text;
    }
};

std::string cell_key(const std::string &graph_id, StrategyKind strategy, OptimizerKind optimizer,
                     std::string_view init, const std::string &k_label, int p, int restart, std::uint64_t seed) {
    std::string canonical = fmt::format("{}|{}|{}|{}|{}|{}|{}|{}", graph_id, to_string(strategy),
                                        to_string(optimizer), init, k_label, p, restart, seed);
    return fmt::format("{:016x}", fnv1a(canonical));
}

// Seed for a random initial point. Independent of strategy and k so that
// ITLW and its full-optimization baseline start from the same point.
std::uint64_t init_seed(const std::string &graph_id, int p, int restart, std::uint64_t global_seed) {
    return mix64(fnv1a(fmt::format("{}|random|{}|{}", graph_id, p, restart)) ^ mix64(global_seed));
}

std::vector<WorkUnit> enumerate_units(const ExperimentConfig &config, const std::vector<EnsembleGraph> &graphs) {
    const auto &strategies = config.strategies;
    auto wants = [&](StrategyKind s) { return std::find(strategies.begin(), strategies.end(), s) != strategies.end(); };
    const bool itlw_on = wants(StrategyKind::kItlw);
    const bool fo_on = itlw_on || wants(StrategyKind::kFullOptimization);

    std::vector<WorkUnit> units;
    auto add = [&](WorkUnit unit, std::vector<int> depths) {
        const auto &id = graphs[unit.graph].id;
        std::string init = unit.init ? std::string(to_string(*unit.init)) : std::string(kNoInitializer);
        std::string k = unit.k ? unit.k->label() : "";
        for (int p : depths) {
            unit.cells.push_back({cell_key(id, unit.strategy, unit.optimizer, init, k, p, unit.restart, config.seed), p});
        }
        units.push_back(std::move(unit));
    };
    std::vector<int> all_depths;
    for (int p = config.p_start; p <= config.p_target; ++p) {
        all_depths.push_back(p);
    }

    for (size_t g = 0; g < graphs.size(); ++g) {
        for (OptimizerKind opt : config.optimizers) {
            for (Initializer init : config.initializers) {
                if (mode_of(init) == RunMode::kProgressive) {
                    if (fo_on) {
                        add({g, StrategyKind::kFullOptimization, opt, init, std::nullopt, 0, {}}, all_depths);
                    }
                    if (itlw_on) {
                        for (const auto &rule : config.k_rules) {
                            add({g, StrategyKind::kItlw, opt, init, rule, 0, {}}, all_depths);
                        }
                    }
                    continue;
                }
                for (int r = 0; r < config.restarts; ++r) {
                    for (int p : all_depths) {
                        if (fo_on) {
                            add({g, StrategyKind::kFullOptimization, opt, init, std::nullopt, r, {}}, {p});
                        }
                        if (itlw_on) {
                            for (const auto &rule : config.k_rules) {
                                add({g, StrategyKind::kItlw, opt, init, rule, r, {}}, {p});
                            }
                        }
                    }
                }
            }
            if (wants(StrategyKind::kLayerwise)) {
                add({g, StrategyKind::kLayerwise, opt, std::nullopt, std::nullopt, 0, {}}, all_depths);
            }
        }
    }
    return units;
}

json params_json(const ParameterVector &params) {
    return {{"gammas", params.gammas}, {"betas", params.betas}};
}

struct UnitOutput {
    std::vector<json> records;
    std::vector<std::pair<std::string, json>> traces;
};

class UnitRunner {
   public:
    UnitRunner(const ExperimentConfig &config, const std::vector<EnsembleGraph> &graphs)
        : config_(config), graphs_(graphs) {
    }

    UnitOutput run(const WorkUnit &unit) const {
        const auto &eg = graphs_[unit.graph];
        QaoaSimulator sim(eg.graph);
        auto start = std::chrono::steady_clock::now();
        std::vector<Result> results;
        if (unit.strategy == StrategyKind::kLayerwise) {
            results = run_layerwise(sim, unit);
        } else if (unit.init && mode_of(*unit.init) == RunMode::kProgressive) {
            results = run_progressive(sim, unit);
        } else {
            results.push_back(run_direct(sim, unit));
        }
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        UnitOutput out;
        for (size_t i = 0; i < unit.cells.size(); ++i) {
            const auto &cell = unit.cells[i];
            auto &res = results.at(i);
            std::string trace_path = "traces/" + cell.key + ".json";
            json stages = json::array();
            for (const auto &st : res.trace.stages) {
                stages.push_back({{"depth", st.depth},
                                  {"iteration", st.iteration},
                                  {"layer", st.layer},
                                  {"value", st.value},
                                  {"nfev_delta", st.nfev_delta},
                                  {"params", params_json(st.params)}});
            }
            out.traces.push_back({trace_path, json{{"cell_key", cell.key}, {"stages", std::move(stages)}}});

            json iter_alpha = json::array();
            if (unit.strategy == StrategyKind::kItlw) {
                for (const auto &st : res.trace.stages) {
                    if (st.layer == st.depth) {
                        iter_alpha.push_back(approximation_ratio(st.value, eg.c_max));
                    }
                }
            }
            json rec = {
                {"cell_key", cell.key},
                {"graph_id", eg.id},
                {"graph_class", eg.graph.tag().name()},
                {"n", eg.graph.num_vertices()},
                {"num_edges", eg.graph.num_edges()},
                {"c_max", eg.c_max},
                {"strategy", std::string(to_string(unit.strategy))},
                {"optimizer", std::string(to_string(unit.optimizer))},
                {"initializer", unit.init ? std::string(to_string(*unit.init)) : std::string(kNoInitializer)},
                {"k", unit.k ? json(unit.k->label()) : json(nullptr)},
                {"k_value", unit.k ? json(unit.k->resolve(cell.p)) : json(nullptr)},
                {"p", cell.p},
                {"seed", unit.restart},
                {"init_seed", res.init_seed},
                {"value", res.trace.value},
                {"alpha", approximation_ratio(res.trace.value, eg.c_max)},
                {"nfev", res.trace.nfev},
                {"init_nfev", res.init_nfev},
                {"converged", res.trace.converged},
                {"subproblems", res.trace.subproblems},
                {"params", params_json(res.trace.params)},
                {"iter_alpha", std::move(iter_alpha)},
                {"trace", trace_path},
                {"wall_time_s", wall},
            };
            if (res.cumulative_nfev) {
                rec["cumulative_nfev"] = *res.cumulative_nfev;
            }
            out.records.push_back(std::move(rec));
        }
        return out;
    }

   private:
    struct Result {
        StrategyTrace trace;
        std::int64_t init_nfev = 0;
        std::optional<std::int64_t> cumulative_nfev;
        std::uint64_t init_seed = 0;
    };

    std::vector<Result> run_progressive(QaoaSimulator &sim, const WorkUnit &unit) const {
        Bootstrap boot = bootstrap_depths(sim, unit.optimizer, std::max(2, config_.p_start - 1));
        std::int64_t boot_nfev = boot.grid_nfev;
        for (const auto &t : boot.depths) {
            boot_nfev += t.nfev;
        }
        auto strategy = unit.strategy == StrategyKind::kItlw ? ProgressiveStrategy::iterative(*unit.k)
                                                             : ProgressiveStrategy::full();
        ProgressiveResult run =
            depth_progressive_run(sim, boot, config_.p_start, config_.p_target, strategy, unit.optimizer);
        std::vector<Result> out;
        std::int64_t cumulative = 0;
        for (auto &trace : run.traces) {
            cumulative += trace.nfev;
            out.push_back({std::move(trace), boot_nfev, cumulative, 0});
        }
        return out;
    }

    Result run_direct(QaoaSimulator &sim, const WorkUnit &unit) const {
        const int p = unit.cells.at(0).p;
        Result res;
        ParameterVector init;
        if (*unit.init == Initializer::kTqa) {
            TqaResult tqa = tqa_init(sim, p);
            init = tqa.params;
            res.init_nfev = tqa.nfev;
        } else {
            res.init_seed = init_seed(graphs_[unit.graph].id, p, unit.restart, config_.seed);
            init = random_init(p, res.init_seed);
        }
        res.trace = unit.strategy == StrategyKind::kItlw ? itlw(sim, init, unit.k->resolve(p), unit.optimizer)
                                                         : full_optimization(sim, init, unit.optimizer);
        return res;
    }

    std::vector<Result> run_layerwise(QaoaSimulator &sim, const WorkUnit &unit) const {
        StrategyTrace full = layerwise_classic(sim, config_.p_target, unit.optimizer);
        std::vector<Result> out;
        std::int64_t cumulative = 0;
        for (const auto &stage : full.stages) {
            cumulative += stage.nfev_delta;
            if (stage.depth < config_.p_start) {
                continue;
            }
            Result res;
            res.trace.stages = {stage};
            res.trace.params = stage.params;
            res.trace.value = stage.value;
            res.trace.nfev = stage.nfev_delta;
            res.trace.subproblems = 1;
            res.cumulative_nfev = cumulative;
            out.push_back(std::move(res));
        }
        return out;
    }

    const ExperimentConfig &config_;
    const std::vector<EnsembleGraph> &graphs_;
};

std::set<std::string> completed_cells(const std::filesystem::path &dir) {
    std::set<std::string> keys;
    for (const auto &rec : load_records(dir)) {
        if (auto it = rec.find("cell_key"); it != rec.end() && it->is_string()) {
            keys.insert(it->get<std::string>());
        }
    }
    return keys;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

// Cuts an unterminated last line so appended records start on a fresh line.
void drop_torn_tail(const std::filesystem::path &path) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec || size == 0) {
        return;
    }
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    if (text.back() == '\n') {
        return;
    }
    const auto keep = text.find_last_of('\n');
    std::filesystem::resize_file(path, keep == std::string::npos ? 0 : keep + 1);
}

}  // namespace

std::vector<json> load_records(const std::filesystem::path &results_dir) {
    std::vector<json> records;
    std::ifstream in(results_dir / kRecordsFile);
    if (!in) {
        return records;
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            records.push_back(json::parse(line));
        } catch (const json::parse_error &e) {
            // A torn final line from an interrupted run is dropped; the
            // cell simply runs again.
            if (in.peek() == std::char_traits<char>::eof()) {
                break;
            }
            throw ParseError(std::string("malformed record: ") + e.what(), "<record>", line_no);
        }
    }
    return records;
}

RunSummary run_experiment(const ExperimentConfig &config, const RunOptions &options) {
    validate_config(config);
    const auto graphs = build_ensemble(config);
    const auto units = enumerate_units(config, graphs);
    const auto done = completed_cells(config.out_dir);

    RunSummary summary;
    std::vector<const WorkUnit *> pending;
    for (const auto &unit : units) {
        summary.total_cells += unit.cells.size();
        bool complete = std::all_of(unit.cells.begin(), unit.cells.end(),
                                    [&](const Cell &c) { return done.contains(c.key); });
        if (complete) {
            summary.skipped_cells += unit.cells.size();
        } else {
            pending.push_back(&unit);
        }
    }
    if (options.log) {
        *options.log << fmt::format("{} graphs, {} cells in {} units; {} cells already done\n", graphs.size(),
                                    summary.total_cells, units.size(), summary.skipped_cells);
    }
    if (options.dry_run) {
        return summary;
    }

    std::filesystem::create_directories(config.out_dir / "traces");
    std::filesystem::create_directories(config.out_dir / "graphs");
    for (const auto &eg : graphs) {
        save_graph(eg.graph, config.out_dir / "graphs" / (eg.id + ".json"));
    }
    write_text(config.out_dir / "config.json", config_to_json(config).dump(2) + "\n");

    drop_torn_tail(config.out_dir / kRecordsFile);
    std::ofstream records(config.out_dir / kRecordsFile, std::ios::app);
    std::ofstream failures(config.out_dir / "failures.jsonl", std::ios::app);
    if (!records || !failures) {
        throw std::runtime_error("cannot open output files in " + config.out_dir.string());
    }

    UnitRunner runner(config, graphs);
    std::mutex out_mutex;
    std::atomic<size_t> next{0};
    size_t finished = 0;
    auto worker = [&] {
        for (size_t i = next++; i < pending.size(); i = next++) {
            const WorkUnit &unit = *pending[i];
            try {
                UnitOutput out = runner.run(unit);
                for (const auto &[path, trace] : out.traces) {
                    write_text(config.out_dir / path, trace.dump() + "\n");
                }
                std::lock_guard lock(out_mutex);
                for (const auto &rec : out.records) {
                    records << rec.dump() << '\n';
                }
                records.flush();
                summary.new_records += out.records.size();
                ++finished;
                if (options.log) {
                    *options.log << fmt::format("[{}/{}] {}\n", finished, pending.size(), unit.describe(graphs));
                }
            } catch (const std::exception &e) {
                std::lock_guard lock(out_mutex);
                failures << json{{"unit", unit.describe(graphs)}, {"error", e.what()}}.dump() << '\n';
                failures.flush();
                ++summary.failed_units;
                ++finished;
            }
        }
    };
    const int jobs = std::max(1, options.jobs > 0 ? options.jobs : config.jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    return summary;
}

}  // namespace itlw
