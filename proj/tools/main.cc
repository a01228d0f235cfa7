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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "itlw/errors.h"
#include "itlw/harness.h"

namespace {

struct ConfigFlags {
    std::string config;
    std::string preset;
    std::string out;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
};

void add_config_flags(CLI::App *cmd, ConfigFlags &flags) {
    auto *config = cmd->add_option("--config", flags.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--preset", flags.preset, "Named config")
        ->check(CLI::IsMember({"desk", "paper"}))
        ->excludes(config);
    cmd->add_option("--out", flags.out, "Output directory");
    cmd->add_option("--seed", flags.seed, "Global seed");
    cmd->add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

itlw::ExperimentConfig resolve_config(const ConfigFlags &flags) {
    auto config = flags.config.empty() ? itlw::preset(flags.preset.empty() ? "desk" : flags.preset)
                                       : itlw::load_config(flags.config);
    if (!flags.out.empty()) {
        config.out_dir = flags.out;
    }
    if (flags.seed) {
        config.seed = *flags.seed;
    }
    if (flags.jobs > 0) {
        config.jobs = flags.jobs;
    }
    return config;
}

int gen_graphs(const ConfigFlags &flags) {
    auto config = resolve_config(flags);
    itlw::validate_config(config);
    auto dir = config.out_dir / "graphs";
    std::filesystem::create_directories(dir);
    for (const auto &g : itlw::build_ensemble(config)) {
        itlw::save_graph(g.graph, dir / (g.id + ".json"));
        std::cout << fmt::format("{}  n={} |E|={} C_max={}\n", g.id, g.graph.num_vertices(), g.graph.num_edges(),
                                 g.c_max);
    }
    return 0;
}

int run(const ConfigFlags &flags, bool dry_run) {
    auto config = resolve_config(flags);
    itlw::RunOptions options;
    options.dry_run = dry_run;
    options.log = &std::cerr;
    auto summary = itlw::run_experiment(config, options);
    if (dry_run) {
        std::cout << fmt::format("{} cells ({} already done)\n", summary.total_cells, summary.skipped_cells);
        return 0;
    }
    std::cout << fmt::format("{} new records in {}\n", summary.new_records, config.out_dir.string());
    if (summary.failed_units > 0) {
        std::cerr << fmt::format("{} work units failed; see failures.jsonl\n", summary.failed_units);
        return 3;
    }
    return 0;
}

std::filesystem::path results_dir(const std::string &explicit_dir, const ConfigFlags &flags) {
    if (!explicit_dir.empty()) {
        return explicit_dir;
    }
    return resolve_config(flags).out_dir;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"QAOA Max-Cut parameter optimization experiments"};
    app.require_subcommand(1);

    ConfigFlags gen_flags;
    auto *gen = app.add_subcommand("gen-graphs", "Generate the graph ensemble and cache C_max");
    add_config_flags(gen, gen_flags);

    ConfigFlags run_flags;
    bool dry_run = false;
    auto *run_cmd = app.add_subcommand("run", "Run every cell of an experiment (resumable)");
    add_config_flags(run_cmd, run_flags);
    run_cmd->add_flag("--dry-run", dry_run, "Print the cell count without running");

    ConfigFlags plot_flags;
    std::string plot_results;
    std::string plot_dest;
    std::string figure = "all";
    auto *plot = app.add_subcommand("plotdata", "Write figure CSVs from a results directory");
    plot->add_option("--config", plot_flags.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
    plot->add_option("--preset", plot_flags.preset, "Named config")->check(CLI::IsMember({"desk", "paper"}));
    plot->add_option("--results", plot_results, "Results directory (default: the config's output directory)");
    plot->add_option("--out", plot_dest, "Destination directory (default: <results>/plots)");
    plot->add_option("--figure", figure, "eps_vs_p, r_vs_p, rc_vs_p, alpha_vs_iter or all");

    ConfigFlags sum_flags;
    std::string sum_results;
    bool as_csv = false;
    auto *summarize = app.add_subcommand("summarize", "Print the mean epsilon / r / r_c table");
    summarize->add_option("--config", sum_flags.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
    summarize->add_option("--preset", sum_flags.preset, "Named config")->check(CLI::IsMember({"desk", "paper"}));
    summarize->add_option("--results", sum_results, "Results directory");
    summarize->add_option("--out", sum_results, "Alias for --results");
    summarize->add_flag("--csv", as_csv, "Emit CSV instead of a table");

    ConfigFlags check_flags;
    auto *check = app.add_subcommand("validate-config", "Check a config without running it");
    add_config_flags(check, check_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            return gen_graphs(gen_flags);
        }
        if (*run_cmd) {
            return run(run_flags, dry_run);
        }
        if (*plot) {
            auto dir = results_dir(plot_results, plot_flags);
            auto dest = plot_dest.empty() ? dir / "plots" : std::filesystem::path(plot_dest);
            std::vector<itlw::Figure> figures;
            if (figure == "all") {
                figures = {itlw::Figure::kEpsVsP, itlw::Figure::kRVsP, itlw::Figure::kRcVsP,
                           itlw::Figure::kAlphaVsIter};
            } else {
                figures = {itlw::parse_figure(figure)};
            }
            for (auto f : figures) {
                std::cout << itlw::emit_plot_data(dir, f, dest).string() << '\n';
            }
            return 0;
        }
        if (*summarize) {
            auto records = itlw::load_records(results_dir(sum_results, sum_flags));
            std::cout << (as_csv ? itlw::summary_csv(records) : itlw::summary_table(records));
            return 0;
        }
        if (*check) {
            auto config = resolve_config(check_flags);
            itlw::validate_config(config);
            std::cout << "ok: " << config.name << '\n';
            return 0;
        }
    } catch (const itlw::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const itlw::ParseError &e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
