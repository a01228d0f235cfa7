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
#include <map>
#include <tuple>

#include "itlw/errors.h"
#include "itlw/harness.h"

namespace itlw {

using nlohmann::json;

namespace {

GroupKey key_of(const json &rec) {
    GroupKey key;
    key.strategy = rec.at("strategy").get<std::string>();
    key.optimizer = rec.at("optimizer").get<std::string>();
    key.initializer = rec.at("initializer").get<std::string>();
    key.p = rec.at("p").get<int>();
    if (const auto &k = rec.at("k"); k.is_string()) {
        key.k_label = k.get<std::string>();
        key.k_order = KRule::parse(key.k_label).order();
    }
    return key;
}

// Matched conditions: everything but the strategy and k.
using BaselineKey = std::tuple<std::string, std::string, std::string, int, int>;

BaselineKey baseline_key(const json &rec) {
    return {rec.at("graph_id").get<std::string>(), rec.at("optimizer").get<std::string>(),
            rec.at("initializer").get<std::string>(), rec.at("p").get<int>(), rec.at("seed").get<int>()};
}

std::string header_and_rows(std::string header, const std::vector<SummaryRow> &rows, bool with_count) {
    std::string out = std::move(header);
    for (const auto &row : rows) {
        out += fmt::format("{},{},{},{},{},{}", row.key.optimizer, row.key.initializer, row.key.k_label, row.key.p,
                           row.stats.mean, row.stats.std);
        if (with_count) {
            out += fmt::format(",{}", row.stats.count);
        }
        out += '\n';
    }
    return out;
}

}  // namespace

std::vector<RunMetrics> run_metrics(const std::vector<json> &records) {
    std::vector<RunMetrics> out;
    for (const auto &rec : records) {
        RunMetrics m;
        m.key = key_of(rec);
        m.graph_id = rec.at("graph_id").get<std::string>();
        m.seed = rec.at("seed").get<std::uint64_t>();
        m.alpha = rec.at("alpha").get<double>();
        m.nfev = rec.at("nfev").get<std::int64_t>();
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<ComparisonMetrics> compare_records(const std::vector<json> &records) {
    std::map<BaselineKey, const json *> baselines;
    for (const auto &rec : records) {
        if (rec.at("strategy") == "fo") {
            baselines[baseline_key(rec)] = &rec;
        }
    }
    std::vector<ComparisonMetrics> out;
    for (const auto &rec : records) {
        if (rec.at("strategy") != "itlw") {
            continue;
        }
        auto it = baselines.find(baseline_key(rec));
        if (it == baselines.end()) {
            continue;
        }
        const json &fo = *it->second;
        ComparisonMetrics c;
        c.key = key_of(rec);
        c.graph_id = rec.at("graph_id").get<std::string>();
        c.seed = rec.at("seed").get<std::uint64_t>();
        c.epsilon = error_epsilon(fo.at("alpha").get<double>(), rec.at("alpha").get<double>());
        c.r = cost_ratio(rec.at("nfev").get<std::int64_t>(), fo.at("nfev").get<std::int64_t>());
        if (rec.contains("cumulative_nfev") && fo.contains("cumulative_nfev")) {
            c.r_c = cost_ratio(rec.at("cumulative_nfev").get<std::int64_t>(),
                               fo.at("cumulative_nfev").get<std::int64_t>());
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::string_view to_string(Figure figure) {
    switch (figure) {
        case Figure::kEpsVsP:
            return "eps_vs_p";
        case Figure::kRVsP:
            return "r_vs_p";
        case Figure::kRcVsP:
            return "rc_vs_p";
        case Figure::kAlphaVsIter:
            return "alpha_vs_iter";
    }
    return "?";
}

Figure parse_figure(std::string_view name) {
    for (Figure f : {Figure::kEpsVsP, Figure::kRVsP, Figure::kRcVsP, Figure::kAlphaVsIter}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw InputError("unknown figure '" + std::string(name) + "'");
}

std::string plot_csv(const std::vector<json> &records, Figure figure) {
    switch (figure) {
        case Figure::kEpsVsP:
            return header_and_rows("optimizer,initializer,k,p,mean_eps,std_eps,n_graphs\n",
                                   aggregate_epsilon(compare_records(records)), true);
        case Figure::kRVsP:
            return header_and_rows("optimizer,initializer,k,p,mean_r,std_r\n", aggregate_r(compare_records(records)),
                                   false);
        case Figure::kRcVsP:
            return header_and_rows("optimizer,initializer,k,p,mean_rc,std_rc\n",
                                   aggregate_rc(compare_records(records)), false);
        case Figure::kAlphaVsIter: {
            std::vector<std::tuple<std::uint64_t, int, std::string, double>> rows;
            for (const auto &rec : records) {
                if (rec.at("strategy") != "itlw") {
                    continue;
                }
                const auto &alphas = rec.at("iter_alpha");
                for (size_t i = 0; i < alphas.size(); ++i) {
                    rows.emplace_back(rec.at("seed").get<std::uint64_t>(), static_cast<int>(i) + 1,
                                      rec.at("cell_key").get<std::string>(), alphas[i].get<double>());
                }
            }
            std::sort(rows.begin(), rows.end());
            std::string out = "seed,iteration,alpha\n";
            for (const auto &[seed, iteration, key, alpha] : rows) {
                out += fmt::format("{},{},{}\n", seed, iteration, alpha);
            }
            return out;
        }
    }
    return {};
}

std::filesystem::path emit_plot_data(const std::filesystem::path &results_dir, Figure figure,
                                     const std::filesystem::path &dest_dir) {
    std::filesystem::create_directories(dest_dir);
    auto path = dest_dir / (std::string(to_string(figure)) + ".csv");
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << plot_csv(load_records(results_dir), figure);
    return path;
}

namespace {

struct SummaryLine {
    GroupKey key;
    SummaryStats eps, r, rc;
};

std::vector<SummaryLine> summary_lines(const std::vector<json> &records) {
    auto comparisons = compare_records(records);
    auto eps = aggregate_epsilon(comparisons);
    auto r = aggregate_r(comparisons);
    auto rc = aggregate_rc(comparisons);
    std::map<GroupKey, SummaryLine> lines;
    for (const auto &row : eps) {
        lines[row.key].key = row.key;
        lines[row.key].eps = row.stats;
    }
    for (const auto &row : r) {
        lines[row.key].r = row.stats;
    }
    for (const auto &row : rc) {
        lines[row.key].rc = row.stats;
    }
    std::vector<SummaryLine> out;
    for (auto &[key, line] : lines) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

std::string summary_csv(const std::vector<json> &records) {
    std::string out =
        "optimizer,initializer,k,p,mean_eps,std_eps,sem_eps,mean_r,std_r,sem_r,mean_rc,std_rc,sem_rc,count\n";
    for (const auto &line : summary_lines(records)) {
        auto rc = [&](double v) { return line.rc.count > 0 ? fmt::format("{}", v) : std::string(); };
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", line.key.optimizer, line.key.initializer,
                           line.key.k_label, line.key.p, line.eps.mean, line.eps.std, line.eps.sem, line.r.mean,
                           line.r.std, line.r.sem, rc(line.rc.mean), rc(line.rc.std), rc(line.rc.sem),
                           line.eps.count);
    }
    return out;
}

std::string summary_table(const std::vector<json> &records) {
    std::string out = fmt::format("{:<12} {:<11} {:>14} {:>3} {:>11} {:>10} {:>10} {:>8} {:>8} {:>4}\n", "optimizer",
                                  "initializer", "k", "p", "mean_eps", "std_eps", "sem_eps", "mean_r", "mean_rc", "n");
    for (const auto &line : summary_lines(records)) {
        out += fmt::format("{:<12} {:<11} {:>14} {:>3} {:>11.3e} {:>10.2e} {:>10.2e} {:>8.3f} {:>8}", line.key.optimizer,
                           line.key.initializer, line.key.k_label, line.key.p, line.eps.mean, line.eps.std,
                           line.eps.sem, line.r.mean,
                           line.rc.count > 0 ? fmt::format("{:.3f}", line.rc.mean) : std::string("-"));
        out += fmt::format(" {:>4}\n", line.eps.count);
    }
    return out;
}

}  // namespace itlw
