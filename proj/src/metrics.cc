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

#include "itlw/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "itlw/errors.h"

namespace itlw {

namespace {
constexpr double kAlphaSlack = 1e-9;
}

double approximation_ratio(double f_star, int c_max) {
    if (c_max <= 0) {
        throw InputError("approximation ratio undefined for C_max = 0");
    }
    if (!(f_star >= -kAlphaSlack && f_star <= c_max + kAlphaSlack)) {
        throw InputError("expectation outside [0, C_max]");
    }
    return std::clamp(f_star / c_max, 0.0, 1.0);
}

double error_epsilon(double alpha_fo, double alpha_itlw) {
    return alpha_fo - alpha_itlw;
}

double cost_ratio(std::int64_t nfev_itlw, std::int64_t nfev_fo) {
    if (nfev_itlw <= 0 || nfev_fo <= 0) {
        throw InputError("cost ratio needs positive evaluation counts");
    }
    return static_cast<double>(nfev_itlw) / static_cast<double>(nfev_fo);
}

double cumulative_cost_ratio(std::span<const std::int64_t> itlw_per_depth, std::span<const std::int64_t> fo_per_depth) {
    if (itlw_per_depth.size() != fo_per_depth.size() || itlw_per_depth.empty()) {
        throw InputError("cumulative cost ratio needs matching non-empty per-depth lists");
    }
    auto total_itlw = std::accumulate(itlw_per_depth.begin(), itlw_per_depth.end(), std::int64_t{0});
    auto total_fo = std::accumulate(fo_per_depth.begin(), fo_per_depth.end(), std::int64_t{0});
    return cost_ratio(total_itlw, total_fo);
}

SummaryStats summarize_values(std::span<const double> values) {
    SummaryStats stats;
    stats.count = values.size();
    if (values.empty()) {
        return stats;
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    stats.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    if (sorted.size() > 1) {
        double ss = 0.0;
        for (double v : sorted) {
            ss += (v - stats.mean) * (v - stats.mean);
        }
        stats.std = std::sqrt(ss / (n - 1.0));
        stats.sem = stats.std / std::sqrt(n);
    }
    return stats;
}

std::vector<SummaryRow> aggregate(std::span<const Sample> samples) {
    // Values are summed in sorted order so the result is exactly
    // permutation invariant.
    std::map<GroupKey, std::vector<double>> groups;
    for (const auto &s : samples) {
        groups[s.key].push_back(s.value);
    }
    std::vector<SummaryRow> rows;
    rows.reserve(groups.size());
    for (const auto &[key, values] : groups) {
        rows.push_back({key, summarize_values(values)});
    }
    return rows;
}

std::vector<SummaryRow> aggregate_alpha(std::span<const RunMetrics> runs) {
    std::vector<Sample> samples;
    for (const auto &r : runs) {
        samples.push_back({r.key, r.alpha});
    }
    return aggregate(samples);
}

std::vector<SummaryRow> aggregate_epsilon(std::span<const ComparisonMetrics> comparisons) {
    std::vector<Sample> samples;
    for (const auto &c : comparisons) {
        samples.push_back({c.key, c.epsilon});
    }
    return aggregate(samples);
}

std::vector<SummaryRow> aggregate_r(std::span<const ComparisonMetrics> comparisons) {
    std::vector<Sample> samples;
    for (const auto &c : comparisons) {
        samples.push_back({c.key, c.r});
    }
    return aggregate(samples);
}

std::vector<SummaryRow> aggregate_rc(std::span<const ComparisonMetrics> comparisons) {
    std::vector<Sample> samples;
    for (const auto &c : comparisons) {
        if (c.r_c) {
            samples.push_back({c.key, *c.r_c});
        }
    }
    return aggregate(samples);
}

}  // namespace itlw
