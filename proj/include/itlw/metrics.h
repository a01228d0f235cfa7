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

#include <compare>
#include <tuple>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace itlw {

/// F* / C_max clamped to [0, 1]. Values up to 1e-9 past either end are
/// treated as float noise; anything further is an InputError, as is c_max 0.
double approximation_ratio(double f_star, int c_max);

/// alpha_FO - alpha_ITLW: positive when full optimization wins.
double error_epsilon(double alpha_fo, double alpha_itlw);

/// V_ITLW / V_FO for matched runs.
double cost_ratio(std::int64_t nfev_itlw, std::int64_t nfev_fo);

/// Ratio of per-depth cost sums; both lists cover the same depths.
double cumulative_cost_ratio(std::span<const std::int64_t> itlw_per_depth, std::span<const std::int64_t> fo_per_depth);

/// Identifies one aggregation group. `k_label` is empty for strategies that
/// have no iteration count.
struct GroupKey {
    std::string strategy;
    std::string optimizer;
    std::string initializer;
    int k_order = 0;
    std::string k_label;
    int p = 0;

    // Sorted by (k, p) first so figure rows come out in plotting order.
    auto operator<=>(const GroupKey &other) const {
        return std::tie(k_order, k_label, p, strategy, optimizer, initializer) <=>
               std::tie(other.k_order, other.k_label, other.p, other.strategy, other.optimizer, other.initializer);
    }
    bool operator==(const GroupKey &) const = default;
};

struct RunMetrics {
    GroupKey key;
    std::string graph_id;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    std::int64_t nfev = 0;
};

struct ComparisonMetrics {
    GroupKey key;
    std::string graph_id;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    double r = 0.0;
    std::optional<double> r_c;
};

/// One observation for aggregation.
struct Sample {
    GroupKey key;
    double value = 0.0;
};

struct SummaryStats {
    double mean = 0.0;
    /// Sample standard deviation (n - 1); 0 for a single value.
    double std = 0.0;
    double sem = 0.0;
    std::size_t count = 0;
};

struct SummaryRow {
    GroupKey key;
    SummaryStats stats;
};

SummaryStats summarize_values(std::span<const double> values);

/// Mean, std and sem per key, rows in GroupKey order. The result does not
/// depend on the order of `samples`.
std::vector<SummaryRow> aggregate(std::span<const Sample> samples);

std::vector<SummaryRow> aggregate_alpha(std::span<const RunMetrics> runs);
std::vector<SummaryRow> aggregate_epsilon(std::span<const ComparisonMetrics> comparisons);
std::vector<SummaryRow> aggregate_r(std::span<const ComparisonMetrics> comparisons);
/// Only comparisons carrying r_c contribute.
std::vector<SummaryRow> aggregate_rc(std::span<const ComparisonMetrics> comparisons);

}  // namespace itlw
