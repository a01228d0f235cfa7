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

#include "itlw/strategies.h"

#include <charconv>

#include "itlw/errors.h"
#include "itlw/random.h"

namespace itlw {

std::vector<Bound> parameter_bounds(int depth) {
    std::vector<Bound> bounds(static_cast<size_t>(depth), Bound{0.0, kGammaPeriod});
    bounds.insert(bounds.end(), static_cast<size_t>(depth), Bound{0.0, kBetaPeriod});
    return bounds;
}

Objective expectation_objective(QaoaSimulator &sim, int depth) {
    if (depth < 1) {
        throw InputError("depth must be at least 1");
    }
    return Objective([&sim](std::span<const double> x) { return sim.expectation(x); }, parameter_bounds(depth));
}

KRule KRule::constant(int k) {
    if (k < 1) {
        throw InputError("ITLW needs k >= 1");
    }
    return KRule(Kind::kConstant, k);
}

KRule KRule::parse(std::string_view text) {
    if (text == "half_p") {
        return half_p();
    }
    if (text == "half_p_minus_1") {
        return half_p_minus_one();
    }
    int k = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InputError("unknown k rule '" + std::string(text) + "'");
    }
    return constant(k);
}

int KRule::resolve(int depth) const {
    switch (kind_) {
        case Kind::kConstant:
            return k_;
        case Kind::kHalfP:
            return std::max(1, depth / 2);
        case Kind::kHalfPMinusOne:
            return std::max(1, depth / 2 - 1);
    }
    return 1;
}

std::string KRule::label() const {
    switch (kind_) {
        case Kind::kConstant:
            return std::to_string(k_);
        case Kind::kHalfP:
            return "half_p";
        case Kind::kHalfPMinusOne:
            return "half_p_minus_1";
    }
    return "?";
}

int KRule::order() const {
    switch (kind_) {
        case Kind::kConstant:
            return k_;
        case Kind::kHalfP:
            return 1'000'000;
        case Kind::kHalfPMinusOne:
            return 1'000'001;
    }
    return 0;
}

namespace {

// Optimizes (gamma_l, beta_l) in place inside `phi`.
StageRecord optimize_layer(const Objective &full, std::vector<double> &phi, int depth, int layer,
                           OptimizerKind optimizer) {
    const size_t g = static_cast<size_t>(layer - 1);
    const size_t b = static_cast<size_t>(depth + layer - 1);
    Objective sub = restrict(full, phi, {g, b});
    const double x0[2] = {phi[g], phi[b]};
    OptResult result = maximize(optimizer, sub, x0);
    phi[g] = result.best_x[0];
    phi[b] = result.best_x[1];

    StageRecord stage;
    stage.depth = depth;
    stage.layer = layer;
    stage.params = ParameterVector::from_flat(phi);
    stage.value = result.best_value;
    stage.nfev_delta = result.nfev;
    return stage;
}

void check_init(const ParameterVector &init) {
    if (init.depth() < 1 || init.betas.size() != init.gammas.size()) {
        throw InputError("malformed initial parameters");
    }
    if (!init.in_box()) {
        throw InputError("initial parameters lie outside the parameter box");
    }
}

}  // namespace

StrategyTrace itlw(QaoaSimulator &sim, const ParameterVector &init, int k, OptimizerKind optimizer,
                   const TraceSink &sink) {
    if (k < 1) {
        throw InputError("ITLW needs k >= 1");
    }
    check_init(init);
    const int p = init.depth();
    Objective full = expectation_objective(sim, p);
    std::vector<double> phi = init.flat();

    StrategyTrace trace;
    for (int sweep = 1; sweep <= k; ++sweep) {
        for (int layer = 1; layer <= p; ++layer) {
            StageRecord stage = optimize_layer(full, phi, p, layer, optimizer);
            stage.iteration = sweep;
            trace.nfev += stage.nfev_delta;
            trace.value = stage.value;
            ++trace.subproblems;
            if (sink) {
                sink(stage);
            }
            trace.stages.push_back(std::move(stage));
        }
    }
    trace.params = ParameterVector::from_flat(phi);
    return trace;
}

StrategyTrace layerwise_classic(QaoaSimulator &sim, int p_target, OptimizerKind optimizer, const LayerGuess &guess,
                                const TraceSink &sink) {
    if (p_target < 1) {
        throw InputError("layerwise needs p_target >= 1");
    }
    Rng rng(guess.seed);
    std::vector<double> gammas, betas;
    StrategyTrace trace;
    for (int depth = 1; depth <= p_target; ++depth) {
        double g0 = guess.gamma, b0 = guess.beta;
        if (guess.kind == LayerGuess::Kind::kCopyPrevious && depth > 1) {
            g0 = gammas.back();
            b0 = betas.back();
        } else if (guess.kind == LayerGuess::Kind::kRandom) {
            g0 = kGammaPeriod * uniform01(rng);
            b0 = kBetaPeriod * uniform01(rng);
        }
        gammas.push_back(g0);
        betas.push_back(b0);
        ParameterVector current(gammas, betas);
        check_init(current);

        Objective full = expectation_objective(sim, depth);
        std::vector<double> phi = current.flat();
        StageRecord stage = optimize_layer(full, phi, depth, depth, optimizer);
        stage.iteration = 1;
        gammas = stage.params.gammas;
        betas = stage.params.betas;
        trace.nfev += stage.nfev_delta;
        trace.value = stage.value;
        ++trace.subproblems;
        if (sink) {
            sink(stage);
        }
        trace.stages.push_back(std::move(stage));
    }
    trace.params = ParameterVector(gammas, betas);
    return trace;
}

StrategyTrace full_optimization(QaoaSimulator &sim, const ParameterVector &init, OptimizerKind optimizer,
                                const TraceSink &sink) {
    check_init(init);
    const int p = init.depth();
    Objective full = expectation_objective(sim, p);
    const std::vector<double> x0 = init.flat();
    OptResult result = maximize(optimizer, full, x0);

    StageRecord stage;
    stage.depth = p;
    stage.params = ParameterVector::from_flat(result.best_x);
    stage.value = result.best_value;
    stage.nfev_delta = result.nfev;

    StrategyTrace trace;
    trace.params = stage.params;
    trace.value = stage.value;
    trace.nfev = stage.nfev_delta;
    trace.converged = result.converged;
    if (sink) {
        sink(stage);
    }
    trace.stages.push_back(std::move(stage));
    return trace;
}

ParameterVector random_init(int depth, std::uint64_t seed) {
    if (depth < 1) {
        throw InputError("depth must be at least 1");
    }
    Rng rng(seed);
    std::vector<double> gammas(static_cast<size_t>(depth)), betas(static_cast<size_t>(depth));
    for (double &g : gammas) {
        g = kGammaPeriod * uniform01(rng);
    }
    for (double &b : betas) {
        b = kBetaPeriod * uniform01(rng);
    }
    return ParameterVector(std::move(gammas), std::move(betas));
}

namespace {

// prev has p-1 entries, prev2 has p-2.
std::vector<double> extrapolate_sequence(const std::vector<double> &prev, const std::vector<double> &prev2) {
    const size_t p = prev.size() + 1;
    std::vector<double> out(p);
    // Indices present at both depths continue their depth-to-depth drift.
    for (size_t i = 0; i + 2 < p; ++i) {
        out[i] = 2.0 * prev[i] - prev2[i];
    }
    // Index p-1 has no depth p-2 value; borrow the drift of index p-2.
    out[p - 2] = prev[p - 2] + (prev[p - 3] - prev2[p - 3]);
    // The new index continues the slope along the index direction.
    out[p - 1] = 2.0 * out[p - 2] - out[p - 3];
    return out;
}

}  // namespace

ParameterVector bilinear_extrapolate(const ParameterVector &prev, const ParameterVector &prev2) {
    if (prev2.depth() < 1 || prev.depth() != prev2.depth() + 1) {
        throw InputError("bilinear extrapolation needs depths p-1 and p-2 with p >= 3");
    }
    return ParameterVector(extrapolate_sequence(prev.gammas, prev2.gammas),
                           extrapolate_sequence(prev.betas, prev2.betas));
}

ParameterVector bilinear_init(const ParameterVector &prev, const ParameterVector &prev2) {
    return bilinear_extrapolate(prev, prev2).wrapped();
}

ParameterVector tqa_angles(int depth, double total_time) {
    if (depth < 1) {
        throw InputError("depth must be at least 1");
    }
    const double p = depth;
    std::vector<double> gammas(static_cast<size_t>(depth)), betas(static_cast<size_t>(depth));
    for (int i = 1; i <= depth; ++i) {
        gammas[i - 1] = i * total_time / (p * p);
        betas[i - 1] = (1.0 - i / p) * total_time / p;
    }
    return ParameterVector(std::move(gammas), std::move(betas));
}

TqaResult tqa_init(QaoaSimulator &sim, int depth, int grid_points) {
    if (depth < 1) {
        throw InputError("depth must be at least 1");
    }
    if (grid_points < 2) {
        throw InputError("TQA grid needs at least two points");
    }
    const double t_lo = 0.1;
    const double t_hi = 4.0 * depth;
    Objective line(
        [&sim, depth](std::span<const double> t) { return sim.expectation(tqa_angles(depth, t[0]).wrapped()); },
        {Bound{t_lo, t_hi}});

    double best_t = t_lo;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid_points; ++j) {
        const double t = t_lo + j * (t_hi - t_lo) / (grid_points - 1);
        const double value = line(std::span<const double>(&t, 1));
        if (value > best_value) {
            best_value = value;
            best_t = t;
        }
    }
    OptResult refined = nelder_mead(line, std::span<const double>(&best_t, 1));

    TqaResult result;
    result.total_time = refined.best_x[0];
    result.value = refined.best_value;
    result.params = tqa_angles(depth, result.total_time).wrapped();
    result.nfev = line.evaluations();
    return result;
}

Bootstrap bootstrap_depths(QaoaSimulator &sim, OptimizerKind optimizer, int up_to) {
    if (up_to < 2) {
        throw InputError("bootstrap must reach at least depth 2");
    }
    Bootstrap boot;

    constexpr int kGrid = 16;
    Objective depth1 = expectation_objective(sim, 1);
    std::vector<double> best{0.0, 0.0};
    double best_value = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < kGrid; ++a) {
        for (int b = 0; b < kGrid; ++b) {
            std::vector<double> x{a * kGammaPeriod / kGrid, b * kBetaPeriod / kGrid};
            double value = depth1(x);
            if (value > best_value) {
                best_value = value;
                best = x;
            }
        }
    }
    boot.depths.push_back(full_optimization(sim, ParameterVector::from_flat(best), optimizer));

    // Regular graphs have exact mirror optima at gamma -> pi - gamma. The
    // INTERP-style spacing below only works from the small-gamma copy.
    auto &p1 = boot.depths[0].params;
    if (p1.gammas[0] > kGammaPeriod / 2) {
        const double value = boot.depths[0].value;
        const double tol = 1e-9 * std::max(1.0, std::abs(value));
        for (double beta : {p1.betas[0], kBetaPeriod - p1.betas[0]}) {
            std::vector<double> mirror{kGammaPeriod - p1.gammas[0], beta};
            if (std::abs(depth1(mirror) - value) <= tol) {
                p1 = ParameterVector::from_flat(mirror);
                break;
            }
        }
    }
    boot.grid_nfev = depth1.evaluations();

    ParameterVector seed2({p1.gammas[0] / 2, p1.gammas[0]}, {p1.betas[0], p1.betas[0] / 2});
    boot.depths.push_back(full_optimization(sim, seed2, optimizer));

    for (int p = 3; p <= up_to; ++p) {
        auto init = bilinear_init(boot.depths[p - 2].params, boot.depths[p - 3].params);
        boot.depths.push_back(full_optimization(sim, init, optimizer));
    }
    return boot;
}

std::int64_t ProgressiveResult::cumulative_nfev() const {
    std::int64_t total = 0;
    for (const auto &t : traces) {
        total += t.nfev;
    }
    return total;
}

ProgressiveResult depth_progressive_run(QaoaSimulator &sim, const Bootstrap &bootstrap, int p_start, int p_target,
                                        const ProgressiveStrategy &strategy, OptimizerKind optimizer) {
    if (p_start < 3) {
        throw InputError("depth-progressive runs start at p >= 3");
    }
    if (p_target < p_start) {
        throw InputError("p_target must be >= p_start");
    }
    if (static_cast<int>(bootstrap.depths.size()) < p_start - 1) {
        throw InputError("bootstrap does not reach p_start - 1");
    }
    ProgressiveResult result;
    result.p_start = p_start;
    ParameterVector prev2 = bootstrap.depths[p_start - 3].params;
    ParameterVector prev = bootstrap.depths[p_start - 2].params;
    for (int p = p_start; p <= p_target; ++p) {
        ParameterVector init = bilinear_init(prev, prev2);
        StrategyTrace trace = strategy.itlw ? itlw(sim, init, strategy.itlw->resolve(p), optimizer)
                                            : full_optimization(sim, init, optimizer);
        prev2 = std::move(prev);
        prev = trace.params;
        result.traces.push_back(std::move(trace));
    }
    return result;
}

ProgressiveResult depth_progressive_run(QaoaSimulator &sim, int p_start, int p_target,
                                        const ProgressiveStrategy &strategy, OptimizerKind optimizer) {
    Bootstrap boot = bootstrap_depths(sim, optimizer, std::max(2, p_start - 1));
    return depth_progressive_run(sim, boot, p_start, p_target, strategy, optimizer);
}

}  // namespace itlw
