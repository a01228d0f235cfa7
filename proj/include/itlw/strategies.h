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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itlw/optimizers.h"
#include "itlw/simulator.h"

namespace itlw {

/// Optimizer box for a depth-p flat parameter vector:
/// [0, pi] for each gamma and [0, pi/2] for each beta.
std::vector<Bound> parameter_bounds(int depth);

/// Expectation of `sim` as an Objective over flat (gammas, betas).
Objective expectation_objective(QaoaSimulator &sim, int depth);

/// One entry of a strategy's history. For layer steps `iteration` and
/// `layer` are 1-based; for whole-vector steps `layer` is 0.
struct StageRecord {
    int depth = 0;
    int iteration = 0;
    int layer = 0;
    ParameterVector params;
    double value = 0.0;
    std::int64_t nfev_delta = 0;
};

using TraceSink = std::function<void(const StageRecord &)>;

struct StrategyTrace {
    std::vector<StageRecord> stages;
    ParameterVector params;
    double value = 0.0;
    std::int64_t nfev = 0;
    /// Number of restricted (two-variable) optimizations performed.
    int subproblems = 0;
    bool converged = true;
};

/// Iteration-count rule for ITLW: a constant, floor(p/2) or floor(p/2) - 1,
/// never below 1.
class KRule {
   public:
    enum class Kind { kConstant, kHalfP, kHalfPMinusOne };

    static KRule constant(int k);
    static KRule half_p() {
        return KRule(Kind::kHalfP, 0);
    }
    static KRule half_p_minus_one() {
        return KRule(Kind::kHalfPMinusOne, 0);
    }
    /// "3", "half_p" or "half_p_minus_1".
    static KRule parse(std::string_view text);

    int resolve(int depth) const;
    std::string label() const;
    /// Sort position: constants by value, then the adaptive rules.
    int order() const;
    Kind kind() const noexcept {
        return kind_;
    }

    bool operator==(const KRule &) const = default;

   private:
    KRule(Kind kind, int k) : kind_(kind), k_(k) {
    }
    Kind kind_;
    int k_;
};

/// k sweeps over layers 1..p; each step maximizes over (gamma_l, beta_l) with
/// every other entry frozen and writes the result back into the buffer.
StrategyTrace itlw(QaoaSimulator &sim, const ParameterVector &init, int k, OptimizerKind optimizer,
                   const TraceSink &sink = {});

/// How classic layerwise seeds the angles of each newly appended layer.
struct LayerGuess {
    enum class Kind { kFixed, kCopyPrevious, kRandom };
    Kind kind = Kind::kCopyPrevious;
    /// Used by kFixed, and by kCopyPrevious for the first layer.
    double gamma = 0.1;
    double beta = 0.1;
    std::uint64_t seed = 0;
};

/// Grows the circuit one layer at a time, optimizing only the newest pair.
/// Per-depth results are reported as stages with iteration 1, layer = depth.
StrategyTrace layerwise_classic(QaoaSimulator &sim, int p_target, OptimizerKind optimizer,
                                const LayerGuess &guess = {}, const TraceSink &sink = {});

/// Joint optimization of all 2p angles inside the parameter box.
StrategyTrace full_optimization(QaoaSimulator &sim, const ParameterVector &init, OptimizerKind optimizer,
                                const TraceSink &sink = {});

/// gamma_i ~ U[0, pi), beta_i ~ U[0, pi/2).
ParameterVector random_init(int depth, std::uint64_t seed);

/// Depth-p starting point extrapolated from optimized depth p-1 and p-2
/// vectors, before wrapping.
ParameterVector bilinear_extrapolate(const ParameterVector &prev, const ParameterVector &prev2);

/// bilinear_extrapolate followed by wrapping into the parameter box.
ParameterVector bilinear_init(const ParameterVector &prev, const ParameterVector &prev2);

/// Linear annealing schedule: gamma_i = i T / p^2, beta_i = (1 - i/p) T / p.
/// Not wrapped.
ParameterVector tqa_angles(int depth, double total_time);

struct TqaResult {
    ParameterVector params;
    double total_time = 0.0;
    double value = 0.0;
    std::int64_t nfev = 0;
};

/// Scans T over [0.1, 4p] on an evenly spaced grid, refines the best grid
/// point with Nelder-Mead, and returns the wrapped schedule at T*.
TqaResult tqa_init(QaoaSimulator &sim, int depth, int grid_points = 50);

/// Angles from the two shallowest depths, shared by every depth-progressive
/// chain on the same (graph, optimizer).
struct Bootstrap {
    std::vector<StrategyTrace> depths;  ///< depths[i] is depth i + 1.
    std::int64_t grid_nfev = 0;
};

/// Depth 1: 16 x 16 grid over the box, then local optimization, moved to the
/// small-gamma mirror copy when one exists with the same value. Depth 2:
/// (gamma/2, gamma), (beta, beta/2) from the depth-1 optimum, fully optimized.
/// Depths 3..up_to: bilinear start, fully optimized.
Bootstrap bootstrap_depths(QaoaSimulator &sim, OptimizerKind optimizer, int up_to = 2);

/// Which optimization strategy a depth-progressive chain applies.
struct ProgressiveStrategy {
    /// Empty means full optimization.
    std::optional<KRule> itlw;

    static ProgressiveStrategy full() {
        return {};
    }
    static ProgressiveStrategy iterative(KRule rule) {
        return {rule};
    }
};

struct ProgressiveResult {
    int p_start = 3;
    /// traces[i] is depth p_start + i.
    std::vector<StrategyTrace> traces;

    std::int64_t cumulative_nfev() const;
};

/// Bilinear depth-progressive run from p_start (>= 3) to p_target. Depths
/// below p_start come from `bootstrap`, which must reach p_start - 1.
ProgressiveResult depth_progressive_run(QaoaSimulator &sim, const Bootstrap &bootstrap, int p_start, int p_target,
                                        const ProgressiveStrategy &strategy, OptimizerKind optimizer);

/// Convenience overload that computes the bootstrap itself.
ProgressiveResult depth_progressive_run(QaoaSimulator &sim, int p_start, int p_target,
                                        const ProgressiveStrategy &strategy, OptimizerKind optimizer);

}  // namespace itlw
