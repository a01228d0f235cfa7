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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace itlw {

struct Bound {
    double lower;
    double upper;
};

/// A scalar function over a box, with an evaluation counter that every call
/// bumps by exactly one. Copies share the counter.
class Objective {
   public:
    using Function = std::function<double(std::span<const double>)>;

    Objective(Function fn, std::vector<Bound> bounds);

    double operator()(std::span<const double> x) const;

    size_t dimension() const noexcept {
        return bounds_.size();
    }
    const std::vector<Bound> &bounds() const noexcept {
        return bounds_;
    }
    std::int64_t evaluations() const noexcept {
        return *counter_;
    }
    bool contains(std::span<const double> x) const;

   private:
    Function fn_;
    std::vector<Bound> bounds_;
    std::shared_ptr<std::int64_t> counter_;
};

/// View of `objective` over the coordinates in `free_indices`, every other
/// coordinate frozen at its value in `fixed`. Calls are forwarded, so they
/// count against both the view and the underlying objective.
Objective restrict(const Objective &objective, std::span<const double> fixed, std::vector<size_t> free_indices);

enum class Termination {
    kSimplexConverged,
    kProjectedGradient,
    kRelativeReduction,
    kMaxEvaluations,
    kLineSearchFailed,
};

std::string_view to_string(Termination reason);

struct OptResult {
    std::vector<double> best_x;
    double best_value = 0.0;
    std::int64_t nfev = 0;
    bool converged = false;
    Termination reason = Termination::kMaxEvaluations;
};

struct NelderMeadOptions {
    double xatol = 1e-4;
    double fatol = 1e-4;
    /// 0 selects 200 * dimension.
    std::int64_t maxfev = 0;
};

struct QuasiNewtonOptions {
    int history = 10;
    double pgtol = 1e-5;
    /// Relative reduction threshold, 1e7 * machine epsilon.
    double ftol = 2.220446049250313e-09;
    std::int64_t maxfev = 15000;
    int max_line_search_steps = 20;
};

/// Maximizes with the Nelder-Mead simplex; trial points are clipped into the
/// box. Returns the best point evaluated.
OptResult nelder_mead(const Objective &objective, std::span<const double> x0, const NelderMeadOptions &options = {});

/// Maximizes with limited-memory BFGS on a box (Cauchy point along the
/// projected gradient path, then a subspace step over the free variables).
/// Gradients are forward differences and their probes count as evaluations.
OptResult bounded_quasi_newton(const Objective &objective, std::span<const double> x0,
                               const QuasiNewtonOptions &options = {});

enum class OptimizerKind { kNelderMead, kLbfgsb };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

/// Dispatches to the optimizer with its default options.
OptResult maximize(OptimizerKind kind, const Objective &objective, std::span<const double> x0);

}  // namespace itlw
