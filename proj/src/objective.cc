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

#include <algorithm>

#include "itlw/errors.h"
#include "itlw/optimizers.h"

namespace itlw {

Objective::Objective(Function fn, std::vector<Bound> bounds)
    : fn_(std::move(fn)), bounds_(std::move(bounds)), counter_(std::make_shared<std::int64_t>(0)) {
    if (bounds_.empty()) {
        throw InputError("objective needs at least one variable");
    }
    for (const auto &b : bounds_) {
        if (!(b.lower <= b.upper)) {
            throw InputError("bound with lower > upper");
        }
    }
}

double Objective::operator()(std::span<const double> x) const {
    ++*counter_;
    return fn_(x);
}

bool Objective::contains(std::span<const double> x) const {
    if (x.size() != bounds_.size()) {
        return false;
    }
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= bounds_[i].lower && x[i] <= bounds_[i].upper)) {
            return false;
        }
    }
    return true;
}

Objective restrict(const Objective &objective, std::span<const double> fixed, std::vector<size_t> free_indices) {
    if (fixed.size() != objective.dimension()) {
        throw InputError("fixed vector has wrong dimension");
    }
    if (free_indices.empty()) {
        throw InputError("restriction needs at least one free index");
    }
    std::vector<Bound> bounds;
    for (size_t k = 0; k < free_indices.size(); ++k) {
        size_t idx = free_indices[k];
        if (idx >= objective.dimension()) {
            throw InputError("free index " + std::to_string(idx) + " out of range");
        }
        if (std::find(free_indices.begin(), free_indices.begin() + static_cast<std::ptrdiff_t>(k), idx) !=
            free_indices.begin() + static_cast<std::ptrdiff_t>(k)) {
            throw InputError("free indices must be distinct");
        }
        bounds.push_back(objective.bounds()[idx]);
    }
    auto full = std::make_shared<std::vector<double>>(fixed.begin(), fixed.end());
    auto fn = [objective, full, free_indices](std::span<const double> x) {
        for (size_t k = 0; k < free_indices.size(); ++k) {
            (*full)[free_indices[k]] = x[k];
        }
        return objective(*full);
    };
    return Objective(std::move(fn), std::move(bounds));
}

std::string_view to_string(Termination reason) {
    switch (reason) {
        case Termination::kSimplexConverged:
            return "simplex_converged";
        case Termination::kProjectedGradient:
            return "projected_gradient";
        case Termination::kRelativeReduction:
            return "relative_reduction";
        case Termination::kMaxEvaluations:
            return "max_evaluations";
        case Termination::kLineSearchFailed:
            return "line_search_failed";
    }
    return "unknown";
}

std::string_view to_string(OptimizerKind kind) {
    return kind == OptimizerKind::kNelderMead ? "nelder-mead" : "l-bfgs-b";
}

OptimizerKind parse_optimizer(std::string_view name) {
    if (name == "nelder-mead" || name == "nm") {
        return OptimizerKind::kNelderMead;
    }
    if (name == "l-bfgs-b" || name == "lbfgsb") {
        return OptimizerKind::kLbfgsb;
    }
    throw InputError("unknown optimizer '" + std::string(name) + "'");
}

OptResult maximize(OptimizerKind kind, const Objective &objective, std::span<const double> x0) {
    if (kind == OptimizerKind::kNelderMead) {
        return nelder_mead(objective, x0);
    }
    return bounded_quasi_newton(objective, x0);
}

}  // namespace itlw
