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

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "itlw/optimizers.h"

namespace itlw::detail {

/// Wraps an objective for a single optimizer run: records the best point ever
/// evaluated and exposes the negated value for the minimizing core.
class TrackedObjective {
   public:
    explicit TrackedObjective(const Objective &objective)
        : objective_(objective), start_(objective.evaluations()) {
    }

    /// Negated objective value; NaN is mapped to +inf.
    double cost(std::span<const double> x) {
        double value = objective_(x);
        if (value > best_value_ || best_x_.empty()) {
            if (!std::isnan(value)) {
                best_value_ = value;
                best_x_.assign(x.begin(), x.end());
            }
        }
        return std::isnan(value) ? std::numeric_limits<double>::infinity() : -value;
    }

    std::int64_t evaluations() const {
        return objective_.evaluations() - start_;
    }

    OptResult finish(bool converged, Termination reason) const {
        OptResult result;
        result.best_x = best_x_;
        result.best_value = best_value_;
        result.nfev = evaluations();
        result.converged = converged;
        result.reason = reason;
        return result;
    }

   private:
    const Objective &objective_;
    std::int64_t start_;
    double best_value_ = -std::numeric_limits<double>::infinity();
    std::vector<double> best_x_;
};

inline void clip_into(std::span<double> x, const std::vector<Bound> &bounds) {
    for (size_t i = 0; i < x.size(); ++i) {
        x[i] = std::min(std::max(x[i], bounds[i].lower), bounds[i].upper);
    }
}

}  // namespace itlw::detail
