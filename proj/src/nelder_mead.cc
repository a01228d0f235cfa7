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
#include <cmath>
#include <numeric>

#include "itlw/errors.h"
#include "itlw/optimizers.h"
#include "tracked_objective.h"

namespace itlw {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kNonzeroDelta = 0.05;
constexpr double kZeroDelta = 0.00025;

}  // namespace

OptResult nelder_mead(const Objective &objective, std::span<const double> x0, const NelderMeadOptions &options) {
    const size_t d = objective.dimension();
    if (x0.size() != d) {
        throw InputError("x0 has wrong dimension");
    }
    if (!objective.contains(x0)) {
        throw InputError("x0 lies outside the bounds");
    }
    const auto &bounds = objective.bounds();
    const std::int64_t maxfev = options.maxfev > 0 ? options.maxfev : static_cast<std::int64_t>(200 * d);

    detail::TrackedObjective f(objective);
    using Point = std::vector<double>;

    std::vector<Point> sim(d + 1, Point(x0.begin(), x0.end()));
    for (size_t k = 0; k < d; ++k) {
        double &y = sim[k + 1][k];
        double step = y != 0.0 ? kNonzeroDelta * y : kZeroDelta;
        y += step;
        // A vertex pushed past the upper face is mirrored back; clipping alone
        // could collapse it onto x0 and flatten the simplex.
        if (y > bounds[k].upper) {
            y = 2.0 * bounds[k].upper - y;
        }
        detail::clip_into(sim[k + 1], bounds);
    }
    std::vector<double> fsim(d + 1);
    for (size_t j = 0; j <= d; ++j) {
        fsim[j] = f.cost(sim[j]);
    }

    std::vector<size_t> order(d + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fsim[a] < fsim[b]; });
        std::vector<Point> s2(d + 1);
        std::vector<double> f2(d + 1);
        for (size_t j = 0; j <= d; ++j) {
            s2[j] = std::move(sim[order[j]]);
            f2[j] = fsim[order[j]];
        }
        sim.swap(s2);
        fsim.swap(f2);
    };
    sort_simplex();

    auto combine = [&](const Point &centroid, double scale) {
        // centroid + scale * (centroid - worst)
        Point out(d);
        for (size_t i = 0; i < d; ++i) {
            out[i] = (1.0 + scale) * centroid[i] - scale * sim[d][i];
        }
        detail::clip_into(out, bounds);
        return out;
    };

    bool converged = false;
    while (f.evaluations() < maxfev) {
        double xspread = 0.0, fspread = 0.0;
        for (size_t j = 1; j <= d; ++j) {
            for (size_t i = 0; i < d; ++i) {
                xspread = std::max(xspread, std::abs(sim[j][i] - sim[0][i]));
            }
            fspread = std::max(fspread, std::abs(fsim[0] - fsim[j]));
        }
        if (xspread <= options.xatol && fspread <= options.fatol) {
            converged = true;
            break;
        }

        Point centroid(d, 0.0);
        for (size_t j = 0; j < d; ++j) {
            for (size_t i = 0; i < d; ++i) {
                centroid[i] += sim[j][i];
            }
        }
        for (double &c : centroid) {
            c /= static_cast<double>(d);
        }

        Point xr = combine(centroid, kReflect);
        double fxr = f.cost(xr);
        bool shrink = false;

        if (fxr < fsim[0]) {
            Point xe = combine(centroid, kReflect * kExpand);
            double fxe = f.cost(xe);
            if (fxe < fxr) {
                sim[d] = std::move(xe);
                fsim[d] = fxe;
            } else {
                sim[d] = std::move(xr);
                fsim[d] = fxr;
            }
        } else if (fxr < fsim[d - 1]) {
            sim[d] = std::move(xr);
            fsim[d] = fxr;
        } else if (fxr < fsim[d]) {
            Point xc = combine(centroid, kContract * kReflect);
            double fxc = f.cost(xc);
            if (fxc <= fxr) {
                sim[d] = std::move(xc);
                fsim[d] = fxc;
            } else {
                shrink = true;
            }
        } else {
            Point xcc = combine(centroid, -kContract);
            double fxcc = f.cost(xcc);
            if (fxcc < fsim[d]) {
                sim[d] = std::move(xcc);
                fsim[d] = fxcc;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (size_t j = 1; j <= d; ++j) {
                for (size_t i = 0; i < d; ++i) {
                    sim[j][i] = sim[0][i] + kShrink * (sim[j][i] - sim[0][i]);
                }
                detail::clip_into(sim[j], bounds);
                fsim[j] = f.cost(sim[j]);
            }
        }
        sort_simplex();
    }
    return f.finish(converged, converged ? Termination::kSimplexConverged : Termination::kMaxEvaluations);
}

}  // namespace itlw
