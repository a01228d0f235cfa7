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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "itlw/errors.h"
#include "itlw/optimizers.h"
#include "tracked_objective.h"

namespace itlw {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kArmijo = 1e-3;
constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
    VectorXd lower;
    VectorXd upper;

    explicit Box(const std::vector<Bound> &bounds) : lower(bounds.size()), upper(bounds.size()) {
        for (size_t i = 0; i < bounds.size(); ++i) {
            lower[static_cast<Eigen::Index>(i)] = bounds[i].lower;
            upper[static_cast<Eigen::Index>(i)] = bounds[i].upper;
        }
    }

    VectorXd clip(const VectorXd &x) const {
        return x.cwiseMax(lower).cwiseMin(upper);
    }
};

// Minimizes cost = -objective; all vectors below live in that frame.
class Minimizer {
   public:
    Minimizer(detail::TrackedObjective &f, const Box &box, const QuasiNewtonOptions &options)
        : f_(f), box_(box), options_(options), n_(box.lower.size()) {
    }

    bool budget_left() const {
        return f_.evaluations() < options_.maxfev;
    }

    double cost(const VectorXd &x) {
        return f_.cost(std::span<const double>(x.data(), static_cast<size_t>(x.size())));
    }

    // Forward differences with step max(1e-8, 1e-8 |x_i|); backward when the
    // forward probe would leave the box.
    VectorXd gradient(const VectorXd &x, double fx) {
        VectorXd g(n_);
        VectorXd probe = x;
        for (Eigen::Index i = 0; i < n_; ++i) {
            double h = std::max(1e-8, 1e-8 * std::abs(x[i]));
            if (x[i] + h > box_.upper[i]) {
                h = -h;
                if (x[i] + h < box_.lower[i]) {
                    g[i] = 0.0;
                    continue;
                }
            }
            probe[i] = x[i] + h;
            g[i] = (cost(probe) - fx) / h;
            probe[i] = x[i];
        }
        return g;
    }

    double projected_gradient_norm(const VectorXd &x, const VectorXd &g) const {
        return (box_.clip(x - g) - x).lpNorm<Eigen::Infinity>();
    }

    MatrixXd hessian_approximation() const {
        MatrixXd b = theta_ * MatrixXd::Identity(n_, n_);
        for (size_t k = 0; k < s_.size(); ++k) {
            VectorXd bs = b * s_[k];
            b += y_[k] * y_[k].transpose() / y_[k].dot(s_[k]) - bs * bs.transpose() / s_[k].dot(bs);
        }
        return b;
    }

    // Generalized Cauchy point: first local minimizer of the quadratic model
    // along the projected steepest-descent path. `free` marks variables that
    // did not hit a bound on the way.
    VectorXd cauchy_point(const VectorXd &x, const VectorXd &g, const MatrixXd &b, std::vector<bool> &free) const {
        VectorXd d = -g;
        VectorXd t(n_);
        free.assign(static_cast<size_t>(n_), true);
        std::vector<Eigen::Index> breakpoints;
        for (Eigen::Index i = 0; i < n_; ++i) {
            if (g[i] < 0.0) {
                t[i] = (x[i] - box_.upper[i]) / g[i];
            } else if (g[i] > 0.0) {
                t[i] = (x[i] - box_.lower[i]) / g[i];
            } else {
                t[i] = kInf;
            }
            if (t[i] <= 0.0) {
                d[i] = 0.0;
                free[static_cast<size_t>(i)] = false;
            } else if (t[i] < kInf) {
                breakpoints.push_back(i);
            }
        }
        std::stable_sort(breakpoints.begin(), breakpoints.end(),
                         [&](Eigen::Index a, Eigen::Index c) { return t[a] < t[c]; });

        VectorXd z = VectorXd::Zero(n_);
        double f1 = g.dot(d);
        double f2 = d.dot(b * d);
        double t_old = 0.0;
        double dt_min = f2 > 0.0 ? -f1 / f2 : kInf;
        for (Eigen::Index i : breakpoints) {
            if (f1 >= 0.0) {
                dt_min = 0.0;
                break;
            }
            double dt = t[i] - t_old;
            if (dt_min < dt) {
                break;
            }
            z += dt * d;
            z[i] = (d[i] > 0.0 ? box_.upper[i] : box_.lower[i]) - x[i];
            d[i] = 0.0;
            free[static_cast<size_t>(i)] = false;
            t_old = t[i];
            VectorXd bd = b * d;
            f1 = g.dot(d) + bd.dot(z);
            f2 = d.dot(bd);
            dt_min = f2 > 0.0 ? -f1 / f2 : (f1 < 0.0 ? kInf : 0.0);
        }
        if (!std::isfinite(dt_min)) {
            dt_min = 0.0;
        }
        dt_min = std::max(dt_min, 0.0);
        return box_.clip(x + z + dt_min * d);
    }

    // Quasi-Newton step over the free variables from the Cauchy point,
    // truncated to stay inside the box.
    VectorXd subspace_step(const VectorXd &x, const VectorXd &g, const MatrixXd &b, const VectorXd &xc,
                           const std::vector<bool> &free) const {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < n_; ++i) {
            if (free[static_cast<size_t>(i)]) {
                idx.push_back(i);
            }
        }
        if (idx.empty()) {
            return xc;
        }
        const auto m = static_cast<Eigen::Index>(idx.size());
        VectorXd r_full = g + b * (xc - x);
        MatrixXd bff(m, m);
        VectorXd r(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            r[a] = r_full[idx[a]];
            for (Eigen::Index c = 0; c < m; ++c) {
                bff(a, c) = b(idx[a], idx[c]);
            }
        }
        VectorXd du = bff.ldlt().solve(-r);
        if (!du.allFinite()) {
            return xc;
        }
        double alpha = 1.0;
        for (Eigen::Index a = 0; a < m; ++a) {
            const Eigen::Index i = idx[a];
            if (du[a] > 0.0) {
                alpha = std::min(alpha, (box_.upper[i] - xc[i]) / du[a]);
            } else if (du[a] < 0.0) {
                alpha = std::min(alpha, (box_.lower[i] - xc[i]) / du[a]);
            }
        }
        alpha = std::max(alpha, 0.0);
        VectorXd xbar = xc;
        for (Eigen::Index a = 0; a < m; ++a) {
            xbar[idx[a]] += alpha * du[a];
        }
        return box_.clip(xbar);
    }

    void reset_memory() {
        s_.clear();
        y_.clear();
        theta_ = 1.0;
    }

    void push_pair(const VectorXd &s, const VectorXd &y) {
        const double sy = s.dot(y);
        if (sy <= kEpsilon * y.squaredNorm()) {
            return;
        }
        s_.push_back(s);
        y_.push_back(y);
        if (static_cast<int>(s_.size()) > options_.history) {
            s_.pop_front();
            y_.pop_front();
        }
        theta_ = y.squaredNorm() / sy;
    }

    bool has_memory() const {
        return !s_.empty();
    }

   private:
    detail::TrackedObjective &f_;
    const Box &box_;
    const QuasiNewtonOptions &options_;
    Eigen::Index n_;
    std::deque<VectorXd> s_;
    std::deque<VectorXd> y_;
    double theta_ = 1.0;
};

}  // namespace

OptResult bounded_quasi_newton(const Objective &objective, std::span<const double> x0,
                               const QuasiNewtonOptions &options) {
    const size_t dim = objective.dimension();
    if (x0.size() != dim) {
        throw InputError("x0 has wrong dimension");
    }
    if (!objective.contains(x0)) {
        throw InputError("x0 lies outside the bounds");
    }
    detail::TrackedObjective f(objective);
    Box box(objective.bounds());
    Minimizer core(f, box, options);

    VectorXd x = Eigen::Map<const VectorXd>(x0.data(), static_cast<Eigen::Index>(dim));
    double fx = core.cost(x);
    VectorXd g = core.gradient(x, fx);

    bool first_iteration = true;
    while (true) {
        if (core.projected_gradient_norm(x, g) <= options.pgtol) {
            return f.finish(true, Termination::kProjectedGradient);
        }
        if (!core.budget_left()) {
            return f.finish(false, Termination::kMaxEvaluations);
        }

        MatrixXd b = core.hessian_approximation();
        std::vector<bool> free;
        VectorXd xc = core.cauchy_point(x, g, b, free);
        VectorXd d = core.subspace_step(x, g, b, xc, free) - x;
        double slope = g.dot(d);
        if (!(slope < 0.0)) {
            if (core.has_memory()) {
                core.reset_memory();
                continue;
            }
            return f.finish(false, Termination::kLineSearchFailed);
        }

        double step = 1.0;
        if (first_iteration) {
            step = std::min(1.0, 1.0 / d.norm());
        }
        VectorXd xt;
        double ft = 0.0;
        bool accepted = false;
        for (int trial = 0; trial < options.max_line_search_steps && core.budget_left(); ++trial) {
            xt = box.clip(x + step * d);
            ft = core.cost(xt);
            if (ft <= fx + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            // Minimizer of the interpolating quadratic, kept in [0.1, 0.5] * step.
            double denom = 2.0 * (ft - fx - step * slope);
            double next = std::isfinite(ft) && denom > 0.0 ? -slope * step * step / denom : 0.5 * step;
            step = std::clamp(next, 0.1 * step, 0.5 * step);
        }
        if (!accepted) {
            if (!core.budget_left()) {
                return f.finish(false, Termination::kMaxEvaluations);
            }
            if (core.has_memory()) {
                core.reset_memory();
                continue;
            }
            return f.finish(false, Termination::kLineSearchFailed);
        }
        first_iteration = false;

        VectorXd gt = core.gradient(xt, ft);
        const double reduction = (fx - ft) / std::max({std::abs(fx), std::abs(ft), 1.0});
        core.push_pair(xt - x, gt - g);
        x = std::move(xt);
        fx = ft;
        g = std::move(gt);
        if (reduction <= options.ftol) {
            return f.finish(true, Termination::kRelativeReduction);
        }
    }
}

}  // namespace itlw
