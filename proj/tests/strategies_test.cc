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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "itlw/errors.h"
#include "itlw/graph.h"
#include "itlw/strategies.h"
#include "oracles.h"

namespace itlw {
namespace {

class Strategies : public ::testing::TestWithParam<OptimizerKind> {};

TEST_P(Strategies, ItlwStructure) {
    Graph g = generate_regular(8, 3, 4);
    QaoaSimulator sim(g);
    for (int p : {1, 3, 4}) {
        for (int k : {1, 2, 3}) {
            ParameterVector init = random_init(p, 100 + p * 10 + k);
            const double start = sim.expectation(init);
            std::vector<StageRecord> streamed;
            auto trace = itlw(sim, init, k, GetParam(), [&](const StageRecord &s) { streamed.push_back(s); });

            EXPECT_EQ(trace.subproblems, k * p);
            ASSERT_EQ(trace.stages.size(), static_cast<size_t>(k * p));
            EXPECT_EQ(streamed.size(), trace.stages.size());

            double previous = start;
            std::vector<double> before = init.flat();
            std::int64_t nfev = 0;
            for (std::size_t s = 0; s < trace.stages.size(); ++s) {
                const auto &stage = trace.stages[s];
                EXPECT_EQ(stage.iteration, static_cast<int>(s) / p + 1);
                EXPECT_EQ(stage.layer, static_cast<int>(s) % p + 1);
                EXPECT_GE(stage.value, previous);
                previous = stage.value;
                nfev += stage.nfev_delta;

                auto after = stage.params.flat();
                for (int i = 0; i < 2 * p; ++i) {
                    if (i == stage.layer - 1 || i == p + stage.layer - 1) {
                        continue;
                    }
                    EXPECT_EQ(std::bit_cast<std::uint64_t>(after[i]), std::bit_cast<std::uint64_t>(before[i]));
                }
                EXPECT_EQ(sim.expectation(stage.params), stage.value);
                before = after;
            }
            EXPECT_EQ(trace.nfev, nfev);
            EXPECT_EQ(trace.params, trace.stages.back().params);
            EXPECT_TRUE(trace.params.in_box());
        }
    }
}

TEST_P(Strategies, ItlwDepthOneEqualsFullOptimization) {
    QaoaSimulator sim(petersen_graph());
    ParameterVector init({0.4}, {0.3});
    auto a = itlw(sim, init, 1, GetParam());
    auto b = full_optimization(sim, init, GetParam());
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.nfev, b.nfev);
}

TEST_P(Strategies, FullOptimizationSingleEdge) {
    QaoaSimulator sim(Graph(2, {{0, 1}}));
    auto fo = full_optimization(sim, ParameterVector({0.1}, {0.1}), GetParam());
    auto grid = oracle::grid_max(
        [](double g, double b) { return oracle::dense_expectation(Graph(2, {{0, 1}}), ParameterVector({g}, {b})); },
        100);
    EXPECT_NEAR(fo.value, grid.value, 1e-6);
    EXPECT_NEAR(fo.value, 1.0, 1e-6);
}

TEST_P(Strategies, FullOptimizationAccounting) {
    Graph g = generate_erdos_renyi(8, 0.5, 6);
    QaoaSimulator sim(g);
    const int c_max = max_cut_brute_force(g).c_max;
    for (int p : {1, 2, 3}) {
        Objective probe = expectation_objective(sim, p);
        auto init = random_init(p, p);
        auto fo = full_optimization(sim, init, GetParam());
        auto direct = maximize(GetParam(), probe, init.flat());
        EXPECT_EQ(fo.nfev, probe.evaluations());
        EXPECT_EQ(fo.nfev, direct.nfev);
        EXPECT_LE(fo.value / c_max, 1.0);
        EXPECT_GE(fo.value, sim.expectation(init));
    }
}

TEST_P(Strategies, LayerwiseFreezesPrefix) {
    QaoaSimulator sim(generate_regular(8, 3, 2));
    auto trace = layerwise_classic(sim, 5, GetParam());
    ASSERT_EQ(trace.stages.size(), 5u);
    EXPECT_EQ(trace.subproblems, 5);
    for (std::size_t d = 1; d < trace.stages.size(); ++d) {
        const auto &prev = trace.stages[d - 1].params;
        const auto &cur = trace.stages[d].params;
        ASSERT_EQ(cur.depth(), static_cast<int>(d) + 1);
        for (std::size_t i = 0; i < d; ++i) {
            EXPECT_EQ(cur.gammas[i], prev.gammas[i]);
            EXPECT_EQ(cur.betas[i], prev.betas[i]);
        }
    }
}

TEST_P(Strategies, LayerwiseDepthOneEqualsItlwOneOne) {
    QaoaSimulator sim(complete_graph(4));
    LayerGuess guess;
    auto lw = layerwise_classic(sim, 1, GetParam(), guess);
    auto it = itlw(sim, ParameterVector({guess.gamma}, {guess.beta}), 1, GetParam());
    EXPECT_EQ(lw.params, it.params);
    EXPECT_EQ(lw.value, it.value);
}

TEST_P(Strategies, ItlwFromPlateauDoesNotDecrease) {
    QaoaSimulator sim(generate_regular(10, 3, 9));
    auto lw = layerwise_classic(sim, 4, GetParam());
    auto more = itlw(sim, lw.params, 2, GetParam());
    EXPECT_GE(more.value, lw.value);
}

INSTANTIATE_TEST_SUITE_P(Optimizers, Strategies,
                         ::testing::Values(OptimizerKind::kNelderMead, OptimizerKind::kLbfgsb),
                         [](const auto &info) { return info.param == OptimizerKind::kNelderMead ? "NM" : "LBFGSB"; });

TEST(Itlw, RejectsBadInput) {
    QaoaSimulator sim(complete_graph(3));
    EXPECT_THROW(itlw(sim, ParameterVector({0.1}, {0.1}), 0, OptimizerKind::kNelderMead), InputError);
    EXPECT_THROW(itlw(sim, ParameterVector({4.0}, {0.1}), 1, OptimizerKind::kNelderMead), InputError);
}

TEST(KRules, ResolveAndFloor) {
    EXPECT_EQ(KRule::constant(3).resolve(10), 3);
    EXPECT_EQ(KRule::half_p().resolve(8), 4);
    EXPECT_EQ(KRule::half_p().resolve(1), 1);
    EXPECT_EQ(KRule::half_p_minus_one().resolve(2), 1);
    EXPECT_EQ(KRule::half_p_minus_one().resolve(3), 1);
    EXPECT_EQ(KRule::half_p_minus_one().resolve(9), 3);
    EXPECT_THROW(KRule::constant(0), InputError);
    EXPECT_THROW(KRule::parse("two"), InputError);
    for (auto rule : {KRule::constant(2), KRule::half_p(), KRule::half_p_minus_one()}) {
        EXPECT_EQ(KRule::parse(rule.label()), rule);
    }
    EXPECT_LT(KRule::constant(5).order(), KRule::half_p().order());
}

TEST(RandomInit, BoundsShapeAndDeterminism) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto v = random_init(3, seed);
        for (double g : v.gammas) {
            ASSERT_GE(g, 0.0);
            ASSERT_LT(g, kGammaPeriod);
        }
        for (double b : v.betas) {
            ASSERT_GE(b, 0.0);
            ASSERT_LT(b, kBetaPeriod);
        }
    }
    EXPECT_EQ(random_init(5, 42), random_init(5, 42));
    EXPECT_NE(random_init(5, 42), random_init(5, 43));
    EXPECT_EQ(random_init(5, 1).flat().size(), 10u);
}

TEST(Bilinear, WorkedDepthThreeExample) {
    auto out = bilinear_extrapolate(ParameterVector({0.25, 0.5}, {0.45, 0.35}), ParameterVector({0.3}, {0.4}));
    // Hand arithmetic, evaluated in the same operation order.
    const double g1 = 2.0 * 0.25 - 0.3;
    const double g2 = 0.5 + (0.25 - 0.3);
    const double b1 = 2.0 * 0.45 - 0.4;
    const double b2 = 0.35 + (0.45 - 0.4);
    EXPECT_EQ(out.gammas, (std::vector<double>{g1, g2, 2.0 * g2 - g1}));
    EXPECT_EQ(out.betas, (std::vector<double>{b1, b2, 2.0 * b2 - b1}));
    const double gammas[] = {0.20, 0.45, 0.70};
    const double betas[] = {0.50, 0.40, 0.30};
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(out.gammas[i], gammas[i], 1e-15);
        EXPECT_NEAR(out.betas[i], betas[i], 1e-15);
    }
}

TEST(Bilinear, ConstantSequencesStayConstant) {
    for (int p = 3; p <= 8; ++p) {
        ParameterVector prev(std::vector<double>(p - 1, 0.7), std::vector<double>(p - 1, 0.2));
        ParameterVector prev2(std::vector<double>(p - 2, 0.7), std::vector<double>(p - 2, 0.2));
        auto out = bilinear_extrapolate(prev, prev2);
        for (int i = 0; i < p; ++i) {
            EXPECT_EQ(out.gammas[i], 0.7);
            EXPECT_EQ(out.betas[i], 0.2);
        }
    }
}

TEST(Bilinear, ShiftEquivariant) {
    ParameterVector prev({0.3, 0.6, 0.8, 1.1}, {0.5, 0.4, 0.3, 0.1});
    ParameterVector prev2({0.35, 0.7, 1.0}, {0.45, 0.35, 0.2});
    auto base = bilinear_extrapolate(prev, prev2);
    const double c = 0.125;
    auto shift = [c](ParameterVector v) {
        for (auto &x : v.gammas) x += c;
        for (auto &x : v.betas) x -= c;
        return v;
    };
    auto moved = bilinear_extrapolate(shift(prev), shift(prev2));
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(moved.gammas[i], base.gammas[i] + c, 1e-14);
        EXPECT_NEAR(moved.betas[i], base.betas[i] - c, 1e-14);
    }
}

TEST(Bilinear, InitWrapsIntoBox) {
    auto v = bilinear_init(ParameterVector({1.5, 3.0}, {0.1, 0.05}), ParameterVector({0.5}, {0.3}));
    EXPECT_TRUE(v.in_box());
    EXPECT_THROW(bilinear_extrapolate(ParameterVector({0.1}, {0.1}), ParameterVector({0.1}, {0.1})), InputError);
}

TEST(Tqa, LinearSchedule) {
    for (double t : {0.1, 1.0, 5.5}) {
        auto v = tqa_angles(6, t);
        for (int i = 1; i < 6; ++i) {
            EXPECT_LT(v.gammas[i - 1], v.gammas[i]);
            EXPECT_GT(v.betas[i - 1], v.betas[i]);
        }
        EXPECT_EQ(v.betas[5], 0.0);
    }
}

TEST(Tqa, LineOptimumBelowFreeOptimum) {
    QaoaSimulator sim(Graph(2, {{0, 1}}));
    auto r = tqa_init(sim, 1);
    EXPECT_LE(r.value, 1.0 + 1e-12);
    EXPECT_GT(r.nfev, 50);
    EXPECT_EQ(sim.expectation(r.params), r.value);
}

TEST(Tqa, BeatsGridPointsAtDepthThree) {
    Graph g = generate_regular(8, 3, 1);
    QaoaSimulator sim(g);
    auto r = tqa_init(sim, 3);
    for (int j = 0; j < 50; ++j) {
        const double t = 0.1 + j * (12.0 - 0.1) / 49;
        EXPECT_GE(r.value, sim.expectation(tqa_angles(3, t).wrapped()));
    }
}

TEST(Progressive, CumulativeCostIsSumOfDepths) {
    QaoaSimulator sim(generate_regular(8, 3, 5));
    auto boot = bootstrap_depths(sim, OptimizerKind::kNelderMead, 2);
    auto run = depth_progressive_run(sim, boot, 3, 6, ProgressiveStrategy::iterative(KRule::constant(2)),
                                     OptimizerKind::kNelderMead);
    ASSERT_EQ(run.traces.size(), 4u);
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < run.traces.size(); ++i) {
        sum += run.traces[i].nfev;
        EXPECT_EQ(run.traces[i].subproblems, 2 * (3 + static_cast<int>(i)));
        EXPECT_EQ(run.traces[i].params.depth(), 3 + static_cast<int>(i));
    }
    EXPECT_EQ(run.cumulative_nfev(), sum);
}

TEST(Progressive, ChainsFromBilinearStarts) {
    QaoaSimulator sim(generate_erdos_renyi(8, 0.5, 3));
    auto boot = bootstrap_depths(sim, OptimizerKind::kLbfgsb, 3);
    auto run = depth_progressive_run(sim, boot, 4, 5, ProgressiveStrategy::full(), OptimizerKind::kLbfgsb);
    auto init4 = bilinear_init(boot.depths[2].params, boot.depths[1].params);
    auto fo4 = full_optimization(sim, init4, OptimizerKind::kLbfgsb);
    EXPECT_EQ(run.traces[0].params, fo4.params);
    auto init5 = bilinear_init(fo4.params, boot.depths[2].params);
    EXPECT_EQ(run.traces[1].params, full_optimization(sim, init5, OptimizerKind::kLbfgsb).params);
}

TEST(Progressive, RejectsShallowStart) {
    QaoaSimulator sim(complete_graph(4));
    EXPECT_THROW(depth_progressive_run(sim, 2, 4, ProgressiveStrategy::full(), OptimizerKind::kNelderMead), InputError);
}

TEST(Bootstrap, PrefersSmallGammaMirrorOnCubicGraphs) {
    QaoaSimulator sim(generate_regular(10, 3, 21));
    auto boot = bootstrap_depths(sim, OptimizerKind::kNelderMead, 2);
    EXPECT_LE(boot.depths[0].params.gammas[0], kGammaPeriod / 2);
    EXPECT_GE(boot.depths[1].value, boot.depths[0].value - 1e-9);
}

}  // namespace
}  // namespace itlw
