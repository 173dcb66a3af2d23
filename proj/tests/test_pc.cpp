#include <gtest/gtest.h>

#include <cmath>

#include "causalwb/bn.hpp"
#include "causalwb/ci_test.hpp"
#include "causalwb/errors.hpp"
#include "causalwb/pc_stable.hpp"
#include "support.hpp"

using namespace causalwb;

namespace {

// Binary x, y rows reproducing a 2x2 count table.
CategoricalDataset from_counts(const std::vector<std::vector<int>>& counts) {
    std::vector<int> x, y;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; ++k) {
                x.push_back(i);
                y.push_back(j);
            }
        }
    }
    return testsupport::make_dataset({{"X", x}, {"Y", y}});
}

CategoricalDataset sample(const Dag& dag, std::vector<std::size_t> arity, double strength, std::size_t rows,
                          std::uint64_t seed) {
    testsupport::Rng rng(seed);
    const auto bn = testsupport::strong_bn(dag, arity, strength, rng);
    return forward_sample(bn, rows, seed * 7919 + 1);
}

}  // namespace

TEST(G2, ExactIndependence) {
    const auto r = g2_test(from_counts({{25, 25}, {25, 25}}), 0, 1, {});
    EXPECT_NEAR(r.statistic, 0.0, 1e-12);
    EXPECT_EQ(r.dof, 1u);
    EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

TEST(G2, PerfectDependence) {
    const auto r = g2_test(from_counts({{50, 0}, {0, 50}}), 0, 1, {});
    EXPECT_NEAR(r.statistic, 200.0 * std::log(2.0), 1e-9);
    EXPECT_NEAR(r.statistic, 138.629, 1e-3);
    EXPECT_EQ(r.dof, 1u);
    EXPECT_LT(r.p_value, 1e-20);
}

TEST(G2, MatchesClosedFormOnRandomTables) {
    testsupport::Rng rng(8);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::vector<int>> c{{1 + static_cast<int>(testsupport::pick(rng, 40)), 1 + static_cast<int>(testsupport::pick(rng, 40))},
                                        {1 + static_cast<int>(testsupport::pick(rng, 40)), 1 + static_cast<int>(testsupport::pick(rng, 40))}};
        double n = 0, g2 = 0;
        for (auto& r : c) for (int v : r) n += v;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double row = c[static_cast<std::size_t>(i)][0] + c[static_cast<std::size_t>(i)][1];
                const double col = c[0][static_cast<std::size_t>(j)] + c[1][static_cast<std::size_t>(j)];
                const double o = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                g2 += 2.0 * o * std::log(o / (row * col / n));
            }
        }
        const auto r = g2_test(from_counts(c), 0, 1, {});
        EXPECT_NEAR(r.statistic, g2, 1e-9);
        // chi-square with one degree of freedom: P(X > s) = erfc(sqrt(s / 2)).
        EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(g2 / 2.0)), 1e-12);
    }
}

TEST(G2, ConditioningExplainsAway) {
    std::vector<int> z;
    for (int i = 0; i < 200; ++i) z.push_back(i % 2);
    const auto d = testsupport::make_dataset({{"X", z}, {"Y", z}, {"Z", z}});
    const std::size_t zs[] = {2};
    EXPECT_LT(g2_test(d, 0, 1, {}).p_value, 1e-10);
    const auto given = g2_test(d, 0, 1, zs);
    EXPECT_NEAR(given.statistic, 0.0, 1e-12);
    EXPECT_NEAR(given.p_value, 1.0, 1e-12);
}

TEST(G2, EmptyDataIsInsufficient) {
    const auto d = testsupport::make_dataset({{"X", {}}, {"Y", {}}});
    EXPECT_THROW(g2_test(d, 0, 1, {}), Error);
}

TEST(PcStable, StrongPairAndIndependentColumn) {
    Dag dag({"A", "B", "C"}, {{0, 1}});
    const auto d = sample(dag, {2, 2, 2}, 0.9, 2000, 1);
    const auto res = pc_stable(d);
    EXPECT_EQ(skeleton(res.pdag), skeleton(dag.graph()));
}

TEST(PcStable, Collider) {
    Dag dag({"A", "B", "C"}, {{0, 2}, {1, 2}});
    const auto d = sample(dag, {2, 2, 3}, 0.9, 2000, 2);
    const auto res = pc_stable(d);
    EXPECT_TRUE(res.pdag.has_directed(0, 2));
    EXPECT_TRUE(res.pdag.has_directed(1, 2));
    EXPECT_FALSE(res.pdag.adjacent(0, 1));
}

TEST(PcStable, IndependentColumnsGiveEmptyGraph) {
    testsupport::Rng rng(3);
    const auto d = testsupport::random_data({3, 3, 3, 3}, 2000, rng);
    EXPECT_EQ(pc_stable(d).pdag.edge_count(), 0u);
}

TEST(PcStable, SepsetsMatchRemovedEdges) {
    testsupport::Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const auto dag = testsupport::random_dag(5, 0.4, rng);
        const auto d = sample(dag, {2, 3, 2, 3, 2}, 0.8, 500, 100 + static_cast<std::uint64_t>(t));
        const auto res = pc_stable(d);
        for (const auto& [a, b] : testsupport::all_pairs(5)) {
            EXPECT_NE(res.pdag.adjacent(a, b), res.sepsets.contains(a, b));
        }
    }
}

TEST(PcStable, AlphaExtremes) {
    // Independence is accepted when p > alpha: a large alpha rejects almost
    // every independence and keeps edges; a tiny alpha accepts them and deletes.
    testsupport::Rng rng(5);
    const auto d = testsupport::random_data({2, 2, 2, 2}, 300, rng);
    PcConfig keep;
    keep.alpha = 1.0 - 1e-12;
    EXPECT_EQ(pc_skeleton(d, keep).pdag.edge_count(), 6u);
    PcConfig drop;
    drop.alpha = 1e-12;
    EXPECT_EQ(pc_skeleton(d, drop).pdag.edge_count(), 0u);
}

TEST(PcStable, ColumnPermutationInvariance) {
    testsupport::Rng rng(6);
    for (int t = 0; t < 10; ++t) {
        const auto dag = testsupport::random_dag(6, 0.4, rng);
        const auto d = sample(dag, {2, 3, 2, 3, 2, 3}, 0.75, 400, 200 + static_cast<std::uint64_t>(t));
        const auto base = skeleton(pc_stable(d).pdag);
        for (int p = 0; p < 10; ++p) {
            auto names = d.names();
            std::shuffle(names.begin(), names.end(), rng);
            const auto res = pc_stable(d.select_columns(names));
            EXPECT_EQ(reorder_nodes(skeleton(res.pdag), base.labels()), base);
        }
    }
}

TEST(PcStable, RecoversFourNodeStructures) {
    testsupport::Rng rng(7);
    int ok = 0;
    for (int seed = 0; seed < 20; ++seed) {
        const auto dag = testsupport::random_dag(4, 0.5, rng);
        std::vector<std::size_t> arity(4);
        for (auto& r : arity) r = 2 + testsupport::pick(rng, 2);
        const auto d = sample(dag, arity, 0.85, 5000, 300 + static_cast<std::uint64_t>(seed));
        const auto res = pc_stable(d);
        ok += testsupport::equivalence_key(res.pdag) == testsupport::equivalence_key(dag.graph());
    }
    EXPECT_GE(ok, 18);
}

TEST(PcStable, SerialMatchesParallel) {
    testsupport::Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        const auto dag = testsupport::random_dag(7, 0.35, rng);
        const auto d = sample(dag, {2, 3, 2, 3, 2, 3, 2}, 0.75, 800, 400 + static_cast<std::uint64_t>(t));
        PcConfig serial;
        serial.execution = Execution::Serial;
        PcConfig parallel;
        parallel.execution = Execution::Parallel;
        const auto a = pc_stable(d, serial);
        const auto b = pc_stable(d, parallel);
        EXPECT_EQ(a.pdag, b.pdag);
        EXPECT_EQ(a.tests_run, b.tests_run);
        for (const auto& [x, y] : testsupport::all_pairs(7)) {
            EXPECT_EQ(a.sepsets.contains(x, y), b.sepsets.contains(x, y));
            if (a.sepsets.contains(x, y)) EXPECT_EQ(a.sepsets.get(x, y), b.sepsets.get(x, y));
        }
    }
}
