#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "causalwb/bn.hpp"
#include "causalwb/cross_validation.hpp"
#include "causalwb/errors.hpp"
#include "causalwb/inference.hpp"
#include "support.hpp"

using namespace causalwb;

namespace {

std::vector<std::string> binary_states() { return {"s0", "s1"}; }

Cpt make_cpt(NodeIndex child, std::vector<NodeIndex> parents, std::size_t arity, std::vector<std::size_t> pa_arity,
             std::vector<double> table) {
    Cpt c;
    c.child = child;
    c.parents = std::move(parents);
    c.arity = arity;
    c.parent_arities = std::move(pa_arity);
    c.table = std::move(table);
    return c;
}

// A -> B with B a copy of A.
DiscreteBn copy_chain(double prior_a = 0.5) {
    Dag d({"A", "B"}, {{0, 1}});
    return DiscreteBn(d, {binary_states(), binary_states()},
                      {make_cpt(0, {}, 2, {}, {prior_a, 1.0 - prior_a}),
                       make_cpt(1, {0}, 2, {2}, {1.0, 0.0, 0.0, 1.0})});
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

std::set<NodeIndex> oracle_ancestors(const Dag& d, NodeIndex v) {
    std::set<NodeIndex> out;
    std::vector<NodeIndex> stack{v};
    while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        for (auto p : d.parents(x)) {
            if (out.insert(p).second) stack.push_back(p);
        }
    }
    return out;
}

// Reference perturbation written from the operation's description.
std::vector<double> oracle_perturb(std::vector<double> row, double eps) {
    std::size_t hi = 0;
    for (std::size_t i = 1; i < row.size(); ++i) {
        if (row[i] > row[hi]) hi = i;
    }
    std::size_t lo = hi == 0 ? 1 : 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i != hi && row[i] < row[lo]) lo = i;
    }
    const double m = std::min(eps, row[hi]);
    row[hi] -= m;
    row[lo] += m;
    const double z = std::accumulate(row.begin(), row.end(), 0.0);
    for (auto& p : row) p /= z;
    return row;
}

std::vector<double> oracle_sensitivity(const DiscreteBn& bn, NodeIndex target, double eps) {
    std::vector<double> out(bn.size(), 0.0);
    const auto base = testsupport::brute_marginal(bn, target, {});
    for (auto v : oracle_ancestors(bn.dag(), target)) {
        const auto& c = bn.cpt(v);
        for (std::size_t j = 0; j < c.configs(); ++j) {
            Cpt changed = c;
            const auto row = oracle_perturb({c.row(j).begin(), c.row(j).end()}, eps);
            std::copy(row.begin(), row.end(), changed.row(j).begin());
            const auto shifted = testsupport::brute_marginal(bn.with_cpt(changed), target, {});
            out[static_cast<std::size_t>(v)] = std::max(out[static_cast<std::size_t>(v)], l1(base, shifted));
        }
    }
    return out;
}

double weighted(const std::vector<double>& d, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * w[i];
    return s;
}

}  // namespace

TEST(FitCpts, Examples) {
    const auto d = testsupport::make_dataset({{"T", {1, 1, 0, 0}}});
    const auto mle = fit_cpts(Dag({"T"}, {}), d, 0.0);
    EXPECT_EQ(mle.cpt(0).table, (std::vector<double>{0.5, 0.5}));

    const auto skew = testsupport::make_dataset({{"T", {0, 0, 0, 1}}});
    const auto smooth = fit_cpts(Dag({"T"}, {}), skew, 1.0);
    EXPECT_NEAR(smooth.cpt(0).table[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(smooth.cpt(0).table[1], 1.0 / 3.0, 1e-15);
}

TEST(FitCpts, UnseenConfiguration) {
    const auto d = testsupport::make_dataset({{"P", {0, 0, 0, 0}}, {"C", {0, 1, 2, 3}}}, 4);
    Dag dag({"P", "C"}, {{0, 1}});
    const auto bn = fit_cpts(dag, d, 1.0);
    for (std::size_t j = 1; j < 4; ++j) {
        for (double p : bn.cpt(1).row(j)) EXPECT_EQ(p, 0.25);
    }
    try {
        fit_cpts(dag, d, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnseenConfigWithZeroSmoothing);
    }
}

TEST(FitCpts, RowsAreDistributionsAndMatchCounts) {
    testsupport::Rng rng(1);
    for (int t = 0; t < 30; ++t) {
        const auto dag = testsupport::random_dag(4, 0.5, rng);
        const std::vector<std::size_t> arity{2, 3, 4, 2};
        const auto data = testsupport::random_data(arity, 80, rng);
        const double alpha = 0.5 * static_cast<double>(testsupport::pick(rng, 4));
        const auto bn = fit_cpts(dag, data, alpha == 0.0 ? 1.0 : alpha);
        const double a = alpha == 0.0 ? 1.0 : alpha;
        for (NodeIndex v = 0; v < 4; ++v) {
            const auto& c = bn.cpt(v);
            EXPECT_EQ(c.parents, dag.parents(v));
            std::vector<double> n(c.table.size(), 0.0);
            for (std::size_t r = 0; r < data.rows(); ++r) {
                std::size_t j = 0;
                for (std::size_t k = 0; k < c.parents.size(); ++k) {
                    j = j * c.parent_arities[k] + static_cast<std::size_t>(data.value(r, static_cast<std::size_t>(c.parents[k])));
                }
                n[j * c.arity + static_cast<std::size_t>(data.value(r, static_cast<std::size_t>(v)))] += 1.0;
            }
            for (std::size_t j = 0; j < c.configs(); ++j) {
                double nj = 0.0;
                for (std::size_t k = 0; k < c.arity; ++k) nj += n[j * c.arity + k];
                double sum = 0.0;
                for (std::size_t k = 0; k < c.arity; ++k) {
                    const double expect = (n[j * c.arity + k] + a) / (nj + a * static_cast<double>(c.arity));
                    EXPECT_NEAR(c.row(j)[k], expect, 1e-12);
                    sum += c.row(j)[k];
                }
                EXPECT_NEAR(sum, 1.0, 1e-9);
            }
        }
    }
}

TEST(Marginal, Examples) {
    const auto bn = copy_chain(0.3);
    EXPECT_EQ(marginal(bn, 1, {{0, 1}}), (std::vector<double>{0.0, 1.0}));
    const auto prior = marginal(bn, 0);
    EXPECT_NEAR(prior[0], 0.3, 1e-15);
    EXPECT_NEAR(prior[1], 0.7, 1e-15);
    try {
        // A is always s0 and B copies it, so B = s1 has probability zero.
        marginal(copy_chain(1.0), 0, {{1, 1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroProbabilityEvidence);
    }
}

TEST(Marginal, MatchesBruteForceOnRandomNetworks) {
    testsupport::Rng rng(2);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + testsupport::pick(rng, 5);
        const auto bn = testsupport::random_bn(n, 4, rng);
        const auto target = static_cast<NodeIndex>(testsupport::pick(rng, n));
        Evidence ev;
        for (NodeIndex v = 0; v < static_cast<NodeIndex>(n); ++v) {
            if (v != target && testsupport::uniform(rng) < 0.4) ev[v] = static_cast<int>(testsupport::pick(rng, bn.arity(v)));
        }
        const auto got = marginal(bn, target, ev);
        const auto want = testsupport::brute_marginal(bn, target, ev);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-10);

        for (NodeIndex v = 0; v < static_cast<NodeIndex>(n); ++v) {
            std::vector<int> a(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<int>(testsupport::pick(rng, bn.arity(static_cast<NodeIndex>(i))));
            Evidence rest;
            for (NodeIndex u = 0; u < static_cast<NodeIndex>(n); ++u) {
                if (u != v) rest[u] = a[static_cast<std::size_t>(u)];
            }
            const auto post = posterior_given_rest(bn, v, a);
            const auto brute = testsupport::brute_marginal(bn, v, rest);
            for (std::size_t k = 0; k < post.size(); ++k) EXPECT_NEAR(post[k], brute[k], 1e-10);
        }
    }
}

TEST(DoIntervene, MatchesTruncatedFactorisation) {
    testsupport::Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + testsupport::pick(rng, 4);
        const auto bn = testsupport::random_bn(n, 4, rng);
        const auto node = static_cast<NodeIndex>(testsupport::pick(rng, n));
        const int state = static_cast<int>(testsupport::pick(rng, bn.arity(node)));
        const auto mutilated = do_intervene(bn, node, state);
        EXPECT_TRUE(mutilated.dag().parents(node).empty());
        for (NodeIndex v = 0; v < static_cast<NodeIndex>(n); ++v) {
            if (v != node) EXPECT_EQ(mutilated.cpt(v).table, bn.cpt(v).table);
        }
        for (NodeIndex target = 0; target < static_cast<NodeIndex>(n); ++target) {
            const auto got = marginal(mutilated, target);
            const auto want = testsupport::brute_do(bn, node, state, target);
            for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-10);
        }

        auto target = static_cast<NodeIndex>(testsupport::pick(rng, n));
        if (target == node) target = (target + 1) % static_cast<NodeIndex>(n);
        const auto eff = intervention_effect(bn, node, target);
        const auto low = testsupport::brute_do(bn, node, 0, target);
        const auto high = testsupport::brute_do(bn, node, static_cast<int>(bn.arity(node)) - 1, target);
        const auto w = EffectWeights::for_states(bn.arity(target)).values();
        EXPECT_NEAR(eff.effect, std::abs(weighted(low, w) - weighted(high, w)), 1e-10);
        if (!bn.dag().descendants(node)[static_cast<std::size_t>(target)]) EXPECT_EQ(eff.effect, 0.0);
    }
}

TEST(DoIntervene, RootsSeeEqualsDo) {
    testsupport::Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        const auto bn = testsupport::random_bn(5, 3, rng);
        for (NodeIndex root = 0; root < 5; ++root) {
            if (!bn.dag().parents(root).empty()) continue;
            for (int s = 0; s < static_cast<int>(bn.arity(root)); ++s) {
                const auto mutilated = do_intervene(bn, root, s);
                for (NodeIndex v = 0; v < 5; ++v) {
                    if (v == root) continue;
                    const auto a = marginal(mutilated, v);
                    const auto b = marginal(bn, v, {{root, s}});
                    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
                }
            }
        }
    }
}

TEST(DoIntervene, ColliderParentsUnchanged) {
    testsupport::Rng rng(5);
    const auto bn = testsupport::random_bn_with_arities(Dag({"A", "B", "C"}, {{0, 2}, {1, 2}}), {2, 3, 2}, rng);
    const auto cut = do_intervene(bn, 2, 1);
    for (NodeIndex v : {0, 1}) {
        const auto a = marginal(cut, v);
        const auto b = marginal(bn, v);
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-15);
    }
    EXPECT_EQ(marginal(cut, 2), (std::vector<double>{0.0, 1.0}));
}

TEST(EffectScore, WorkedExample) {
    const std::vector<double> low{0.5, 0.25, 0.15, 0.1}, high{0.6, 0.3, 0.1, 0.0};
    const auto w = EffectWeights::for_states(4);
    EXPECT_EQ(w.values(), (std::vector<double>{0.0, 0.33, 0.66, 1.0}));
    EXPECT_NEAR(w.score(low), 0.2815, 1e-12);
    EXPECT_NEAR(w.score(high), 0.165, 1e-12);
    EXPECT_NEAR(effect_score(low, high, w), 0.1165, 1e-12);
    EXPECT_EQ(effect_score(low, low, w), 0.0);
    EXPECT_EQ(effect_score(std::vector<double>{1, 0, 0, 0}, std::vector<double>{0, 0, 0, 1}, w), 1.0);
}

TEST(EffectScore, SymmetricAndBounded) {
    testsupport::Rng rng(6);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t s = 2 + testsupport::pick(rng, 5);
        const auto a = testsupport::random_distribution(s, rng);
        const auto b = testsupport::random_distribution(s, rng);
        const auto w = EffectWeights::for_states(s);
        const double e = effect_score(a, b, w);
        EXPECT_EQ(e, effect_score(b, a, w));
        EXPECT_GE(e, 0.0);
        EXPECT_LE(e, 1.0);
    }
}

TEST(EffectWeights, Validation) {
    EXPECT_EQ(EffectWeights::for_states(3).values(), (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_THROW(EffectWeights({0.0, 0.6, 0.5, 1.0}), Error);
    EXPECT_THROW(EffectWeights({0.1, 1.0}), Error);
    EXPECT_THROW(EffectWeights({0.0, 0.9}), Error);
    EXPECT_THROW(EffectWeights::for_states(1), Error);
}

TEST(InterventionEffect, Examples) {
    EXPECT_EQ(intervention_effect(copy_chain(), 0, 1).effect, 1.0);
    EXPECT_EQ(intervention_effect(copy_chain(), 1, 0).effect, 0.0);
}

TEST(Sensitivity, Examples) {
    testsupport::Rng rng(7);
    const auto bn = testsupport::random_bn_with_arities(Dag({"A", "B", "C"}, {{1, 2}}), {3, 2, 2}, rng);
    EXPECT_EQ(sensitivity(bn, 0, 0.1), (std::vector<double>{0.0, 0.0, 0.0}));
    const auto s = sensitivity(bn, 2, 0.1);
    EXPECT_EQ(s[0], 0.0);
    EXPECT_GT(s[1], 0.0);
    EXPECT_EQ(s[2], 0.0);

    // Copy chain with prior (0.5, 0.5): moving 0.1 of the root's mass shifts B by 0.2.
    const auto c = sensitivity(copy_chain(), 1, 0.1);
    EXPECT_NEAR(c[0], 0.2, 1e-12);
    EXPECT_EQ(c[1], 0.0);
    EXPECT_THROW(sensitivity(bn, 2, 0.5), Error);
    EXPECT_THROW(sensitivity(bn, 2, 0.0), Error);
}

TEST(Sensitivity, MatchesOracleAndExecutionModes) {
    testsupport::Rng rng(8);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + testsupport::pick(rng, 4);
        const auto bn = testsupport::random_bn(n, 3, rng);
        const auto target = static_cast<NodeIndex>(testsupport::pick(rng, n));
        const double eps = 0.01 + 0.4 * testsupport::uniform(rng);
        const auto serial = sensitivity(bn, target, eps, Execution::Serial);
        const auto parallel = sensitivity(bn, target, eps, Execution::Parallel);
        EXPECT_EQ(serial, parallel);
        const auto oracle = oracle_sensitivity(bn, target, eps);
        for (std::size_t v = 0; v < n; ++v) EXPECT_NEAR(serial[v], oracle[v], 1e-10);
    }
}

TEST(PerturbRow, StaysADistribution) {
    testsupport::Rng rng(9);
    for (int t = 0; t < 1000; ++t) {
        auto row = testsupport::random_distribution(2 + testsupport::pick(rng, 4), rng);
        const double eps = 0.49 * testsupport::uniform(rng) + 1e-3;
        const auto want = oracle_perturb(row, eps);
        perturb_row(row, eps);
        EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
        for (std::size_t k = 0; k < row.size(); ++k) {
            EXPECT_GE(row[k], 0.0);
            EXPECT_NEAR(row[k], want[k], 1e-15);
        }
    }
    std::vector<double> flat{0.25, 0.25, 0.25, 0.25};
    perturb_row(flat, 0.1);
    EXPECT_NEAR(flat[0], 0.15, 1e-15);
    EXPECT_NEAR(flat[1], 0.35, 1e-15);
}

TEST(KFold, PartitionsRows) {
    for (std::size_t rows : {10u, 17u, 101u}) {
        for (std::size_t k : {2u, 3u, 10u}) {
            const auto folds = kfold_partition(rows, k, 42);
            ASSERT_EQ(folds.size(), k);
            std::vector<int> seen(rows, 0);
            std::size_t lo = rows, hi = 0;
            for (const auto& f : folds) {
                lo = std::min(lo, f.size());
                hi = std::max(hi, f.size());
                for (auto r : f) ++seen[r];
            }
            EXPECT_LE(hi - lo, 1u);
            for (int s : seen) EXPECT_EQ(s, 1);
            EXPECT_EQ(folds, kfold_partition(rows, k, 42));
        }
    }
    EXPECT_THROW(kfold_partition(10, 1, 0), Error);
    EXPECT_THROW(kfold_partition(3, 5, 0), Error);
}

TEST(CrossValidate, MajorityBaseline) {
    testsupport::Rng rng(10);
    std::vector<int> x, y;
    for (int i = 0; i < 2000; ++i) {
        x.push_back(testsupport::uniform(rng) < 0.7 ? 0 : 1);
        y.push_back(static_cast<int>(testsupport::pick(rng, 2)));
    }
    const auto d = testsupport::make_dataset({{"X", x}, {"Y", y}});
    const auto r = cross_validate(Dag({"X", "Y"}, {}), d);
    EXPECT_NEAR(r.node_accuracy[0], 0.7, 0.05);
    EXPECT_EQ(r.nodes, (std::vector<std::string>{"X", "Y"}));
}

TEST(CrossValidate, CopyRelation) {
    testsupport::Rng rng(11);
    std::vector<int> x;
    for (int i = 0; i < 2000; ++i) x.push_back(static_cast<int>(testsupport::pick(rng, 3)));
    const auto d = testsupport::make_dataset({{"X", x}, {"Y", x}}, 3);
    const auto r = cross_validate(Dag({"X", "Y"}, {{0, 1}}), d);
    EXPECT_GE(r.node_accuracy[0], 0.99);
    EXPECT_GE(r.node_accuracy[1], 0.99);
    EXPECT_GE(r.mean, 0.99);
    EXPECT_LE(r.min, r.mean);
    EXPECT_GE(r.max, r.mean);
}

TEST(CrossValidate, SerialEqualsParallel) {
    testsupport::Rng rng(12);
    const auto dag = testsupport::random_dag(5, 0.4, rng);
    const auto data = forward_sample(testsupport::strong_bn(dag, {2, 3, 2, 3, 2}, 0.8, rng), 500, 3);
    CvConfig s;
    s.execution = Execution::Serial;
    CvConfig p;
    p.execution = Execution::Parallel;
    const auto a = cross_validate(dag, data, s);
    const auto b = cross_validate(dag, data, p);
    EXPECT_EQ(a.node_accuracy, b.node_accuracy);
    EXPECT_EQ(a.mean, b.mean);
}

TEST(ForwardSample, DeterministicAndConsistent) {
    testsupport::Rng rng(13);
    const auto bn = testsupport::random_bn(4, 3, rng);
    const auto a = forward_sample(bn, 20000, 5);
    const auto b = forward_sample(bn, 20000, 5);
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t r = 0; r < a.rows(); ++r) ASSERT_EQ(a.value(r, c), b.value(r, c));
    }
    for (NodeIndex v = 0; v < 4; ++v) {
        const auto m = marginal(bn, v);
        std::vector<double> freq(bn.arity(v), 0.0);
        for (std::size_t r = 0; r < a.rows(); ++r) freq[static_cast<std::size_t>(a.value(r, static_cast<std::size_t>(v)))] += 1.0 / 20000.0;
        for (std::size_t k = 0; k < m.size(); ++k) EXPECT_NEAR(freq[k], m[k], 0.02);
    }
}
