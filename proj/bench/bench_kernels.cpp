// Serial reference against the OpenMP kernels on synthetic networks.

#include <benchmark/benchmark.h>

#include <random>

#include "causalwb/bn.hpp"
#include "causalwb/cross_validation.hpp"
#include "causalwb/inference.hpp"
#include "causalwb/pc_stable.hpp"
#include "causalwb/score.hpp"
#include "causalwb/search.hpp"

using namespace causalwb;

namespace {

// Layered random network: each node draws up to three parents among earlier nodes.
DiscreteBn make_bn(std::size_t n, std::size_t arity, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("V" + std::to_string(i));
    std::vector<std::pair<NodeIndex, NodeIndex>> arcs;
    for (std::size_t v = 1; v < n; ++v) {
        for (std::size_t k = 0; k < 3; ++k) {
            const auto p = static_cast<NodeIndex>(rng() % v);
            if (std::find(arcs.begin(), arcs.end(), std::make_pair(p, static_cast<NodeIndex>(v))) == arcs.end() &&
                rng() % 2 == 0) {
                arcs.emplace_back(p, static_cast<NodeIndex>(v));
            }
        }
    }
    Dag dag(labels, arcs);
    std::vector<std::vector<std::string>> states(n);
    for (auto& s : states) {
        for (std::size_t k = 0; k < arity; ++k) s.push_back("s" + std::to_string(k));
    }
    std::gamma_distribution<double> gamma(0.7, 1.0);
    std::vector<Cpt> cpts;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(n); ++v) {
        Cpt c;
        c.child = v;
        c.parents = dag.parents(v);
        c.arity = arity;
        std::size_t q = 1;
        for (std::size_t i = 0; i < c.parents.size(); ++i) {
            c.parent_arities.push_back(arity);
            q *= arity;
        }
        for (std::size_t j = 0; j < q; ++j) {
            std::vector<double> row(arity);
            double z = 0.0;
            for (auto& x : row) z += x = gamma(rng) + 1e-3;
            for (auto x : row) c.table.push_back(x / z);
        }
        cpts.push_back(std::move(c));
    }
    return DiscreteBn(dag, states, cpts);
}

Execution mode(const benchmark::State& st) { return st.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

const DiscreteBn& network() {
    static const DiscreteBn bn = make_bn(20, 3, 1);
    return bn;
}

const CategoricalDataset& sample() {
    static const CategoricalDataset d = forward_sample(network(), 5000, 2);
    return d;
}

void BM_ScoreMoves(benchmark::State& st) {
    const SearchState state(sample().cols());
    const auto moves = state.legal_moves(std::nullopt);
    for (auto _ : st) {
        ScoreCache cache(sample());
        benchmark::DoNotOptimize(score_moves(state, moves, cache, mode(st)));
    }
}

void BM_PcSkeleton(benchmark::State& st) {
    PcConfig cfg;
    cfg.execution = mode(st);
    for (auto _ : st) benchmark::DoNotOptimize(pc_skeleton(sample(), cfg));
}

void BM_HillClimb(benchmark::State& st) {
    SearchConfig cfg;
    cfg.execution = mode(st);
    for (auto _ : st) benchmark::DoNotOptimize(hill_climb(sample(), cfg));
}

void BM_Sensitivity(benchmark::State& st) {
    const auto target = static_cast<NodeIndex>(network().size() - 1);
    for (auto _ : st) benchmark::DoNotOptimize(sensitivity(network(), target, 0.05, mode(st)));
}

void BM_CrossValidate(benchmark::State& st) {
    CvConfig cfg;
    cfg.execution = mode(st);
    for (auto _ : st) benchmark::DoNotOptimize(cross_validate(network().dag(), sample(), cfg));
}

}  // namespace

BENCHMARK(BM_ScoreMoves)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PcSkeleton)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HillClimb)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sensitivity)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
