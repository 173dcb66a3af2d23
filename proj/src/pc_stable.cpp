#include "causalwb/pc_stable.hpp"

#include <algorithm>

#include "causalwb/ci_test.hpp"
#include "causalwb/errors.hpp"

namespace causalwb {

void SepsetMap::record(NodeIndex a, NodeIndex b, std::vector<NodeIndex> set) {
    std::sort(set.begin(), set.end());
    sets_[{std::min(a, b), std::max(a, b)}] = std::move(set);
}

bool SepsetMap::contains(NodeIndex a, NodeIndex b) const {
    return sets_.contains({std::min(a, b), std::max(a, b)});
}

std::optional<std::vector<NodeIndex>> SepsetMap::get(NodeIndex a, NodeIndex b) const {
    auto it = sets_.find({std::min(a, b), std::max(a, b)});
    if (it == sets_.end()) {
        return std::nullopt;
    }
    return it->second;
}

namespace {

struct PairOutcome {
    bool removed = false;
    std::vector<NodeIndex> sepset;
    std::size_t tests = 0;
};

// Advance `idx` to the next size-k combination of {0..n-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const auto k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

bool independent(const CategoricalDataset& d, const std::vector<std::string>& names, NodeIndex a, NodeIndex b,
                 const std::vector<std::size_t>& z, double alpha) {
    // Canonical (x, y) by label keeps the statistic identical under column permutations.
    auto x = static_cast<std::size_t>(a);
    auto y = static_cast<std::size_t>(b);
    if (names[y] < names[x]) {
        std::swap(x, y);
    }
    try {
        return g2_test(d, x, y, z).p_value > alpha;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InsufficientData) {
            return false;
        }
        throw;
    }
}

PairOutcome test_pair(const CategoricalDataset& d, const std::vector<std::string>& names,
                      const std::vector<std::vector<NodeIndex>>& frozen, NodeIndex a, NodeIndex b,
                      std::size_t level, double alpha) {
    PairOutcome out;
    for (auto [from, other] : {std::pair{a, b}, std::pair{b, a}}) {
        std::vector<NodeIndex> pool;
        for (auto v : frozen[static_cast<std::size_t>(from)]) {
            if (v != other) {
                pool.push_back(v);
            }
        }
        if (pool.size() < level) {
            continue;
        }
        std::vector<std::size_t> idx(level);
        for (std::size_t i = 0; i < level; ++i) {
            idx[i] = i;
        }
        std::vector<std::size_t> z(level);
        do {
            for (std::size_t i = 0; i < level; ++i) {
                z[i] = static_cast<std::size_t>(pool[idx[i]]);
            }
            ++out.tests;
            if (independent(d, names, a, b, z, alpha)) {
                out.removed = true;
                out.sepset.assign(z.begin(), z.end());
                return out;
            }
        } while (level > 0 && next_combination(idx, pool.size()));
    }
    return out;
}

}  // namespace

PcResult pc_skeleton(const CategoricalDataset& d, const PcConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    }
    if (!d.complete()) {
        throw Error(ErrorCode::InvalidArgument, "PC-Stable requires complete data");
    }
    const auto names = d.names();
    const auto n = static_cast<NodeIndex>(d.cols());
    PcResult res{MixedGraph(names), {}, 0};
    for (NodeIndex a = 0; a < n; ++a) {
        for (NodeIndex b = a + 1; b < n; ++b) {
            res.pdag.add_undirected(a, b);
        }
    }

    for (int level = 0; level <= cfg.max_conditioning; ++level) {
        const auto l = static_cast<std::size_t>(level);
        std::vector<std::vector<NodeIndex>> frozen(d.cols());
        for (NodeIndex v = 0; v < n; ++v) {
            frozen[static_cast<std::size_t>(v)] = res.pdag.neighbors(v);
        }
        std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
        for (const auto& e : res.pdag.edges()) {
            if (frozen[static_cast<std::size_t>(e.a)].size() > l || frozen[static_cast<std::size_t>(e.b)].size() > l) {
                pairs.emplace_back(e.a, e.b);
            }
        }
        if (pairs.empty()) {
            break;
        }

        std::vector<PairOutcome> outcomes(pairs.size());
        const auto count = static_cast<std::ptrdiff_t>(pairs.size());
        if (cfg.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t i = 0; i < count; ++i) {
                const auto [a, b] = pairs[static_cast<std::size_t>(i)];
                outcomes[static_cast<std::size_t>(i)] = test_pair(d, names, frozen, a, b, l, cfg.alpha);
            }
        } else {
            for (std::ptrdiff_t i = 0; i < count; ++i) {
                const auto [a, b] = pairs[static_cast<std::size_t>(i)];
                outcomes[static_cast<std::size_t>(i)] = test_pair(d, names, frozen, a, b, l, cfg.alpha);
            }
        }

        for (std::size_t i = 0; i < pairs.size(); ++i) {
            res.tests_run += outcomes[i].tests;
            if (outcomes[i].removed) {
                res.pdag.remove_edge(pairs[i].first, pairs[i].second);
                std::vector<NodeIndex> set(outcomes[i].sepset.begin(), outcomes[i].sepset.end());
                res.sepsets.record(pairs[i].first, pairs[i].second, std::move(set));
            }
        }
    }
    return res;
}

void orient_v_structures(MixedGraph& g, const SepsetMap& sepsets) {
    const auto n = static_cast<NodeIndex>(g.size());
    // Collect against the unoriented skeleton, then write in lexicographic order.
    std::vector<VStructure> triples;
    for (NodeIndex x = 0; x < n; ++x) {
        for (NodeIndex z = 0; z < n; ++z) {
            if (z == x || !g.adjacent(x, z)) {
                continue;
            }
            for (NodeIndex y = x + 1; y < n; ++y) {
                if (y == z || !g.adjacent(z, y) || g.adjacent(x, y)) {
                    continue;
                }
                const auto sep = sepsets.get(x, y);
                if (sep && std::find(sep->begin(), sep->end(), z) != sep->end()) {
                    continue;
                }
                triples.push_back({x, z, y});
            }
        }
    }
    for (const auto& t : triples) {
        for (auto p : {t.x, t.y}) {
            if (g.has_undirected(p, t.z)) {
                g.set_edge(p, t.z, Mark::Tail, Mark::Arrow);
            }
        }
    }
}

PcResult pc_stable(const CategoricalDataset& d, const PcConfig& cfg) {
    auto res = pc_skeleton(d, cfg);
    orient_v_structures(res.pdag, res.sepsets);
    return res;
}

}  // namespace causalwb
