// Generators and brute-force oracles shared by the test suites.
#ifndef CAUSALWB_TESTS_SUPPORT_HPP
#define CAUSALWB_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "causalwb/bn.hpp"
#include "causalwb/dataset.hpp"
#include "causalwb/graph.hpp"

namespace testsupport {

using causalwb::CategoricalColumn;
using causalwb::CategoricalDataset;
using causalwb::Cpt;
using causalwb::Dag;
using causalwb::DiscreteBn;
using causalwb::Mark;
using causalwb::MixedGraph;
using causalwb::NodeIndex;
using Rng = std::mt19937_64;

inline std::vector<std::string> labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(n <= 26 ? std::string(1, static_cast<char>('A' + i)) : "N" + std::to_string(i));
    }
    return out;
}

inline double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

/// Arcs follow a random topological order; each pair is joined with probability p.
inline Dag random_dag(std::size_t n, double p, Rng& rng) {
    std::vector<NodeIndex> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    MixedGraph g(labels(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (uniform(rng) < p) {
                g.add_directed(order[i], order[j]);
            }
        }
    }
    return Dag(std::move(g));
}

/// Pair kinds used by the mixed-graph generator and the exhaustive enumerations.
enum class PairKind { None, Forward, Backward, Undirected, Bidirected, CircleForward, CircleBackward, CircleCircle };
inline constexpr int kPairKinds = 8;

inline void set_pair(MixedGraph& g, NodeIndex a, NodeIndex b, PairKind k) {
    switch (k) {
        case PairKind::None: break;
        case PairKind::Forward: g.add_edge(a, b, Mark::Tail, Mark::Arrow); break;
        case PairKind::Backward: g.add_edge(a, b, Mark::Arrow, Mark::Tail); break;
        case PairKind::Undirected: g.add_edge(a, b, Mark::Tail, Mark::Tail); break;
        case PairKind::Bidirected: g.add_edge(a, b, Mark::Arrow, Mark::Arrow); break;
        case PairKind::CircleForward: g.add_edge(a, b, Mark::Circle, Mark::Arrow); break;
        case PairKind::CircleBackward: g.add_edge(a, b, Mark::Arrow, Mark::Circle); break;
        case PairKind::CircleCircle: g.add_edge(a, b, Mark::Circle, Mark::Circle); break;
    }
}

/// Any edge kind on any pair; may contain directed cycles.
inline MixedGraph random_mixed(std::size_t n, double p_edge, Rng& rng, bool circles = true) {
    MixedGraph g(labels(n));
    const int kinds = circles ? kPairKinds : 5;
    for (NodeIndex a = 0; a < static_cast<NodeIndex>(n); ++a) {
        for (NodeIndex b = a + 1; b < static_cast<NodeIndex>(n); ++b) {
            if (uniform(rng) < p_edge) {
                set_pair(g, a, b, static_cast<PairKind>(1 + pick(rng, static_cast<std::size_t>(kinds - 1))));
            }
        }
    }
    return g;
}

inline std::vector<std::pair<NodeIndex, NodeIndex>> all_pairs(std::size_t n) {
    std::vector<std::pair<NodeIndex, NodeIndex>> out;
    for (NodeIndex a = 0; a < static_cast<NodeIndex>(n); ++a) {
        for (NodeIndex b = a + 1; b < static_cast<NodeIndex>(n); ++b) {
            out.emplace_back(a, b);
        }
    }
    return out;
}

/// Every labelled DAG on n nodes (n <= 5).
inline std::vector<Dag> all_dags(std::size_t n) {
    const auto pairs = all_pairs(n);
    std::size_t total = 1;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        total *= 3;
    }
    std::vector<Dag> out;
    for (std::size_t code = 0; code < total; ++code) {
        MixedGraph g(labels(n));
        std::size_t c = code;
        for (const auto& [a, b] : pairs) {
            const auto k = c % 3;
            c /= 3;
            if (k == 1) g.add_directed(a, b);
            if (k == 2) g.add_directed(b, a);
        }
        if (causalwb::is_acyclic(g)) {
            out.emplace_back(std::move(g));
        }
    }
    return out;
}

/// Skeleton plus colliders, computed independently of the library.
struct EquivalenceKey {
    std::vector<std::pair<NodeIndex, NodeIndex>> skeleton;
    std::vector<std::tuple<NodeIndex, NodeIndex, NodeIndex>> colliders;
    friend auto operator<=>(const EquivalenceKey&, const EquivalenceKey&) = default;
};

inline EquivalenceKey equivalence_key(const MixedGraph& g) {
    EquivalenceKey k;
    const auto n = static_cast<NodeIndex>(g.size());
    for (NodeIndex a = 0; a < n; ++a) {
        for (NodeIndex b = a + 1; b < n; ++b) {
            if (g.adjacent(a, b)) k.skeleton.emplace_back(a, b);
        }
    }
    for (NodeIndex z = 0; z < n; ++z) {
        for (NodeIndex x = 0; x < n; ++x) {
            for (NodeIndex y = x + 1; y < n; ++y) {
                if (x != z && y != z && g.has_directed(x, z) && g.has_directed(y, z) && !g.adjacent(x, y)) {
                    k.colliders.emplace_back(x, z, y);
                }
            }
        }
    }
    return k;
}

inline std::vector<double> random_distribution(std::size_t k, Rng& rng) {
    std::vector<double> p(k);
    double z = 0.0;
    for (auto& x : p) {
        x = uniform(rng) + 0.05;
        z += x;
    }
    for (auto& x : p) x /= z;
    return p;
}

inline DiscreteBn random_bn_with_arities(const Dag& dag, const std::vector<std::size_t>& arity, Rng& rng) {
    std::vector<std::vector<std::string>> states;
    for (auto r : arity) {
        std::vector<std::string> s;
        for (std::size_t k = 0; k < r; ++k) s.push_back("s" + std::to_string(k));
        states.push_back(s);
    }
    std::vector<Cpt> cpts;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(dag.size()); ++v) {
        Cpt c;
        c.child = v;
        c.parents = dag.parents(v);
        c.arity = arity[static_cast<std::size_t>(v)];
        std::size_t q = 1;
        for (auto p : c.parents) {
            c.parent_arities.push_back(arity[static_cast<std::size_t>(p)]);
            q *= arity[static_cast<std::size_t>(p)];
        }
        for (std::size_t j = 0; j < q; ++j) {
            const auto row = random_distribution(c.arity, rng);
            c.table.insert(c.table.end(), row.begin(), row.end());
        }
        cpts.push_back(std::move(c));
    }
    return DiscreteBn(dag, std::move(states), std::move(cpts));
}

inline DiscreteBn random_bn(std::size_t n, std::size_t max_states, Rng& rng) {
    const auto dag = random_dag(n, 0.5, rng);
    std::vector<std::size_t> arity(n);
    for (auto& r : arity) r = 2 + pick(rng, max_states - 1);
    return random_bn_with_arities(dag, arity, rng);
}

/// Visit every joint assignment of the network.
template <typename F>
void for_each_joint(const std::vector<std::size_t>& arity, F f) {
    std::vector<int> a(arity.size(), 0);
    while (true) {
        f(a);
        std::size_t d = 0;
        for (; d < a.size(); ++d) {
            if (static_cast<std::size_t>(++a[d]) < arity[d]) break;
            a[d] = 0;
        }
        if (d == a.size()) return;
    }
}

/// P(target | evidence) by summing the full joint.
inline std::vector<double> brute_marginal(const DiscreteBn& bn, NodeIndex target, const std::map<NodeIndex, int>& ev) {
    std::vector<double> out(bn.arity(target), 0.0);
    for_each_joint(bn.arities(), [&](const std::vector<int>& a) {
        for (const auto& [v, s] : ev) {
            if (a[static_cast<std::size_t>(v)] != s) return;
        }
        double p = 1.0;
        for (NodeIndex v = 0; v < static_cast<NodeIndex>(bn.size()); ++v) {
            const auto& c = bn.cpt(v);
            std::size_t j = 0;
            for (std::size_t k = 0; k < c.parents.size(); ++k) {
                j = j * c.parent_arities[k] + static_cast<std::size_t>(a[static_cast<std::size_t>(c.parents[k])]);
            }
            p *= c.table[j * c.arity + static_cast<std::size_t>(a[static_cast<std::size_t>(v)])];
        }
        out[static_cast<std::size_t>(a[static_cast<std::size_t>(target)])] += p;
    });
    const double z = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto& p : out) p /= z;
    return out;
}

/// P(target | do(node = state)) by truncated factorisation over the full joint.
inline std::vector<double> brute_do(const DiscreteBn& bn, NodeIndex node, int state, NodeIndex target) {
    std::vector<double> out(bn.arity(target), 0.0);
    for_each_joint(bn.arities(), [&](const std::vector<int>& a) {
        if (a[static_cast<std::size_t>(node)] != state) return;
        double p = 1.0;
        for (NodeIndex v = 0; v < static_cast<NodeIndex>(bn.size()); ++v) {
            if (v == node) continue;
            const auto& c = bn.cpt(v);
            std::size_t j = 0;
            for (std::size_t k = 0; k < c.parents.size(); ++k) {
                j = j * c.parent_arities[k] + static_cast<std::size_t>(a[static_cast<std::size_t>(c.parents[k])]);
            }
            p *= c.table[j * c.arity + static_cast<std::size_t>(a[static_cast<std::size_t>(v)])];
        }
        out[static_cast<std::size_t>(a[static_cast<std::size_t>(target)])] += p;
    });
    const double z = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto& p : out) p /= z;
    return out;
}

inline CategoricalDataset random_data(const std::vector<std::size_t>& arity, std::size_t rows, Rng& rng) {
    std::vector<CategoricalColumn> cols;
    const auto names = labels(arity.size());
    for (std::size_t c = 0; c < arity.size(); ++c) {
        CategoricalColumn col{names[c], {}, {}};
        for (std::size_t k = 0; k < arity[c]; ++k) col.states.push_back("s" + std::to_string(k));
        for (std::size_t r = 0; r < rows; ++r) col.values.push_back(static_cast<int>(pick(rng, arity[c])));
        cols.push_back(std::move(col));
    }
    return CategoricalDataset(std::move(cols));
}

/// Network whose every CPT row puts `strength` on one state chosen by the
/// rounded mean of the parent states (mirrored per node by a coin flip), so
/// dependencies are monotone and faithful.
inline DiscreteBn strong_bn(const Dag& dag, const std::vector<std::size_t>& arity, double strength, Rng& rng) {
    std::vector<std::vector<std::string>> states;
    for (auto r : arity) {
        std::vector<std::string> s;
        for (std::size_t k = 0; k < r; ++k) s.push_back("s" + std::to_string(k));
        states.push_back(s);
    }
    std::vector<Cpt> cpts;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(dag.size()); ++v) {
        Cpt c;
        c.child = v;
        c.parents = dag.parents(v);
        c.arity = arity[static_cast<std::size_t>(v)];
        std::size_t q = 1;
        for (auto p : c.parents) {
            c.parent_arities.push_back(arity[static_cast<std::size_t>(p)]);
            q *= c.parent_arities.back();
        }
        const bool flip = rng() % 2 == 1;
        for (std::size_t j = 0; j < q; ++j) {
            // Mean parent position on [0, 1], each parent scaled by its own arity.
            double pos = 0.5;
            if (!c.parents.empty()) {
                double sum = 0.0;
                std::size_t rest = j;
                for (std::size_t k = c.parents.size(); k-- > 0;) {
                    const auto r = c.parent_arities[k];
                    sum += static_cast<double>(rest % r) / static_cast<double>(r - 1);
                    rest /= r;
                }
                pos = sum / static_cast<double>(c.parents.size());
            } else {
                pos = uniform(rng);
            }
            if (flip) pos = 1.0 - pos;
            const auto peak = static_cast<std::size_t>(std::lround(pos * static_cast<double>(c.arity - 1)));
            for (std::size_t k = 0; k < c.arity; ++k) {
                c.table.push_back(k == peak ? strength : (1.0 - strength) / static_cast<double>(c.arity - 1));
            }
        }
        cpts.push_back(std::move(c));
    }
    return DiscreteBn(dag, std::move(states), std::move(cpts));
}

inline CategoricalDataset make_dataset(const std::vector<std::pair<std::string, std::vector<int>>>& cols,
                                       std::size_t arity = 2) {
    std::vector<CategoricalColumn> out;
    for (const auto& [name, values] : cols) {
        CategoricalColumn c{name, {}, values};
        for (std::size_t k = 0; k < arity; ++k) c.states.push_back("s" + std::to_string(k));
        out.push_back(std::move(c));
    }
    return CategoricalDataset(std::move(out));
}

}  // namespace testsupport

#endif  // CAUSALWB_TESTS_SUPPORT_HPP
