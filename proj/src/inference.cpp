#include "causalwb/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "causalwb/errors.hpp"

namespace causalwb {

namespace {

// Table over `vars` (ascending), row-major with the last variable fastest.
struct Factor {
    std::vector<NodeIndex> vars;
    std::vector<std::size_t> card;
    std::vector<double> values;
};

std::size_t table_size(const std::vector<std::size_t>& card) {
    std::size_t n = 1;
    for (auto c : card) {
        n *= c;
    }
    return n;
}

std::vector<std::size_t> strides_in(const Factor& f, const std::vector<NodeIndex>& vars) {
    std::vector<std::size_t> own(f.vars.size());
    std::size_t s = 1;
    for (std::size_t i = f.vars.size(); i-- > 0;) {
        own[i] = s;
        s *= f.card[i];
    }
    std::vector<std::size_t> out(vars.size(), 0);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto it = std::find(f.vars.begin(), f.vars.end(), vars[i]);
        if (it != f.vars.end()) {
            out[i] = own[static_cast<std::size_t>(it - f.vars.begin())];
        }
    }
    return out;
}

// Visit every assignment of `card`, tracking one linear index per stride set.
template <typename Visit>
void for_each_assignment(const std::vector<std::size_t>& card, const std::vector<std::vector<std::size_t>>& strides,
                         Visit visit) {
    const auto total = table_size(card);
    std::vector<std::size_t> state(card.size(), 0);
    std::vector<std::size_t> idx(strides.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        visit(idx);
        for (std::size_t d = card.size(); d-- > 0;) {
            ++state[d];
            for (std::size_t k = 0; k < strides.size(); ++k) {
                idx[k] += strides[k][d];
            }
            if (state[d] < card[d]) {
                break;
            }
            for (std::size_t k = 0; k < strides.size(); ++k) {
                idx[k] -= strides[k][d] * card[d];
            }
            state[d] = 0;
        }
    }
}

Factor multiply(const Factor& a, const Factor& b) {
    Factor out;
    std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(out.vars));
    for (auto v : out.vars) {
        auto ia = std::find(a.vars.begin(), a.vars.end(), v);
        out.card.push_back(ia != a.vars.end() ? a.card[static_cast<std::size_t>(ia - a.vars.begin())]
                                              : b.card[static_cast<std::size_t>(std::find(b.vars.begin(), b.vars.end(), v) - b.vars.begin())]);
    }
    out.values.resize(table_size(out.card));
    const std::vector<std::vector<std::size_t>> strides{strides_in(a, out.vars), strides_in(b, out.vars)};
    std::size_t pos = 0;
    for_each_assignment(out.card, strides, [&](const std::vector<std::size_t>& idx) {
        out.values[pos++] = a.values[idx[0]] * b.values[idx[1]];
    });
    return out;
}

Factor sum_out(const Factor& f, NodeIndex var) {
    Factor out;
    for (std::size_t i = 0; i < f.vars.size(); ++i) {
        if (f.vars[i] != var) {
            out.vars.push_back(f.vars[i]);
            out.card.push_back(f.card[i]);
        }
    }
    out.values.assign(table_size(out.card), 0.0);
    const std::vector<std::vector<std::size_t>> strides{strides_in(out, f.vars)};
    std::size_t pos = 0;
    for_each_assignment(f.card, strides, [&](const std::vector<std::size_t>& idx) {
        out.values[idx[0]] += f.values[pos++];
    });
    return out;
}

Factor reduce(const Factor& f, NodeIndex var, int state) {
    auto it = std::find(f.vars.begin(), f.vars.end(), var);
    if (it == f.vars.end()) {
        return f;
    }
    const auto at = static_cast<std::size_t>(it - f.vars.begin());
    Factor out;
    for (std::size_t i = 0; i < f.vars.size(); ++i) {
        if (i != at) {
            out.vars.push_back(f.vars[i]);
            out.card.push_back(f.card[i]);
        }
    }
    out.values.resize(table_size(out.card));
    const std::vector<std::vector<std::size_t>> strides{strides_in(f, out.vars)};
    const auto offset = strides_in(f, {var})[0] * static_cast<std::size_t>(state);
    std::size_t pos = 0;
    for_each_assignment(out.card, strides, [&](const std::vector<std::size_t>& idx) {
        out.values[pos++] = f.values[idx[0] + offset];
    });
    return out;
}

Factor cpt_factor(const DiscreteBn& bn, NodeIndex v) {
    const auto& c = bn.cpt(v);
    Factor f;
    f.vars = c.parents;
    f.vars.push_back(v);
    std::sort(f.vars.begin(), f.vars.end());
    for (auto u : f.vars) {
        f.card.push_back(bn.arity(u));
    }
    f.values.resize(table_size(f.card));
    std::vector<int> assignment(bn.size(), 0);
    std::vector<std::size_t> state(f.vars.size(), 0);
    for (std::size_t pos = 0; pos < f.values.size(); ++pos) {
        for (std::size_t i = 0; i < f.vars.size(); ++i) {
            assignment[static_cast<std::size_t>(f.vars[i])] = static_cast<int>(state[i]);
        }
        f.values[pos] = c.probability(assignment);
        for (std::size_t d = state.size(); d-- > 0;) {
            if (++state[d] < f.card[d]) {
                break;
            }
            state[d] = 0;
        }
    }
    return f;
}

}  // namespace

std::vector<double> marginal(const DiscreteBn& bn, NodeIndex target, const Evidence& evidence) {
    const auto n = static_cast<NodeIndex>(bn.size());
    if (target < 0 || target >= n) {
        throw Error(ErrorCode::InvalidArgument, "target out of range");
    }
    if (evidence.contains(target)) {
        throw Error(ErrorCode::InvalidArgument, "target is part of the evidence");
    }
    for (const auto& [v, s] : evidence) {
        if (v < 0 || v >= n || s < 0 || static_cast<std::size_t>(s) >= bn.arity(v)) {
            throw Error(ErrorCode::InvalidArgument, "evidence outside the network's states");
        }
    }

    // Nodes outside the ancestral closure of the query sum to one and drop out.
    std::vector<bool> relevant = bn.dag().ancestors(target);
    relevant[static_cast<std::size_t>(target)] = true;
    for (const auto& [v, s] : evidence) {
        const auto anc = bn.dag().ancestors(v);
        for (std::size_t i = 0; i < anc.size(); ++i) {
            relevant[i] = relevant[i] || anc[i];
        }
        relevant[static_cast<std::size_t>(v)] = true;
    }

    std::vector<Factor> factors;
    for (NodeIndex v = 0; v < n; ++v) {
        if (!relevant[static_cast<std::size_t>(v)]) {
            continue;
        }
        auto f = cpt_factor(bn, v);
        for (const auto& [ev, s] : evidence) {
            f = reduce(f, ev, s);
        }
        factors.push_back(std::move(f));
    }

    std::vector<NodeIndex> pending;
    for (NodeIndex v = 0; v < n; ++v) {
        if (relevant[static_cast<std::size_t>(v)] && v != target && !evidence.contains(v)) {
            pending.push_back(v);
        }
    }
    while (!pending.empty()) {
        // Greedy min-weight elimination; lowest index breaks ties.
        std::size_t best = 0;
        double best_weight = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pending.size(); ++i) {
            std::vector<NodeIndex> scope;
            for (const auto& f : factors) {
                if (std::binary_search(f.vars.begin(), f.vars.end(), pending[i])) {
                    scope.insert(scope.end(), f.vars.begin(), f.vars.end());
                }
            }
            std::sort(scope.begin(), scope.end());
            scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
            double w = 1.0;
            for (auto u : scope) {
                w *= static_cast<double>(bn.arity(u));
            }
            if (w < best_weight) {
                best_weight = w;
                best = i;
            }
        }
        const auto var = pending[best];
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));

        Factor product{{}, {}, {1.0}};
        std::vector<Factor> rest;
        for (auto& f : factors) {
            if (std::binary_search(f.vars.begin(), f.vars.end(), var)) {
                product = multiply(product, f);
            } else {
                rest.push_back(std::move(f));
            }
        }
        rest.push_back(sum_out(product, var));
        factors = std::move(rest);
    }

    Factor joint{{}, {}, {1.0}};
    for (const auto& f : factors) {
        joint = multiply(joint, f);
    }
    // Only the target remains in scope.
    std::vector<double> dist = joint.values;
    if (dist.size() != bn.arity(target)) {
        throw Error(ErrorCode::InvalidArgument, "internal: unexpected factor scope");
    }
    double z = 0.0;
    for (double p : dist) {
        z += p;
    }
    if (!(z > 0.0)) {
        throw Error(ErrorCode::ZeroProbabilityEvidence, "evidence has probability zero");
    }
    for (auto& p : dist) {
        p /= z;
    }
    return dist;
}

std::vector<double> posterior_given_rest(const DiscreteBn& bn, NodeIndex node, std::span<const int> assignment) {
    std::vector<int> a(assignment.begin(), assignment.end());
    const auto children = bn.dag().children(node);
    std::vector<double> dist(bn.arity(node), 0.0);
    double z = 0.0;
    for (std::size_t x = 0; x < dist.size(); ++x) {
        a[static_cast<std::size_t>(node)] = static_cast<int>(x);
        double p = bn.cpt(node).probability(a);
        for (auto c : children) {
            p *= bn.cpt(c).probability(a);
        }
        dist[x] = p;
        z += p;
    }
    if (!(z > 0.0)) {
        throw Error(ErrorCode::ZeroProbabilityEvidence, "Markov blanket evidence has probability zero");
    }
    for (auto& p : dist) {
        p /= z;
    }
    return dist;
}

EffectWeights::EffectWeights(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.size() < 2 || w_.front() != 0.0 || w_.back() != 1.0 ||
        !std::is_sorted(w_.begin(), w_.end())) {
        throw Error(ErrorCode::InvalidArgument, "effect weights must rise from 0 to 1");
    }
}

EffectWeights EffectWeights::for_states(std::size_t states) {
    if (states == 4) {
        return EffectWeights({0.0, 0.33, 0.66, 1.0});
    }
    if (states < 2) {
        throw Error(ErrorCode::InvalidArgument, "effect weights need at least two states");
    }
    std::vector<double> w(states);
    for (std::size_t i = 0; i < states; ++i) {
        w[i] = static_cast<double>(i) / static_cast<double>(states - 1);
    }
    return EffectWeights(std::move(w));
}

double EffectWeights::score(std::span<const double> dist) const {
    if (dist.size() != w_.size()) {
        throw Error(ErrorCode::InvalidArgument, "distribution and weights differ in length");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        s += dist[i] * w_[i];
    }
    return s;
}

double effect_score(std::span<const double> dist_low, std::span<const double> dist_high, const EffectWeights& w) {
    return std::abs(w.score(dist_low) - w.score(dist_high));
}

InterventionEffect intervention_effect(const DiscreteBn& bn, NodeIndex do_node, NodeIndex target) {
    return intervention_effect(bn, do_node, target, EffectWeights::for_states(bn.arity(target)));
}

InterventionEffect intervention_effect(const DiscreteBn& bn, NodeIndex do_node, NodeIndex target,
                                       const EffectWeights& w) {
    if (do_node == target) {
        throw Error(ErrorCode::InvalidArgument, "intervention and target must differ");
    }
    InterventionEffect out;
    out.dist_low = marginal(do_intervene(bn, do_node, 0), target);
    out.dist_high = marginal(do_intervene(bn, do_node, static_cast<int>(bn.arity(do_node)) - 1), target);
    out.effect = effect_score(out.dist_low, out.dist_high, w);
    return out;
}

void perturb_row(std::span<double> row, double epsilon) {
    if (row.size() < 2) {
        return;
    }
    const auto hi = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    std::size_t lo = hi == 0 ? 1 : 0;
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (k != hi && row[k] < row[lo]) {
            lo = k;
        }
    }
    const double moved = std::min(epsilon, row[hi]);
    row[hi] -= moved;
    row[lo] += moved;
    double z = 0.0;
    for (double p : row) {
        z += p;
    }
    for (auto& p : row) {
        p /= z;
    }
}

std::vector<double> sensitivity(const DiscreteBn& bn, NodeIndex target, double epsilon, Execution execution) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 0.5)");
    }
    const auto base = marginal(bn, target);
    const auto ancestors = bn.dag().ancestors(target);

    struct Task {
        NodeIndex node;
        std::size_t row;
    };
    std::vector<Task> tasks;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(bn.size()); ++v) {
        if (ancestors[static_cast<std::size_t>(v)]) {
            for (std::size_t j = 0; j < bn.cpt(v).configs(); ++j) {
                tasks.push_back({v, j});
            }
        }
    }

    std::vector<double> shift(tasks.size(), 0.0);
    auto run = [&](std::size_t i) {
        auto cpt = bn.cpt(tasks[i].node);
        perturb_row(cpt.row(tasks[i].row), epsilon);
        const auto moved = marginal(bn.with_cpt(std::move(cpt)), target);
        double l1 = 0.0;
        for (std::size_t k = 0; k < moved.size(); ++k) {
            l1 += std::abs(moved[k] - base[k]);
        }
        shift[i] = l1;
    };
    const auto count = static_cast<std::ptrdiff_t>(tasks.size());
    if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            run(static_cast<std::size_t>(i));
        }
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            run(static_cast<std::size_t>(i));
        }
    }

    std::vector<double> out(bn.size(), 0.0);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& slot = out[static_cast<std::size_t>(tasks[i].node)];
        slot = std::max(slot, shift[i]);
    }
    return out;
}

}  // namespace causalwb
