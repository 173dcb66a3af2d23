#include "causalwb/bn.hpp"

#include <cmath>
#include <random>

#include "causalwb/errors.hpp"
#include "causalwb/score.hpp"

namespace causalwb {

std::size_t Cpt::config_of(std::span<const int> assignment) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < parents.size(); ++k) {
        idx = idx * parent_arities[k] + static_cast<std::size_t>(assignment[static_cast<std::size_t>(parents[k])]);
    }
    return idx;
}

DiscreteBn::DiscreteBn(Dag dag, std::vector<std::vector<std::string>> states, std::vector<Cpt> cpts)
    : dag_(std::move(dag)), states_(std::move(states)), cpts_(std::move(cpts)) {
    if (states_.size() != dag_.size() || cpts_.size() != dag_.size()) {
        throw Error(ErrorCode::InvalidArgument, "BN needs one state list and one CPT per node");
    }
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(dag_.size()); ++v) {
        const auto& c = cpts_[static_cast<std::size_t>(v)];
        const auto& name = dag_.labels()[static_cast<std::size_t>(v)];
        if (states_[static_cast<std::size_t>(v)].empty()) {
            throw Error(ErrorCode::InvalidArgument, "node '" + name + "' has no states");
        }
        if (c.child != v || c.parents != dag_.parents(v) || c.arity != arity(v)) {
            throw Error(ErrorCode::InvalidArgument, "CPT of '" + name + "' does not match the DAG");
        }
        std::size_t q = 1;
        for (std::size_t k = 0; k < c.parents.size(); ++k) {
            if (c.parent_arities.size() != c.parents.size() || c.parent_arities[k] != arity(c.parents[k])) {
                throw Error(ErrorCode::InvalidArgument, "CPT of '" + name + "' has wrong parent arities");
            }
            q *= c.parent_arities[k];
        }
        if (c.table.size() != q * c.arity) {
            throw Error(ErrorCode::InvalidArgument, "CPT of '" + name + "' has the wrong size");
        }
        for (std::size_t j = 0; j < q; ++j) {
            double sum = 0.0;
            for (double p : c.row(j)) {
                if (!(p >= 0.0)) {
                    throw Error(ErrorCode::InvalidArgument, "CPT of '" + name + "' has a negative entry");
                }
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                throw Error(ErrorCode::InvalidArgument, "CPT row of '" + name + "' does not sum to 1");
            }
        }
    }
}

std::vector<std::size_t> DiscreteBn::arities() const {
    std::vector<std::size_t> out;
    out.reserve(states_.size());
    for (const auto& s : states_) {
        out.push_back(s.size());
    }
    return out;
}

double DiscreteBn::joint_probability(std::span<const int> assignment) const {
    double p = 1.0;
    for (const auto& c : cpts_) {
        p *= c.probability(assignment);
    }
    return p;
}

DiscreteBn DiscreteBn::with_cpt(Cpt cpt) const {
    auto cpts = cpts_;
    cpts.at(static_cast<std::size_t>(cpt.child)) = std::move(cpt);
    return DiscreteBn(dag_, states_, std::move(cpts));
}

DiscreteBn fit_cpts(const Dag& d, const CategoricalDataset& data, double alpha_smooth) {
    if (!(alpha_smooth >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "smoothing must be non-negative");
    }
    const auto aligned = align_columns(data, d);
    if (!aligned.complete()) {
        throw Error(ErrorCode::InvalidArgument, "parameter fitting requires complete data");
    }
    std::vector<std::vector<std::string>> states;
    std::vector<Cpt> cpts;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(d.size()); ++v) {
        const auto& col = aligned.column(static_cast<std::size_t>(v));
        states.push_back(col.states);
        Cpt c;
        c.child = v;
        c.parents = d.parents(v);
        c.arity = col.arity();
        std::size_t q = 1;
        for (auto p : c.parents) {
            c.parent_arities.push_back(aligned.arity(static_cast<std::size_t>(p)));
            q *= c.parent_arities.back();
        }
        std::vector<double> counts(q * c.arity, 0.0);
        std::vector<int> assignment(d.size());
        for (std::size_t row = 0; row < aligned.rows(); ++row) {
            assignment[static_cast<std::size_t>(v)] = aligned.value(row, static_cast<std::size_t>(v));
            for (auto p : c.parents) {
                assignment[static_cast<std::size_t>(p)] = aligned.value(row, static_cast<std::size_t>(p));
            }
            counts[c.config_of(assignment) * c.arity + static_cast<std::size_t>(assignment[static_cast<std::size_t>(v)])] += 1.0;
        }
        c.table.resize(counts.size());
        for (std::size_t j = 0; j < q; ++j) {
            double nj = 0.0;
            for (std::size_t k = 0; k < c.arity; ++k) {
                nj += counts[j * c.arity + k];
            }
            const double denom = nj + alpha_smooth * static_cast<double>(c.arity);
            if (denom <= 0.0) {
                throw Error(ErrorCode::UnseenConfigWithZeroSmoothing,
                            "node '" + col.name + "' has an unseen parent configuration");
            }
            for (std::size_t k = 0; k < c.arity; ++k) {
                c.table[j * c.arity + k] = (counts[j * c.arity + k] + alpha_smooth) / denom;
            }
        }
        cpts.push_back(std::move(c));
    }
    return DiscreteBn(d, std::move(states), std::move(cpts));
}

DiscreteBn do_intervene(const DiscreteBn& bn, NodeIndex node, int state) {
    if (node < 0 || static_cast<std::size_t>(node) >= bn.size()) {
        throw Error(ErrorCode::InvalidArgument, "intervention node out of range");
    }
    if (state < 0 || static_cast<std::size_t>(state) >= bn.arity(node)) {
        throw Error(ErrorCode::InvalidArgument, "intervention state out of range");
    }
    MixedGraph g = bn.dag().graph();
    for (auto p : g.parents(node)) {
        g.remove_edge(p, node);
    }
    Cpt point;
    point.child = node;
    point.arity = bn.arity(node);
    point.table.assign(point.arity, 0.0);
    point.table[static_cast<std::size_t>(state)] = 1.0;

    std::vector<std::vector<std::string>> states;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(bn.size()); ++v) {
        states.push_back(bn.states(v));
    }
    auto cpts = bn.cpts();
    cpts[static_cast<std::size_t>(node)] = std::move(point);
    return DiscreteBn(Dag(std::move(g)), std::move(states), std::move(cpts));
}

CategoricalDataset forward_sample(const DiscreteBn& bn, std::size_t rows, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto order = bn.dag().topological_order();
    std::vector<CategoricalColumn> cols;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(bn.size()); ++v) {
        cols.push_back({bn.labels()[static_cast<std::size_t>(v)], bn.states(v), std::vector<int>(rows, 0)});
    }
    std::vector<int> assignment(bn.size(), 0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (auto v : order) {
            const auto& c = bn.cpt(v);
            const auto row = c.row(c.config_of(assignment));
            // 53 random bits mapped to [0, 1).
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            double acc = 0.0;
            int pick = 0;
            for (std::size_t k = 0; k < c.arity; ++k) {
                if (row[k] > 0.0) {
                    pick = static_cast<int>(k);
                }
            }
            for (std::size_t k = 0; k < c.arity; ++k) {
                acc += row[k];
                if (u < acc) {
                    pick = static_cast<int>(k);
                    break;
                }
            }
            assignment[static_cast<std::size_t>(v)] = pick;
            cols[static_cast<std::size_t>(v)].values[r] = pick;
        }
    }
    return CategoricalDataset(std::move(cols));
}

}  // namespace causalwb
