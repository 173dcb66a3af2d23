#ifndef CAUSALWB_BN_HPP
#define CAUSALWB_BN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "causalwb/dataset.hpp"
#include "causalwb/graph.hpp"

namespace causalwb {

/// P(child | parents) as a dense table. Row j is the parent configuration with
/// index sum_k s(parent_k) * stride_k, the first parent most significant.
struct Cpt {
    NodeIndex child = 0;
    std::vector<NodeIndex> parents;
    std::size_t arity = 0;
    std::vector<std::size_t> parent_arities;
    std::vector<double> table;  // configs() * arity entries

    std::size_t configs() const noexcept { return arity == 0 ? 0 : table.size() / arity; }
    std::span<const double> row(std::size_t config) const {
        return std::span<const double>(table).subspan(config * arity, arity);
    }
    std::span<double> row(std::size_t config) { return std::span<double>(table).subspan(config * arity, arity); }
    /// Row index for a full assignment (one state per network node).
    std::size_t config_of(std::span<const int> assignment) const;
    double probability(std::span<const int> assignment) const {
        return table[config_of(assignment) * arity + static_cast<std::size_t>(assignment[static_cast<std::size_t>(child)])];
    }
};

/// A DAG with one CPT per node. Immutable once built.
class DiscreteBn {
public:
    DiscreteBn() = default;
    /// Checks CPT parents against the DAG and that each row is a distribution (1e-9).
    DiscreteBn(Dag dag, std::vector<std::vector<std::string>> states, std::vector<Cpt> cpts);

    const Dag& dag() const noexcept { return dag_; }
    std::size_t size() const noexcept { return dag_.size(); }
    const std::vector<std::string>& labels() const noexcept { return dag_.labels(); }
    std::size_t arity(NodeIndex v) const { return states_.at(static_cast<std::size_t>(v)).size(); }
    std::vector<std::size_t> arities() const;
    const std::vector<std::string>& states(NodeIndex v) const { return states_.at(static_cast<std::size_t>(v)); }
    const Cpt& cpt(NodeIndex v) const { return cpts_.at(static_cast<std::size_t>(v)); }
    const std::vector<Cpt>& cpts() const noexcept { return cpts_; }

    double joint_probability(std::span<const int> assignment) const;
    /// Copy with node v's CPT replaced (parents must stay the same).
    DiscreteBn with_cpt(Cpt cpt) const;

private:
    Dag dag_;
    std::vector<std::vector<std::string>> states_;
    std::vector<Cpt> cpts_;
};

/// CPT entries (N_jk + alpha) / (N_j + alpha r). With alpha = 0 an unseen
/// parent configuration throws Error(UnseenConfigWithZeroSmoothing).
DiscreteBn fit_cpts(const Dag& d, const CategoricalDataset& data, double alpha_smooth = 1.0);

/// Graph mutilation: arcs into `node` removed and its CPT set to a point mass on `state`.
DiscreteBn do_intervene(const DiscreteBn& bn, NodeIndex node, int state);

/// Ancestral sampling; deterministic for a given seed.
CategoricalDataset forward_sample(const DiscreteBn& bn, std::size_t rows, std::uint64_t seed);

}  // namespace causalwb

#endif  // CAUSALWB_BN_HPP
