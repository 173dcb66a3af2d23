#ifndef CAUSALWB_SCORE_HPP
#define CAUSALWB_SCORE_HPP

#include <cstddef>
#include <cstdint>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "causalwb/dataset.hpp"
#include "causalwb/graph.hpp"

namespace causalwb {

/// (r_child - 1) * prod r_parent. Throws Error(InvalidArgument) on overflow.
std::uint64_t node_free_parameters(std::size_t child_arity, std::span<const std::size_t> parent_arities);

/// Sum of node_free_parameters over the DAG; arities are indexed like the DAG's nodes.
std::uint64_t free_parameters(const Dag& d, std::span<const std::size_t> arities);

/// Maximised local log-likelihood: sum over parent configurations j and child
/// states k of N_jk ln(N_jk / N_j), with 0 ln 0 = 0.
double local_log_likelihood(const CategoricalDataset& data, std::size_t child, std::span<const std::size_t> parents);

/// local LL - (ln N / 2) (r - 1) q.
double local_bic(const CategoricalDataset& data, std::size_t child, std::span<const std::size_t> parents);

/// Columns are matched to DAG nodes by label.
double log_likelihood(const Dag& d, const CategoricalDataset& data);
/// LL - (ln N / 2) * free parameters; larger is better.
double bic(const Dag& d, const CategoricalDataset& data);

/// `data` with its columns reordered to the DAG's node order.
CategoricalDataset align_columns(const CategoricalDataset& data, const Dag& d);

/// Memoised local BIC scores keyed by (child, sorted parents). Lookups take a
/// shared lock and inserts an exclusive one, so concurrent readers are safe.
class ScoreCache {
public:
    explicit ScoreCache(const CategoricalDataset& data) : data_(&data) {}

    double local(std::size_t child, std::span<const std::size_t> parents);
    std::size_t size() const;
    const CategoricalDataset& data() const noexcept { return *data_; }

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<std::size_t>& k) const noexcept;
    };

    const CategoricalDataset* data_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::vector<std::size_t>, double, KeyHash> scores_;
};

}  // namespace causalwb

#endif  // CAUSALWB_SCORE_HPP
