#ifndef CAUSALWB_PC_STABLE_HPP
#define CAUSALWB_PC_STABLE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "causalwb/dataset.hpp"
#include "causalwb/graph.hpp"
#include "causalwb/parallel.hpp"

namespace causalwb {

struct PcConfig {
    double alpha = 0.05;
    int max_conditioning = 3;
    Execution execution = Execution::Parallel;
};

/// Separating sets of removed edges, keyed by the unordered pair (lo, hi).
class SepsetMap {
public:
    void record(NodeIndex a, NodeIndex b, std::vector<NodeIndex> set);
    bool contains(NodeIndex a, NodeIndex b) const;
    std::optional<std::vector<NodeIndex>> get(NodeIndex a, NodeIndex b) const;
    std::size_t size() const noexcept { return sets_.size(); }
    const std::map<std::pair<NodeIndex, NodeIndex>, std::vector<NodeIndex>>& entries() const noexcept { return sets_; }

private:
    std::map<std::pair<NodeIndex, NodeIndex>, std::vector<NodeIndex>> sets_;
};

struct PcResult {
    MixedGraph pdag;
    SepsetMap sepsets;
    std::size_t tests_run = 0;
};

/// Skeleton discovery where every test at conditioning size l draws its
/// candidate sets from the adjacencies frozen at the start of level l; the
/// outcome is therefore independent of column order. Returns the undirected
/// skeleton and separating sets.
PcResult pc_skeleton(const CategoricalDataset& d, const PcConfig& cfg);

/// Orient x -> z <- y for each unshielded triple with z outside sepset(x, y).
/// Triples are visited in (x, z, y) index order and an edge keeps the first
/// orientation written to it.
void orient_v_structures(MixedGraph& skeleton, const SepsetMap& sepsets);

/// Skeleton plus v-structure orientation; other edges stay undirected.
PcResult pc_stable(const CategoricalDataset& d, const PcConfig& cfg = {});

}  // namespace causalwb

#endif  // CAUSALWB_PC_STABLE_HPP
