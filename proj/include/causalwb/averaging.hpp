#ifndef CAUSALWB_AVERAGING_HPP
#define CAUSALWB_AVERAGING_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "causalwb/graph.hpp"

namespace causalwb {

using NodePair = std::pair<NodeIndex, NodeIndex>;

/// Occurrence counts per edge kind across a set of graphs. Indices refer to
/// `nodes`. Directed keys are (from, to); the others are (lo, hi).
struct EdgeTally {
    std::vector<std::string> nodes;
    std::size_t graphs = 0;
    std::map<NodePair, std::size_t> directed;
    std::map<NodePair, std::size_t> undirected;
    std::map<NodePair, std::size_t> bidirected;
};

struct AverageConfig {
    std::size_t theta = 1;
    /// Tie-break order over labels; empty means lexicographic.
    std::vector<std::string> node_order;
};

/// Count edges per kind; o-> counts as directed and o-o as undirected.
/// Throws Error(NodeUniverseMismatch) unless every graph has the same label set.
EdgeTally tally_edges(const std::vector<MixedGraph>& graphs, const std::vector<std::string>& node_order = {});

enum class AverageStep : std::uint8_t { Directed = 1, Undirected = 2, Reversed = 3 };

struct AveragedEdge {
    NodeIndex from;
    NodeIndex to;
    std::size_t count;
    AverageStep step;
};

struct AverageResult {
    Dag dag;
    std::vector<AveragedEdge> edges;  // in insertion order
    std::vector<std::string> warnings;

    /// "A --> B : 5" lines for annotating the consensus graph file.
    std::vector<std::string> annotations() const;
};

/// Consensus DAG over the input graphs:
///  1. directed edges with count >= theta, most frequent first; skip one whose
///     reverse is present; one that would close a cycle is reversed into set C;
///  2. undirected edges with count >= theta, most frequent first, skipped when
///     the pair is present, oriented by node order (reversed if that cycles);
///  3. edges of C, most frequent first, skipped when the pair is present.
/// Bidirected edges are ignored. Count ties break by node order of (from, to).
AverageResult average_graphs(const std::vector<MixedGraph>& graphs, const AverageConfig& cfg);
AverageResult average_tally(const EdgeTally& tally, std::size_t theta);

struct BidirectedAverage {
    std::vector<std::string> nodes;
    std::vector<std::pair<NodePair, std::size_t>> included;   // count >= theta
    std::vector<std::pair<NodePair, std::size_t>> near_miss;  // count == theta - 1

    MixedGraph graph() const;
};

BidirectedAverage average_bidirected(const std::vector<MixedGraph>& graphs, const AverageConfig& cfg);

/// ceil(n / 3); with `published` the published thresholds for the group
/// sizes 4, 5, 9, 14, 17, 19 and 31 take precedence.
std::size_t default_theta(std::size_t n_graphs, bool published = false);

}  // namespace causalwb

#endif  // CAUSALWB_AVERAGING_HPP
