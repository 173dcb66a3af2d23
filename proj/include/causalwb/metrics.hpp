#ifndef CAUSALWB_METRICS_HPP
#define CAUSALWB_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>

#include "causalwb/graph.hpp"

namespace causalwb {

/// Penalty between the true and learnt relation of one node pair: 0 for the
/// same relation, 1 when exactly one side has no edge, 0.5 for any other
/// mismatch (reversed, undirected or bidirected against each other).
double pairwise_penalty(EdgeRelation truth, EdgeRelation learnt);

/// Fractional confusion terms. A true edge matched by a learnt edge with
/// penalty p adds 1 - p to tp and p to fn.
struct Confusion {
    double tp = 0.0;
    double tn = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    std::size_t edges = 0;          // a: edges in the true graph
    std::size_t independencies = 0;  // i: non-adjacent pairs in the true graph
};

/// Sum of pairwise penalties over every unordered node pair. `learnt` is
/// matched to `truth` by label; throws Error(NodeUniverseMismatch).
double shd(const MixedGraph& truth, const MixedGraph& learnt);
Confusion confusion(const MixedGraph& truth, const MixedGraph& learnt);

double precision(const Confusion& c);
double recall(const Confusion& c);
double f1(const Confusion& c);
/// 0.5 (tp/a + tn/i - fp/i - fn/a); throws Error(DegenerateTrueGraph) when a or i is 0.
double bsf(const Confusion& c);

struct MetricsReport {
    double shd = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::optional<double> bsf;  // empty when the true graph is empty or complete
    Confusion confusion;
    std::size_t edges = 0;
    std::optional<std::uint64_t> free_params;  // empty when the learnt graph has no DAG extension
    std::size_t subgraphs = 0;
    std::size_t max_in_degree = 0;
};

/// Compare as given (callers pass CPDAGs for class-level comparison); the
/// dimensionality fields describe `learnt`, with every node assumed to have
/// `states` states.
MetricsReport evaluate(const MixedGraph& truth, const MixedGraph& learnt, std::size_t states = 4);

}  // namespace causalwb

#endif  // CAUSALWB_METRICS_HPP
