#include "causalwb/metrics.hpp"

#include "causalwb/errors.hpp"
#include "causalwb/score.hpp"

namespace causalwb {

double pairwise_penalty(EdgeRelation truth, EdgeRelation learnt) {
    if (truth == learnt) {
        return 0.0;
    }
    if (truth == EdgeRelation::None || learnt == EdgeRelation::None) {
        return 1.0;
    }
    return 0.5;
}

namespace {

template <typename Visit>
void for_each_pair(const MixedGraph& truth, const MixedGraph& learnt, Visit visit) {
    const auto aligned = reorder_nodes(learnt, truth.labels());
    const auto n = static_cast<NodeIndex>(truth.size());
    for (NodeIndex a = 0; a < n; ++a) {
        for (NodeIndex b = a + 1; b < n; ++b) {
            visit(relation(truth, a, b), relation(aligned, a, b));
        }
    }
}

}  // namespace

double shd(const MixedGraph& truth, const MixedGraph& learnt) {
    double total = 0.0;
    for_each_pair(truth, learnt, [&](EdgeRelation t, EdgeRelation l) { total += pairwise_penalty(t, l); });
    return total;
}

Confusion confusion(const MixedGraph& truth, const MixedGraph& learnt) {
    Confusion c;
    for_each_pair(truth, learnt, [&](EdgeRelation t, EdgeRelation l) {
        if (t != EdgeRelation::None) {
            ++c.edges;
            const double p = pairwise_penalty(t, l);
            if (l == EdgeRelation::None) {
                c.fn += 1.0;
            } else {
                c.tp += 1.0 - p;
                c.fn += p;
            }
        } else {
            ++c.independencies;
            if (l == EdgeRelation::None) {
                c.tn += 1.0;
            } else {
                c.fp += 1.0;
            }
        }
    });
    return c;
}

double precision(const Confusion& c) {
    const double d = c.tp + c.fp;
    return d > 0.0 ? c.tp / d : 0.0;
}

double recall(const Confusion& c) {
    const double d = c.tp + c.fn;
    return d > 0.0 ? c.tp / d : 0.0;
}

double f1(const Confusion& c) {
    const double p = precision(c);
    const double r = recall(c);
    return p + r > 0.0 ? 2.0 * r * p / (r + p) : 0.0;
}

double bsf(const Confusion& c) {
    if (c.edges == 0 || c.independencies == 0) {
        throw Error(ErrorCode::DegenerateTrueGraph, "BSF needs at least one edge and one independency");
    }
    const auto a = static_cast<double>(c.edges);
    const auto i = static_cast<double>(c.independencies);
    return 0.5 * (c.tp / a + c.tn / i - c.fp / i - c.fn / a);
}

MetricsReport evaluate(const MixedGraph& truth, const MixedGraph& learnt, std::size_t states) {
    MetricsReport r;
    r.confusion = confusion(truth, learnt);
    r.shd = shd(truth, learnt);
    r.precision = precision(r.confusion);
    r.recall = recall(r.confusion);
    r.f1 = f1(r.confusion);
    if (r.confusion.edges > 0 && r.confusion.independencies > 0) {
        r.bsf = bsf(r.confusion);
    }
    const auto deg = degree_stats(learnt);
    r.edges = deg.edge_count;
    r.max_in_degree = deg.max_in_degree;
    r.subgraphs = disjoint_subgraph_count(learnt);
    try {
        const auto dag = pdag_to_dag_extension(map_circle_marks(learnt));
        const std::vector<std::size_t> arities(dag.size(), states);
        r.free_params = free_parameters(dag, arities);
    } catch (const Error&) {
        r.free_params.reset();
    }
    return r;
}

}  // namespace causalwb
