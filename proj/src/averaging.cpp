#include "causalwb/averaging.hpp"

#include <algorithm>
#include <set>

#include "causalwb/errors.hpp"
#include "causalwb/graph_io.hpp"

namespace causalwb {

EdgeTally tally_edges(const std::vector<MixedGraph>& graphs, const std::vector<std::string>& node_order) {
    EdgeTally t;
    t.graphs = graphs.size();
    if (graphs.empty()) {
        t.nodes = node_order;
        return t;
    }
    const std::set<std::string> universe(graphs.front().labels().begin(), graphs.front().labels().end());
    for (const auto& g : graphs) {
        if (std::set<std::string>(g.labels().begin(), g.labels().end()) != universe) {
            throw Error(ErrorCode::NodeUniverseMismatch, "input graphs have different node sets");
        }
    }
    if (node_order.empty()) {
        t.nodes.assign(universe.begin(), universe.end());
    } else {
        if (std::set<std::string>(node_order.begin(), node_order.end()) != universe ||
            node_order.size() != universe.size()) {
            throw Error(ErrorCode::NodeUniverseMismatch, "node order does not match the graphs' nodes");
        }
        t.nodes = node_order;
    }

    for (const auto& raw : graphs) {
        const auto g = reorder_nodes(raw, t.nodes);
        for (const auto& e : g.edges()) {
            switch (relation(g, e.a, e.b)) {
            case EdgeRelation::Forward:
                ++t.directed[{e.a, e.b}];
                break;
            case EdgeRelation::Backward:
                ++t.directed[{e.b, e.a}];
                break;
            case EdgeRelation::Undirected:
                ++t.undirected[{e.a, e.b}];
                break;
            case EdgeRelation::Bidirected:
                ++t.bidirected[{e.a, e.b}];
                break;
            case EdgeRelation::None:
                break;
            }
        }
    }
    return t;
}

namespace {

std::vector<std::pair<NodePair, std::size_t>> ranked(const std::map<NodePair, std::size_t>& counts,
                                                     std::size_t theta) {
    std::vector<std::pair<NodePair, std::size_t>> out;
    for (const auto& [pair, n] : counts) {
        if (n >= theta) {
            out.emplace_back(pair, n);
        }
    }
    // Map order already sorts by (from, to); a stable sort on count keeps it.
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

}  // namespace

AverageResult average_tally(const EdgeTally& tally, std::size_t theta) {
    if (theta == 0) {
        throw Error(ErrorCode::InvalidArgument, "theta must be at least 1");
    }
    MixedGraph g(tally.nodes);
    AverageResult res;
    std::vector<std::pair<NodePair, std::size_t>> reversed;

    for (const auto& [arc, n] : ranked(tally.directed, theta)) {
        const auto [from, to] = arc;
        if (g.adjacent(from, to)) {
            continue;
        }
        if (creates_cycle(g, from, to)) {
            reversed.push_back({{to, from}, n});
            continue;
        }
        g.add_directed(from, to);
        res.edges.push_back({from, to, n, AverageStep::Directed});
    }

    for (const auto& [pair, n] : ranked(tally.undirected, theta)) {
        auto [from, to] = pair;
        if (g.adjacent(from, to)) {
            continue;
        }
        if (creates_cycle(g, from, to)) {
            std::swap(from, to);
        }
        g.add_directed(from, to);
        res.edges.push_back({from, to, n, AverageStep::Undirected});
    }

    std::stable_sort(reversed.begin(), reversed.end(), [](const auto& a, const auto& b) {
        return a.second > b.second || (a.second == b.second && a.first < b.first);
    });
    for (const auto& [arc, n] : reversed) {
        const auto [from, to] = arc;
        if (g.adjacent(from, to)) {
            continue;
        }
        if (creates_cycle(g, from, to)) {
            res.warnings.push_back("dropped " + tally.nodes[static_cast<std::size_t>(from)] + " --> " +
                                   tally.nodes[static_cast<std::size_t>(to)] + ": would close a cycle");
            continue;
        }
        g.add_directed(from, to);
        res.edges.push_back({from, to, n, AverageStep::Reversed});
    }

    res.dag = Dag(std::move(g));
    return res;
}

AverageResult average_graphs(const std::vector<MixedGraph>& graphs, const AverageConfig& cfg) {
    return average_tally(tally_edges(graphs, cfg.node_order), cfg.theta);
}

std::vector<std::string> AverageResult::annotations() const {
    std::vector<std::string> out;
    for (const auto& e : edges) {
        std::string line = dag.labels()[static_cast<std::size_t>(e.from)] + " --> " +
                           dag.labels()[static_cast<std::size_t>(e.to)] + " : " + std::to_string(e.count);
        if (e.step == AverageStep::Reversed) {
            line += " (reversed)";
        } else if (e.step == AverageStep::Undirected) {
            line += " (undirected)";
        }
        out.push_back(std::move(line));
    }
    for (const auto& w : warnings) {
        out.push_back("warning: " + w);
    }
    return out;
}

BidirectedAverage average_bidirected(const std::vector<MixedGraph>& graphs, const AverageConfig& cfg) {
    if (cfg.theta == 0) {
        throw Error(ErrorCode::InvalidArgument, "theta must be at least 1");
    }
    const auto tally = tally_edges(graphs, cfg.node_order);
    BidirectedAverage out;
    out.nodes = tally.nodes;
    for (const auto& entry : ranked(tally.bidirected, 1)) {
        if (entry.second >= cfg.theta) {
            out.included.push_back(entry);
        } else if (entry.second + 1 == cfg.theta) {
            out.near_miss.push_back(entry);
        }
    }
    return out;
}

MixedGraph BidirectedAverage::graph() const {
    MixedGraph g(nodes);
    for (const auto& [pair, n] : included) {
        g.add_bidirected(pair.first, pair.second);
    }
    return g;
}

std::size_t default_theta(std::size_t n_graphs, bool published) {
    if (n_graphs == 0) {
        throw Error(ErrorCode::InvalidArgument, "need at least one graph");
    }
    if (published) {
        static const std::map<std::size_t, std::size_t> published{{4, 2},  {5, 2},  {9, 3}, {14, 5},
                                                                  {17, 6}, {19, 7}, {31, 10}};
        if (auto it = published.find(n_graphs); it != published.end()) {
            return it->second;
        }
    }
    return (n_graphs + 2) / 3;
}

}  // namespace causalwb
