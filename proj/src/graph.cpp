#include "causalwb/graph.hpp"

#include <algorithm>
#include <numeric>

#include "causalwb/errors.hpp"

namespace causalwb {

MixedGraph::MixedGraph(std::vector<std::string> labels)
    : labels_(std::move(labels)), marks_(labels_.size() * labels_.size(), -1) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i].empty()) {
            throw Error(ErrorCode::InvalidArgument, "empty node label");
        }
        if (!index_.emplace(labels_[i], static_cast<NodeIndex>(i)).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate node label '" + labels_[i] + "'");
        }
    }
}

std::optional<NodeIndex> MixedGraph::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

NodeIndex MixedGraph::index_of(std::string_view label) const {
    if (auto v = find(label)) {
        return *v;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown node '" + std::string(label) + "'");
}

void MixedGraph::check_node(NodeIndex v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= labels_.size()) {
        throw Error(ErrorCode::InvalidArgument, "node index " + std::to_string(v) + " out of range");
    }
}

void MixedGraph::add_edge(NodeIndex a, NodeIndex b, Mark at_a, Mark at_b) {
    check_node(a);
    check_node(b);
    if (a == b) {
        throw Error(ErrorCode::InvalidArgument, "self-loop on '" + label(a) + "'");
    }
    if (adjacent(a, b)) {
        throw Error(ErrorCode::InvalidArgument,
                    "edge between '" + label(a) + "' and '" + label(b) + "' already present");
    }
    set_edge(a, b, at_a, at_b);
}

void MixedGraph::set_edge(NodeIndex a, NodeIndex b, Mark at_a, Mark at_b) {
    check_node(a);
    check_node(b);
    if (a == b) {
        throw Error(ErrorCode::InvalidArgument, "self-loop on '" + label(a) + "'");
    }
    const auto n = labels_.size();
    if (!adjacent(a, b)) {
        ++edge_count_;
    }
    marks_[static_cast<std::size_t>(b) * n + static_cast<std::size_t>(a)] = static_cast<std::int8_t>(at_a);
    marks_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = static_cast<std::int8_t>(at_b);
}

void MixedGraph::remove_edge(NodeIndex a, NodeIndex b) {
    check_node(a);
    check_node(b);
    if (!adjacent(a, b)) {
        return;
    }
    const auto n = labels_.size();
    marks_[static_cast<std::size_t>(b) * n + static_cast<std::size_t>(a)] = -1;
    marks_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = -1;
    --edge_count_;
}

std::optional<Mark> MixedGraph::mark_at(NodeIndex at, NodeIndex other) const {
    const auto m = raw(other, at);
    if (m < 0) {
        return std::nullopt;
    }
    return static_cast<Mark>(m);
}

std::optional<Edge> MixedGraph::edge(NodeIndex a, NodeIndex b) const {
    if (!adjacent(a, b)) {
        return std::nullopt;
    }
    return Edge{a, b, *mark_at(a, b), *mark_at(b, a)};
}

bool MixedGraph::has_directed(NodeIndex from, NodeIndex to) const {
    return raw(from, to) == static_cast<std::int8_t>(Mark::Arrow) &&
           raw(to, from) == static_cast<std::int8_t>(Mark::Tail);
}

bool MixedGraph::has_undirected(NodeIndex a, NodeIndex b) const {
    return raw(a, b) == static_cast<std::int8_t>(Mark::Tail) &&
           raw(b, a) == static_cast<std::int8_t>(Mark::Tail);
}

bool MixedGraph::has_bidirected(NodeIndex a, NodeIndex b) const {
    return raw(a, b) == static_cast<std::int8_t>(Mark::Arrow) &&
           raw(b, a) == static_cast<std::int8_t>(Mark::Arrow);
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    const auto n = static_cast<NodeIndex>(size());
    for (NodeIndex a = 0; a < n; ++a) {
        for (NodeIndex b = a + 1; b < n; ++b) {
            if (adjacent(a, b)) {
                out.push_back(Edge{a, b, *mark_at(a, b), *mark_at(b, a)});
            }
        }
    }
    return out;
}

std::vector<NodeIndex> MixedGraph::neighbors(NodeIndex v) const {
    std::vector<NodeIndex> out;
    const auto n = static_cast<NodeIndex>(size());
    for (NodeIndex u = 0; u < n; ++u) {
        if (u != v && adjacent(v, u)) {
            out.push_back(u);
        }
    }
    return out;
}

std::vector<NodeIndex> MixedGraph::parents(NodeIndex v) const {
    std::vector<NodeIndex> out;
    const auto n = static_cast<NodeIndex>(size());
    for (NodeIndex u = 0; u < n; ++u) {
        if (u != v && has_directed(u, v)) {
            out.push_back(u);
        }
    }
    return out;
}

std::vector<NodeIndex> MixedGraph::children(NodeIndex v) const {
    std::vector<NodeIndex> out;
    const auto n = static_cast<NodeIndex>(size());
    for (NodeIndex u = 0; u < n; ++u) {
        if (u != v && has_directed(v, u)) {
            out.push_back(u);
        }
    }
    return out;
}

bool MixedGraph::only_directed() const {
    for (const auto& e : edges()) {
        const bool forward = e.mark_at_a == Mark::Tail && e.mark_at_b == Mark::Arrow;
        const bool backward = e.mark_at_a == Mark::Arrow && e.mark_at_b == Mark::Tail;
        if (!forward && !backward) {
            return false;
        }
    }
    return true;
}

EdgeRelation relation(const MixedGraph& g, NodeIndex a, NodeIndex b) {
    const auto at_a = g.mark_at(a, b);
    if (!at_a) {
        return EdgeRelation::None;
    }
    const auto at_b = *g.mark_at(b, a);
    const bool arrow_a = *at_a == Mark::Arrow;
    const bool arrow_b = at_b == Mark::Arrow;
    if (arrow_a && arrow_b) {
        return EdgeRelation::Bidirected;
    }
    if (arrow_b) {
        return EdgeRelation::Forward;
    }
    if (arrow_a) {
        return EdgeRelation::Backward;
    }
    return EdgeRelation::Undirected;
}

// ---------------------------------------------------------------------------

namespace {

// Depth-first reachability along directed edges, optionally ignoring one arc.
bool reaches(const MixedGraph& g, NodeIndex from, NodeIndex to, NodeIndex skip_from = -1,
             NodeIndex skip_to = -1) {
    const auto n = g.size();
    std::vector<char> seen(n, 0);
    std::vector<NodeIndex> stack{from};
    seen[static_cast<std::size_t>(from)] = 1;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (v == to) {
            return true;
        }
        for (NodeIndex u = 0; u < static_cast<NodeIndex>(n); ++u) {
            if (seen[static_cast<std::size_t>(u)] || !g.has_directed(v, u)) {
                continue;
            }
            if (v == skip_from && u == skip_to) {
                continue;
            }
            seen[static_cast<std::size_t>(u)] = 1;
            stack.push_back(u);
        }
    }
    return false;
}

}  // namespace

bool is_acyclic(const MixedGraph& g) {
    // Kahn's algorithm restricted to directed edges.
    const auto n = static_cast<NodeIndex>(g.size());
    std::vector<int> indeg(g.size(), 0);
    for (NodeIndex v = 0; v < n; ++v) {
        indeg[static_cast<std::size_t>(v)] = static_cast<int>(g.parents(v).size());
    }
    std::vector<NodeIndex> ready;
    for (NodeIndex v = 0; v < n; ++v) {
        if (indeg[static_cast<std::size_t>(v)] == 0) {
            ready.push_back(v);
        }
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const auto v = ready.back();
        ready.pop_back();
        ++visited;
        for (auto c : g.children(v)) {
            if (--indeg[static_cast<std::size_t>(c)] == 0) {
                ready.push_back(c);
            }
        }
    }
    return visited == g.size();
}

bool creates_cycle(const MixedGraph& g, NodeIndex from, NodeIndex to) {
    return reaches(g, to, from);
}

// ---------------------------------------------------------------------------

Dag::Dag(MixedGraph g) : graph_(std::move(g)) {
    if (!graph_.only_directed()) {
        throw Error(ErrorCode::InvalidArgument, "DAG may contain directed edges only");
    }
    if (!is_acyclic(graph_)) {
        throw Error(ErrorCode::CyclicGraph, "graph contains a directed cycle");
    }
}

Dag::Dag(std::vector<std::string> labels, const std::vector<std::pair<NodeIndex, NodeIndex>>& arcs)
    : Dag([&] {
          MixedGraph g(std::move(labels));
          for (const auto& [from, to] : arcs) {
              g.add_directed(from, to);
          }
          return g;
      }()) {}

std::vector<std::pair<NodeIndex, NodeIndex>> Dag::arcs() const {
    std::vector<std::pair<NodeIndex, NodeIndex>> out;
    for (const auto& e : graph_.edges()) {
        if (e.mark_at_b == Mark::Arrow) {
            out.emplace_back(e.a, e.b);
        } else {
            out.emplace_back(e.b, e.a);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeIndex> Dag::topological_order() const {
    const auto n = static_cast<NodeIndex>(size());
    std::vector<int> indeg(size(), 0);
    for (NodeIndex v = 0; v < n; ++v) {
        indeg[static_cast<std::size_t>(v)] = static_cast<int>(parents(v).size());
    }
    std::vector<NodeIndex> order;
    order.reserve(size());
    // Smallest ready index first keeps the order deterministic.
    std::vector<NodeIndex> ready;
    for (NodeIndex v = n - 1; v >= 0; --v) {
        if (indeg[static_cast<std::size_t>(v)] == 0) {
            ready.push_back(v);
        }
    }
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), std::greater<>());
        const auto v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (auto c : children(v)) {
            if (--indeg[static_cast<std::size_t>(c)] == 0) {
                ready.push_back(c);
            }
        }
    }
    return order;
}

std::vector<bool> Dag::ancestors(NodeIndex v) const {
    std::vector<bool> seen(size(), false);
    std::vector<NodeIndex> stack = parents(v);
    for (auto p : stack) {
        seen[static_cast<std::size_t>(p)] = true;
    }
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto p : parents(u)) {
            if (!seen[static_cast<std::size_t>(p)]) {
                seen[static_cast<std::size_t>(p)] = true;
                stack.push_back(p);
            }
        }
    }
    return seen;
}

std::vector<bool> Dag::descendants(NodeIndex v) const {
    std::vector<bool> seen(size(), false);
    std::vector<NodeIndex> stack = children(v);
    for (auto c : stack) {
        seen[static_cast<std::size_t>(c)] = true;
    }
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto c : children(u)) {
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = true;
                stack.push_back(c);
            }
        }
    }
    return seen;
}

// ---------------------------------------------------------------------------

MixedGraph skeleton(const MixedGraph& g) {
    MixedGraph out(g.labels());
    for (const auto& e : g.edges()) {
        out.add_undirected(e.a, e.b);
    }
    return out;
}

std::vector<VStructure> v_structures(const MixedGraph& g) {
    std::vector<VStructure> out;
    const auto n = static_cast<NodeIndex>(g.size());
    for (NodeIndex z = 0; z < n; ++z) {
        const auto pa = g.parents(z);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                if (!g.adjacent(pa[i], pa[j])) {
                    out.push_back(VStructure{pa[i], z, pa[j]});
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void apply_orientation_rules(MixedGraph& g) {
    const auto n = static_cast<NodeIndex>(g.size());
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeIndex a = 0; a < n; ++a) {
            for (NodeIndex b = 0; b < n; ++b) {
                if (a == b || !g.has_undirected(a, b)) {
                    continue;
                }
                bool orient = false;
                // R1: c -> a - b with c, b non-adjacent.
                for (NodeIndex c = 0; c < n && !orient; ++c) {
                    orient = c != b && g.has_directed(c, a) && !g.adjacent(c, b);
                }
                // R2: a -> c -> b with a - b.
                for (NodeIndex c = 0; c < n && !orient; ++c) {
                    orient = g.has_directed(a, c) && g.has_directed(c, b);
                }
                // R3: a - c -> b, a - d -> b, c and d non-adjacent.
                for (NodeIndex c = 0; c < n && !orient; ++c) {
                    if (!g.has_undirected(a, c) || !g.has_directed(c, b)) {
                        continue;
                    }
                    for (NodeIndex d = c + 1; d < n && !orient; ++d) {
                        orient = g.has_undirected(a, d) && g.has_directed(d, b) && !g.adjacent(c, d);
                    }
                }
                if (orient) {
                    g.set_edge(a, b, Mark::Tail, Mark::Arrow);
                    changed = true;
                }
            }
        }
    }
}

MixedGraph dag_to_cpdag(const Dag& d) {
    MixedGraph out = skeleton(d.graph());
    for (const auto& v : v_structures(d.graph())) {
        out.set_edge(v.x, v.z, Mark::Tail, Mark::Arrow);
        out.set_edge(v.y, v.z, Mark::Tail, Mark::Arrow);
    }
    apply_orientation_rules(out);
    return out;
}

Dag pdag_to_dag_extension(const MixedGraph& pdag) {
    const auto n = static_cast<NodeIndex>(pdag.size());
    for (const auto& e : pdag.edges()) {
        const auto rel = relation(pdag, e.a, e.b);
        if (e.mark_at_a == Mark::Circle || e.mark_at_b == Mark::Circle || rel == EdgeRelation::Bidirected) {
            throw Error(ErrorCode::InvalidArgument, "extension accepts directed and undirected edges only");
        }
    }
    MixedGraph work = pdag;
    MixedGraph result = pdag;
    std::vector<bool> alive(pdag.size(), true);
    for (NodeIndex remaining = n; remaining > 0; --remaining) {
        NodeIndex sink = -1;
        // Highest eligible index first, so undirected edges point low -> high.
        for (NodeIndex x = n - 1; x >= 0 && sink < 0; --x) {
            if (!alive[static_cast<std::size_t>(x)] || !work.children(x).empty()) {
                continue;
            }
            const auto adj = work.neighbors(x);
            bool ok = true;
            for (auto y : adj) {
                if (!work.has_undirected(x, y)) {
                    continue;
                }
                for (auto other : adj) {
                    if (other != y && !work.adjacent(y, other)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) {
                    break;
                }
            }
            if (ok) {
                sink = x;
            }
        }
        if (sink < 0) {
            throw Error(ErrorCode::NotExtendable, "PDAG admits no consistent DAG extension");
        }
        for (auto y : work.neighbors(sink)) {
            if (work.has_undirected(sink, y)) {
                result.set_edge(y, sink, Mark::Tail, Mark::Arrow);
            }
            work.remove_edge(sink, y);
        }
        alive[static_cast<std::size_t>(sink)] = false;
    }
    return Dag(std::move(result));
}

std::size_t disjoint_subgraph_count(const MixedGraph& g, bool count_isolated) {
    std::vector<std::size_t> parent(g.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto root = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    std::vector<std::size_t> degree(g.size(), 0);
    for (const auto& e : g.edges()) {
        const auto a = static_cast<std::size_t>(e.a);
        const auto b = static_cast<std::size_t>(e.b);
        ++degree[a];
        ++degree[b];
        parent[root(a)] = root(b);
    }
    std::size_t count = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (root(v) == v && (count_isolated || degree[v] > 0)) {
            ++count;
        }
    }
    return count;
}

DegreeStats degree_stats(const MixedGraph& g) {
    DegreeStats s;
    s.edge_count = g.edge_count();
    std::vector<std::size_t> in(g.size(), 0), out(g.size(), 0), all(g.size(), 0);
    for (const auto& e : g.edges()) {
        const auto a = static_cast<std::size_t>(e.a);
        const auto b = static_cast<std::size_t>(e.b);
        ++all[a];
        ++all[b];
        switch (relation(g, e.a, e.b)) {
        case EdgeRelation::Forward:
            ++out[a];
            ++in[b];
            break;
        case EdgeRelation::Backward:
            ++out[b];
            ++in[a];
            break;
        default:
            break;
        }
    }
    for (std::size_t v = 0; v < g.size(); ++v) {
        s.max_in_degree = std::max(s.max_in_degree, in[v]);
        s.max_out_degree = std::max(s.max_out_degree, out[v]);
        s.max_degree = std::max(s.max_degree, all[v]);
    }
    return s;
}

MixedGraph map_circle_marks(const MixedGraph& g) {
    MixedGraph out(g.labels());
    for (const auto& e : g.edges()) {
        switch (relation(g, e.a, e.b)) {
        case EdgeRelation::Forward:
            out.add_directed(e.a, e.b);
            break;
        case EdgeRelation::Backward:
            out.add_directed(e.b, e.a);
            break;
        case EdgeRelation::Undirected:
            out.add_undirected(e.a, e.b);
            break;
        case EdgeRelation::Bidirected:
            out.add_bidirected(e.a, e.b);
            break;
        case EdgeRelation::None:
            break;
        }
    }
    return out;
}

MixedGraph reorder_nodes(const MixedGraph& g, const std::vector<std::string>& labels) {
    if (labels.size() != g.size()) {
        throw Error(ErrorCode::NodeUniverseMismatch, "graphs have different node counts");
    }
    MixedGraph out(labels);
    std::vector<NodeIndex> map(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto v = out.find(g.label(static_cast<NodeIndex>(i)));
        if (!v) {
            throw Error(ErrorCode::NodeUniverseMismatch, "node '" + g.label(static_cast<NodeIndex>(i)) +
                                                             "' missing from target universe");
        }
        map[i] = *v;
    }
    for (const auto& e : g.edges()) {
        out.add_edge(map[static_cast<std::size_t>(e.a)], map[static_cast<std::size_t>(e.b)], e.mark_at_a,
                     e.mark_at_b);
    }
    return out;
}

}  // namespace causalwb
