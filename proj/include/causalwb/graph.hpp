#ifndef CAUSALWB_GRAPH_HPP
#define CAUSALWB_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace causalwb {

using NodeIndex = int;

enum class Mark : std::uint8_t { Tail, Arrow, Circle };

/// An edge between nodes a and b with the mark drawn at each end.
/// Graphs hand edges out canonically (a < b); A->B is (Tail at A, Arrow at B).
struct Edge {
    NodeIndex a = 0;
    NodeIndex b = 0;
    Mark mark_at_a = Mark::Tail;
    Mark mark_at_b = Mark::Tail;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Relation between an ordered pair (a, b) after mapping circle marks:
/// o-> counts as directed and o-o as undirected.
enum class EdgeRelation : std::uint8_t { None, Forward, Backward, Undirected, Bidirected };

/// Nodes plus at most one marked edge per unordered pair. Holds DAGs, PDAGs,
/// CPDAGs and graphs with bidirected (confounding) edges.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(NodeIndex v) const { return labels_.at(static_cast<std::size_t>(v)); }
    std::optional<NodeIndex> find(std::string_view label) const;
    NodeIndex index_of(std::string_view label) const;

    void add_edge(NodeIndex a, NodeIndex b, Mark at_a, Mark at_b);
    void add_directed(NodeIndex from, NodeIndex to) { add_edge(from, to, Mark::Tail, Mark::Arrow); }
    void add_undirected(NodeIndex a, NodeIndex b) { add_edge(a, b, Mark::Tail, Mark::Tail); }
    void add_bidirected(NodeIndex a, NodeIndex b) { add_edge(a, b, Mark::Arrow, Mark::Arrow); }
    /// Replaces any existing edge between a and b.
    void set_edge(NodeIndex a, NodeIndex b, Mark at_a, Mark at_b);
    void remove_edge(NodeIndex a, NodeIndex b);

    bool adjacent(NodeIndex a, NodeIndex b) const { return raw(a, b) >= 0; }
    /// Mark drawn at `at` on the edge between `at` and `other`.
    std::optional<Mark> mark_at(NodeIndex at, NodeIndex other) const;
    /// Edge between a and b reported in query order (edge.a == a).
    std::optional<Edge> edge(NodeIndex a, NodeIndex b) const;

    bool has_directed(NodeIndex from, NodeIndex to) const;
    bool has_undirected(NodeIndex a, NodeIndex b) const;
    bool has_bidirected(NodeIndex a, NodeIndex b) const;

    std::vector<Edge> edges() const;
    std::size_t edge_count() const noexcept { return edge_count_; }
    std::vector<NodeIndex> neighbors(NodeIndex v) const;
    std::vector<NodeIndex> parents(NodeIndex v) const;
    std::vector<NodeIndex> children(NodeIndex v) const;

    bool only_directed() const;

    friend bool operator==(const MixedGraph& x, const MixedGraph& y) {
        return x.labels_ == y.labels_ && x.marks_ == y.marks_;
    }

private:
    std::int8_t raw(NodeIndex at_other, NodeIndex at) const {
        return marks_[static_cast<std::size_t>(at_other) * labels_.size() + static_cast<std::size_t>(at)];
    }
    void check_node(NodeIndex v) const;

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeIndex> index_;
    // marks_[a * V + b] is the mark at b on edge {a, b}, or -1 when absent.
    std::vector<std::int8_t> marks_;
    std::size_t edge_count_ = 0;
};

/// Classify the edge between a and b as seen from a.
EdgeRelation relation(const MixedGraph& g, NodeIndex a, NodeIndex b);

/// A MixedGraph holding only directed edges and no directed cycle.
class Dag {
public:
    Dag() = default;
    /// Throws Error(CyclicGraph) on a cycle and Error(InvalidArgument) on non-directed edges.
    explicit Dag(MixedGraph g);
    Dag(std::vector<std::string> labels, const std::vector<std::pair<NodeIndex, NodeIndex>>& arcs);

    const MixedGraph& graph() const noexcept { return graph_; }
    std::size_t size() const noexcept { return graph_.size(); }
    const std::vector<std::string>& labels() const noexcept { return graph_.labels(); }
    std::vector<NodeIndex> parents(NodeIndex v) const { return graph_.parents(v); }
    std::vector<NodeIndex> children(NodeIndex v) const { return graph_.children(v); }
    bool has_arc(NodeIndex from, NodeIndex to) const { return graph_.has_directed(from, to); }
    std::vector<std::pair<NodeIndex, NodeIndex>> arcs() const;
    std::vector<NodeIndex> topological_order() const;
    /// Ancestors of v (excluding v itself).
    std::vector<bool> ancestors(NodeIndex v) const;
    std::vector<bool> descendants(NodeIndex v) const;

    friend bool operator==(const Dag& x, const Dag& y) { return x.graph_ == y.graph_; }

private:
    MixedGraph graph_;
};

struct DegreeStats {
    std::size_t max_in_degree = 0;
    std::size_t max_out_degree = 0;
    std::size_t max_degree = 0;
    std::size_t edge_count = 0;
};

/// Vertex triple (x, z, y) with x -> z <- y and x, y non-adjacent; stored with x < y.
struct VStructure {
    NodeIndex x;
    NodeIndex z;
    NodeIndex y;

    friend auto operator<=>(const VStructure&, const VStructure&) = default;
};

/// Directed-cycle check over directed edges only; other edge kinds are ignored.
bool is_acyclic(const MixedGraph& g);

/// Would adding from -> to close a directed cycle in g?
bool creates_cycle(const MixedGraph& g, NodeIndex from, NodeIndex to);

MixedGraph skeleton(const MixedGraph& g);

/// Colliders among directed edges; valid for DAGs and for PDAGs.
std::vector<VStructure> v_structures(const MixedGraph& g);

MixedGraph dag_to_cpdag(const Dag& d);

/// Close a PDAG under the three orientation-propagation rules.
void apply_orientation_rules(MixedGraph& pdag);

/// Consistent DAG extension of a PDAG (same skeleton and v-structures).
/// Throws Error(NotExtendable) if none exists. Undirected edges are oriented
/// from lower to higher index whenever both orientations are legal.
Dag pdag_to_dag_extension(const MixedGraph& pdag);

/// Weakly connected components over all edge kinds.
std::size_t disjoint_subgraph_count(const MixedGraph& g, bool count_isolated = true);

DegreeStats degree_stats(const MixedGraph& g);

/// Circle marks replaced by what they stand for in comparisons: o-> becomes
/// a directed edge and o-o an undirected one.
MixedGraph map_circle_marks(const MixedGraph& g);

/// Relabel g so its node order matches `labels`; throws NodeUniverseMismatch.
MixedGraph reorder_nodes(const MixedGraph& g, const std::vector<std::string>& labels);

}  // namespace causalwb

#endif  // CAUSALWB_GRAPH_HPP
