#ifndef CAUSALWB_SEARCH_HPP
#define CAUSALWB_SEARCH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "causalwb/dataset.hpp"
#include "causalwb/graph.hpp"
#include "causalwb/parallel.hpp"
#include "causalwb/score.hpp"

namespace causalwb {

struct SearchConfig {
    std::size_t max_iterations = 10000;
    std::size_t tabu_length = 10;
    /// TABU stops after this many moves without a new best; 0 means tabu_length.
    std::size_t max_no_improvement = 0;
    std::optional<std::size_t> max_parents;
    std::uint64_t seed = 0;
    Execution execution = Execution::Parallel;
};

enum class MoveKind : std::uint8_t { Add = 0, Delete = 1, Reverse = 2 };

/// Add/delete parent -> child, or reverse the existing arc parent -> child.
struct Move {
    MoveKind kind;
    NodeIndex child;
    NodeIndex parent;

    friend auto operator<=>(const Move&, const Move&) = default;
};

struct ScoredMove {
    Move move;
    double gain = 0.0;
};

struct SearchResult {
    Dag dag;
    double score = 0.0;
    /// BIC after each accepted move, starting with the empty graph.
    std::vector<double> trajectory;
    std::size_t iterations = 0;
};

/// Mutable parent-set view of a DAG used by the local searches.
class SearchState {
public:
    explicit SearchState(std::size_t nodes);

    std::size_t size() const noexcept { return parents_.size(); }
    bool has_arc(NodeIndex from, NodeIndex to) const;
    const std::vector<std::size_t>& parents(NodeIndex v) const { return parents_[static_cast<std::size_t>(v)]; }
    void apply(const Move& m);

    /// Every add/delete/reverse move whose result stays acyclic and within max_parents,
    /// in (kind, child, parent) order.
    std::vector<Move> legal_moves(std::optional<std::size_t> max_parents) const;

    /// Order-free hash of the arc set after applying `m` (or of the current set).
    std::uint64_t signature() const noexcept { return signature_; }
    std::uint64_t signature_after(const Move& m) const;

    Dag to_dag(const std::vector<std::string>& labels) const;

private:
    std::uint64_t arc_hash(NodeIndex from, NodeIndex to) const;
    void add_arc(NodeIndex from, NodeIndex to);
    void remove_arc(NodeIndex from, NodeIndex to);

    std::vector<std::vector<std::size_t>> parents_;
    std::vector<char> arc_;
    std::uint64_t signature_ = 0;
};

/// Score change of each move against `state`; OpenMP across moves when requested.
std::vector<ScoredMove> score_moves(const SearchState& state, const std::vector<Move>& moves, ScoreCache& cache,
                                    Execution execution);

/// Greedy BIC ascent from the empty graph: apply the best improving move
/// until none improves. Ties go to the smallest (kind, child, parent).
SearchResult hill_climb(const CategoricalDataset& data, const SearchConfig& cfg = {});

/// Hill climbing that also accepts the best non-improving move, forbids moves
/// back into the last `tabu_length` visited graphs, and returns the best DAG seen.
SearchResult tabu_search(const CategoricalDataset& data, const SearchConfig& cfg = {});

}  // namespace causalwb

#endif  // CAUSALWB_SEARCH_HPP
