#include "causalwb/search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "causalwb/errors.hpp"

namespace causalwb {

namespace {

// Two gains closer than this are treated as tied and resolved by move order.
constexpr double kTieTolerance = 1e-9;
// A hill-climbing step must improve the score by more than this.
constexpr double kMinGain = 1e-9;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

bool beats(double gain, double best) {
    return gain > best + kTieTolerance * std::max(1.0, std::abs(best));
}

}  // namespace

SearchState::SearchState(std::size_t nodes) : parents_(nodes), arc_(nodes * nodes, 0) {}

bool SearchState::has_arc(NodeIndex from, NodeIndex to) const {
    return arc_[static_cast<std::size_t>(from) * size() + static_cast<std::size_t>(to)] != 0;
}

std::uint64_t SearchState::arc_hash(NodeIndex from, NodeIndex to) const {
    return splitmix(static_cast<std::uint64_t>(from) * size() + static_cast<std::uint64_t>(to));
}

void SearchState::add_arc(NodeIndex from, NodeIndex to) {
    auto& pa = parents_[static_cast<std::size_t>(to)];
    pa.insert(std::lower_bound(pa.begin(), pa.end(), static_cast<std::size_t>(from)), static_cast<std::size_t>(from));
    arc_[static_cast<std::size_t>(from) * size() + static_cast<std::size_t>(to)] = 1;
    signature_ ^= arc_hash(from, to);
}

void SearchState::remove_arc(NodeIndex from, NodeIndex to) {
    auto& pa = parents_[static_cast<std::size_t>(to)];
    pa.erase(std::find(pa.begin(), pa.end(), static_cast<std::size_t>(from)));
    arc_[static_cast<std::size_t>(from) * size() + static_cast<std::size_t>(to)] = 0;
    signature_ ^= arc_hash(from, to);
}

void SearchState::apply(const Move& m) {
    switch (m.kind) {
    case MoveKind::Add:
        add_arc(m.parent, m.child);
        break;
    case MoveKind::Delete:
        remove_arc(m.parent, m.child);
        break;
    case MoveKind::Reverse:
        remove_arc(m.parent, m.child);
        add_arc(m.child, m.parent);
        break;
    }
}

std::uint64_t SearchState::signature_after(const Move& m) const {
    switch (m.kind) {
    case MoveKind::Add:
    case MoveKind::Delete:
        return signature_ ^ arc_hash(m.parent, m.child);
    case MoveKind::Reverse:
        return signature_ ^ arc_hash(m.parent, m.child) ^ arc_hash(m.child, m.parent);
    }
    return signature_;
}

std::vector<Move> SearchState::legal_moves(std::optional<std::size_t> max_parents) const {
    const auto n = size();
    // reach[a * n + b]: a directed path of length >= 1 from a to b.
    std::vector<char> reach(n * n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> stack{s};
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (std::size_t c = 0; c < n; ++c) {
                if (arc_[v * n + c] && !reach[s * n + c]) {
                    reach[s * n + c] = 1;
                    stack.push_back(c);
                }
            }
        }
    }
    auto room = [&](std::size_t v) { return !max_parents || parents_[v].size() < *max_parents; };

    std::vector<Move> moves;
    for (std::size_t child = 0; child < n; ++child) {
        for (std::size_t parent = 0; parent < n; ++parent) {
            if (parent == child || arc_[parent * n + child] || arc_[child * n + parent]) {
                continue;
            }
            if (room(child) && !reach[child * n + parent]) {
                moves.push_back({MoveKind::Add, static_cast<NodeIndex>(child), static_cast<NodeIndex>(parent)});
            }
        }
    }
    for (std::size_t child = 0; child < n; ++child) {
        for (auto parent : parents_[child]) {
            moves.push_back({MoveKind::Delete, static_cast<NodeIndex>(child), static_cast<NodeIndex>(parent)});
        }
    }
    for (std::size_t child = 0; child < n; ++child) {
        for (auto parent : parents_[child]) {
            if (!room(parent)) {
                continue;
            }
            // Reversal closes a cycle iff another path parent ~> child exists.
            bool other_path = false;
            for (std::size_t c = 0; c < n && !other_path; ++c) {
                other_path = c != child && arc_[parent * n + c] && reach[c * n + child];
            }
            if (!other_path) {
                moves.push_back({MoveKind::Reverse, static_cast<NodeIndex>(child), static_cast<NodeIndex>(parent)});
            }
        }
    }
    return moves;
}

Dag SearchState::to_dag(const std::vector<std::string>& labels) const {
    MixedGraph g(labels);
    for (std::size_t child = 0; child < size(); ++child) {
        for (auto p : parents_[child]) {
            g.add_directed(static_cast<NodeIndex>(p), static_cast<NodeIndex>(child));
        }
    }
    return Dag(std::move(g));
}

namespace {

double move_gain(const SearchState& state, const Move& m, ScoreCache& cache) {
    const auto child = static_cast<std::size_t>(m.child);
    const auto parent = static_cast<std::size_t>(m.parent);
    const auto& pa = state.parents(m.child);
    auto without = [](std::vector<std::size_t> v, std::size_t x) {
        v.erase(std::find(v.begin(), v.end(), x));
        return v;
    };
    auto with = [](std::vector<std::size_t> v, std::size_t x) {
        v.insert(std::lower_bound(v.begin(), v.end(), x), x);
        return v;
    };
    switch (m.kind) {
    case MoveKind::Add:
        return cache.local(child, with(pa, parent)) - cache.local(child, pa);
    case MoveKind::Delete:
        return cache.local(child, without(pa, parent)) - cache.local(child, pa);
    case MoveKind::Reverse: {
        const auto& ppa = state.parents(m.parent);
        return (cache.local(child, without(pa, parent)) - cache.local(child, pa)) +
               (cache.local(parent, with(ppa, child)) - cache.local(parent, ppa));
    }
    }
    return 0.0;
}

double total_score(const SearchState& state, ScoreCache& cache) {
    double total = 0.0;
    for (std::size_t v = 0; v < state.size(); ++v) {
        total += cache.local(v, state.parents(static_cast<NodeIndex>(v)));
    }
    return total;
}

void validate(const CategoricalDataset& data, const SearchConfig& cfg) {
    if (!data.complete()) {
        throw Error(ErrorCode::InvalidArgument, "structure search requires complete data");
    }
    if (cfg.max_parents && *cfg.max_parents == 0) {
        throw Error(ErrorCode::InvalidArgument, "max_parents must be positive");
    }
    if (cfg.tabu_length == 0) {
        throw Error(ErrorCode::InvalidArgument, "tabu list length must be positive");
    }
}

}  // namespace

std::vector<ScoredMove> score_moves(const SearchState& state, const std::vector<Move>& moves, ScoreCache& cache,
                                    Execution execution) {
    std::vector<ScoredMove> out(moves.size());
    const auto count = static_cast<std::ptrdiff_t>(moves.size());
    if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto& m = moves[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(i)] = {m, move_gain(state, m, cache)};
        }
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto& m = moves[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(i)] = {m, move_gain(state, m, cache)};
        }
    }
    return out;
}

SearchResult hill_climb(const CategoricalDataset& data, const SearchConfig& cfg) {
    validate(data, cfg);
    ScoreCache cache(data);
    SearchState state(data.cols());
    SearchResult res;
    res.trajectory.push_back(total_score(state, cache));

    while (res.iterations < cfg.max_iterations) {
        const auto scored = score_moves(state, state.legal_moves(cfg.max_parents), cache, cfg.execution);
        const ScoredMove* best = nullptr;
        // Moves arrive in (kind, child, parent) order, so the first of a tie wins.
        for (const auto& sm : scored) {
            if (best == nullptr || beats(sm.gain, best->gain)) {
                best = &sm;
            }
        }
        if (best == nullptr || best->gain <= kMinGain) {
            break;
        }
        state.apply(best->move);
        ++res.iterations;
        res.trajectory.push_back(total_score(state, cache));
    }
    res.score = res.trajectory.back();
    res.dag = state.to_dag(data.names());
    return res;
}

SearchResult tabu_search(const CategoricalDataset& data, const SearchConfig& cfg) {
    validate(data, cfg);
    const auto patience = cfg.max_no_improvement > 0 ? cfg.max_no_improvement : cfg.tabu_length;
    ScoreCache cache(data);
    SearchState state(data.cols());
    SearchResult res;
    res.trajectory.push_back(total_score(state, cache));

    std::deque<std::uint64_t> tabu{state.signature()};
    SearchState best_state = state;
    double best_score = res.trajectory.back();
    std::size_t stale = 0;

    while (res.iterations < cfg.max_iterations && stale < patience) {
        const auto scored = score_moves(state, state.legal_moves(cfg.max_parents), cache, cfg.execution);
        const ScoredMove* best = nullptr;
        for (const auto& sm : scored) {
            const auto sig = state.signature_after(sm.move);
            if (std::find(tabu.begin(), tabu.end(), sig) != tabu.end()) {
                continue;
            }
            if (best == nullptr || beats(sm.gain, best->gain)) {
                best = &sm;
            }
        }
        if (best == nullptr) {
            break;
        }
        state.apply(best->move);
        ++res.iterations;
        tabu.push_back(state.signature());
        while (tabu.size() > cfg.tabu_length) {
            tabu.pop_front();
        }
        const double score = total_score(state, cache);
        res.trajectory.push_back(score);
        stale = score > best_score + kMinGain ? 0 : stale + 1;
        if (score > best_score) {
            best_score = score;
            best_state = state;
        }
    }
    res.score = best_score;
    res.dag = best_state.to_dag(data.names());
    return res;
}

}  // namespace causalwb
