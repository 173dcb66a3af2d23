#include "contingency.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "causalwb/errors.hpp"

namespace causalwb::detail {

CompactConfigs compact_configs(const CategoricalDataset& d, std::span<const std::size_t> cols) {
    CompactConfigs out;
    const auto n = d.rows();
    out.id.assign(n, 0);
    if (cols.empty()) {
        out.count = n > 0 ? 1 : 0;
        return out;
    }

    std::uint64_t space = 1;
    bool overflow = false;
    for (auto c : cols) {
        const auto r = static_cast<std::uint64_t>(d.arity(c));
        if (space > std::numeric_limits<std::uint64_t>::max() / r) {
            overflow = true;
            break;
        }
        space *= r;
    }

    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
    if (!overflow && space <= std::max<std::uint64_t>(1u << 16, 4 * n)) {
        std::vector<std::uint32_t> dense(static_cast<std::size_t>(space), kUnset);
        for (std::size_t row = 0; row < n; ++row) {
            std::uint64_t key = 0;
            for (auto c : cols) {
                key = key * d.arity(c) + static_cast<std::uint64_t>(d.value(row, c));
            }
            auto& slot = dense[static_cast<std::size_t>(key)];
            if (slot == kUnset) {
                slot = static_cast<std::uint32_t>(out.count++);
            }
            out.id[row] = slot;
        }
        return out;
    }

    // Sparse path: hash the per-row value tuple.
    struct TupleHash {
        std::size_t operator()(const std::vector<int>& v) const noexcept {
            std::uint64_t h = 1469598103934665603ull;
            for (int x : v) {
                h = (h ^ static_cast<std::uint64_t>(x + 1)) * 1099511628211ull;
            }
            return static_cast<std::size_t>(h);
        }
    };
    std::unordered_map<std::vector<int>, std::uint32_t, TupleHash> ids;
    std::vector<int> key(cols.size());
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            key[i] = d.value(row, cols[i]);
        }
        auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(out.count));
        if (inserted) {
            ++out.count;
        }
        out.id[row] = it->second;
    }
    return out;
}

}  // namespace causalwb::detail
