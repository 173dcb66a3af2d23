#include "causalwb/score.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "causalwb/errors.hpp"
#include "contingency.hpp"

namespace causalwb {

std::uint64_t node_free_parameters(std::size_t child_arity, std::span<const std::size_t> parent_arities) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t q = 1;
    for (auto r : parent_arities) {
        if (r != 0 && q > kMax / r) {
            throw Error(ErrorCode::InvalidArgument, "free parameter count overflows 64 bits");
        }
        q *= r;
    }
    const std::uint64_t free = child_arity > 0 ? child_arity - 1 : 0;
    if (free != 0 && q > kMax / free) {
        throw Error(ErrorCode::InvalidArgument, "free parameter count overflows 64 bits");
    }
    return free * q;
}

std::uint64_t free_parameters(const Dag& d, std::span<const std::size_t> arities) {
    if (arities.size() != d.size()) {
        throw Error(ErrorCode::InvalidArgument, "arity list does not match node count");
    }
    std::uint64_t total = 0;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(d.size()); ++v) {
        std::vector<std::size_t> pa;
        for (auto p : d.parents(v)) {
            pa.push_back(arities[static_cast<std::size_t>(p)]);
        }
        const auto k = node_free_parameters(arities[static_cast<std::size_t>(v)], pa);
        if (total > std::numeric_limits<std::uint64_t>::max() - k) {
            throw Error(ErrorCode::InvalidArgument, "free parameter count overflows 64 bits");
        }
        total += k;
    }
    return total;
}

double local_log_likelihood(const CategoricalDataset& data, std::size_t child, std::span<const std::size_t> parents) {
    const auto configs = detail::compact_configs(data, parents);
    const auto r = data.arity(child);
    std::vector<std::size_t> counts(configs.count * r, 0);
    std::vector<std::size_t> totals(configs.count, 0);
    const auto& xs = data.column(child).values;
    for (std::size_t row = 0; row < data.rows(); ++row) {
        if (xs[row] == kMissing) {
            throw Error(ErrorCode::InvalidArgument, "scores require complete data");
        }
        ++counts[configs.id[row] * r + static_cast<std::size_t>(xs[row])];
        ++totals[configs.id[row]];
    }
    double ll = 0.0;
    for (std::size_t j = 0; j < configs.count; ++j) {
        const auto nj = static_cast<double>(totals[j]);
        for (std::size_t k = 0; k < r; ++k) {
            const auto njk = counts[j * r + k];
            if (njk > 0) {
                ll += static_cast<double>(njk) * std::log(static_cast<double>(njk) / nj);
            }
        }
    }
    return ll;
}

double local_bic(const CategoricalDataset& data, std::size_t child, std::span<const std::size_t> parents) {
    double q = 1.0;
    for (auto p : parents) {
        q *= static_cast<double>(data.arity(p));
    }
    const double k = (static_cast<double>(data.arity(child)) - 1.0) * q;
    const double n = static_cast<double>(data.rows());
    const double penalty = n > 0.0 ? 0.5 * std::log(n) * k : 0.0;
    return local_log_likelihood(data, child, parents) - penalty;
}

CategoricalDataset align_columns(const CategoricalDataset& data, const Dag& d) {
    if (data.names() == d.labels()) {
        return data;
    }
    return data.select_columns(d.labels());
}

namespace {

template <typename LocalFn>
double sum_local(const Dag& d, const CategoricalDataset& data, LocalFn fn) {
    const auto aligned = align_columns(data, d);
    double total = 0.0;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(d.size()); ++v) {
        std::vector<std::size_t> pa;
        for (auto p : d.parents(v)) {
            pa.push_back(static_cast<std::size_t>(p));
        }
        total += fn(aligned, static_cast<std::size_t>(v), pa);
    }
    return total;
}

}  // namespace

double log_likelihood(const Dag& d, const CategoricalDataset& data) {
    return sum_local(d, data, [](const auto& x, std::size_t c, std::span<const std::size_t> p) {
        return local_log_likelihood(x, c, p);
    });
}

double bic(const Dag& d, const CategoricalDataset& data) {
    return sum_local(d, data,
                     [](const auto& x, std::size_t c, std::span<const std::size_t> p) { return local_bic(x, c, p); });
}

std::size_t ScoreCache::KeyHash::operator()(const std::vector<std::size_t>& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : k) {
        h = (h ^ (static_cast<std::uint64_t>(x) + 1)) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

double ScoreCache::local(std::size_t child, std::span<const std::size_t> parents) {
    std::vector<std::size_t> key;
    key.reserve(parents.size() + 1);
    key.push_back(child);
    key.insert(key.end(), parents.begin(), parents.end());
    std::sort(key.begin() + 1, key.end());
    {
        std::shared_lock lock(mutex_);
        if (auto it = scores_.find(key); it != scores_.end()) {
            return it->second;
        }
    }
    const double s = local_bic(*data_, child, std::span<const std::size_t>(key).subspan(1));
    std::unique_lock lock(mutex_);
    scores_.emplace(std::move(key), s);
    return s;
}

std::size_t ScoreCache::size() const {
    std::shared_lock lock(mutex_);
    return scores_.size();
}

}  // namespace causalwb
