#include "causalwb/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "causalwb/errors.hpp"

namespace causalwb {

std::vector<std::string> default_state_labels(int k) {
    if (k == 4) {
        return {"Very_Low", "Low", "High", "Very_High"};
    }
    std::vector<std::string> out;
    for (int i = 1; i <= k; ++i) {
        out.push_back("S" + std::to_string(i));
    }
    return out;
}

std::vector<std::string> DiscretizationSpec::labels() const {
    if (k < 2) {
        throw Error(ErrorCode::InvalidArgument, "discretization needs k >= 2");
    }
    if (state_labels.empty()) {
        return default_state_labels(k);
    }
    if (state_labels.size() != static_cast<std::size_t>(k)) {
        throw Error(ErrorCode::InvalidArgument, "state label count must equal k");
    }
    return state_labels;
}

namespace {

std::vector<double> observed(const ContinuousColumn& c) {
    std::vector<double> out;
    out.reserve(c.values.size());
    for (const auto& v : c.values) {
        if (v) {
            out.push_back(*v);
        }
    }
    return out;
}

std::size_t distinct_count(std::vector<double> sorted) {
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

}  // namespace

CategoricalColumn discretize_quartiles(const ContinuousColumn& c, const DiscretizationSpec& spec) {
    const auto labels = spec.labels();
    const auto k = static_cast<std::size_t>(spec.k);
    auto values = observed(c);
    if (values.size() < k) {
        throw Error(ErrorCode::DegenerateColumn, "column '" + c.name + "' has fewer than " +
                                                     std::to_string(k) + " observed values");
    }
    if (distinct_count(values) < 2) {
        throw Error(ErrorCode::DegenerateColumn, "column '" + c.name + "' has fewer than 2 distinct values");
    }
    std::sort(values.begin(), values.end());
    const auto n = values.size();

    CategoricalColumn out{c.name, labels, {}};
    out.values.reserve(c.values.size());
    for (const auto& v : c.values) {
        if (!v) {
            out.values.push_back(kMissing);
            continue;
        }
        const auto rank = static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), *v) - values.begin());
        out.values.push_back(static_cast<int>(std::min(k - 1, (k * rank) / n)));
    }
    return out;
}

KMeansResult kmeans_1d(const std::vector<double>& values, int k) {
    if (k < 2) {
        throw Error(ErrorCode::InvalidArgument, "k-means needs k >= 2");
    }
    auto distinct = values;
    std::sort(distinct.begin(), distinct.end());
    std::vector<double> weight;
    {
        std::size_t w = 0;
        for (std::size_t i = 0; i < distinct.size(); ++i) {
            if (w > 0 && distinct[i] == distinct[w - 1]) {
                weight[w - 1] += 1.0;
            } else {
                distinct[w++] = distinct[i];
                weight.push_back(1.0);
            }
        }
        distinct.resize(w);
    }
    const auto kk = static_cast<std::size_t>(k);
    const auto n = distinct.size();
    if (n < kk) {
        throw Error(ErrorCode::TooFewDistinctValues,
                    std::to_string(n) + " distinct values for k = " + std::to_string(k));
    }

    // Prefix sums over values centred on the median keep the SSE differences accurate.
    const long double shift = distinct[n / 2];
    std::vector<long double> sw(n + 1, 0.0L), sx(n + 1, 0.0L), sxx(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        const long double x = distinct[i] - shift;
        sw[i + 1] = sw[i] + weight[i];
        sx[i + 1] = sx[i] + weight[i] * x;
        sxx[i + 1] = sxx[i] + weight[i] * x * x;
    }
    // Within-cluster sum of squares of distinct values j..i.
    auto cost = [&](std::size_t j, std::size_t i) -> long double {
        const long double w = sw[i + 1] - sw[j];
        const long double s = sx[i + 1] - sx[j];
        const long double c = sxx[i + 1] - sxx[j] - s * s / w;
        return c < 0.0L ? 0.0L : c;
    };

    // best[m][i]: optimal cost of m + 1 clusters over values 0..i; start[m][i]
    // is where the last cluster begins. The optimal start is monotone in i, so
    // each layer is filled by divide and conquer.
    std::vector<std::vector<long double>> best(kk, std::vector<long double>(n, 0.0L));
    std::vector<std::vector<std::size_t>> start(kk, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        best[0][i] = cost(0, i);
    }
    for (std::size_t m = 1; m < kk; ++m) {
        auto fill = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t opt_lo, std::size_t opt_hi) -> void {
            if (lo > hi) {
                return;
            }
            const std::size_t i = lo + (hi - lo) / 2;
            std::size_t arg = std::max(opt_lo, m);
            long double val = std::numeric_limits<long double>::infinity();
            for (std::size_t j = std::max(opt_lo, m); j <= std::min(i, opt_hi); ++j) {
                const long double v = best[m - 1][j - 1] + cost(j, i);
                if (v < val) {
                    val = v;
                    arg = j;
                }
            }
            best[m][i] = val;
            start[m][i] = arg;
            if (i > lo) {
                self(self, lo, i - 1, opt_lo, arg);
            }
            self(self, i + 1, hi, arg, opt_hi);
        };
        fill(fill, m, n - 1, m, n - 1);
    }

    std::vector<int> cluster_of(n, 0);
    std::vector<std::size_t> first(kk, 0);
    std::size_t end = n - 1;
    for (std::size_t m = kk; m-- > 0;) {
        const std::size_t j = m == 0 ? 0 : start[m][end];
        first[m] = j;
        for (std::size_t i = j; i <= end; ++i) {
            cluster_of[i] = static_cast<int>(m);
        }
        if (m > 0) {
            end = j - 1;
        }
    }

    KMeansResult res;
    res.centroids.resize(kk);
    for (std::size_t m = 0; m < kk; ++m) {
        const std::size_t last = m + 1 < kk ? first[m + 1] - 1 : n - 1;
        res.centroids[m] = static_cast<double>(shift + (sx[last + 1] - sx[first[m]]) / (sw[last + 1] - sw[first[m]]));
    }
    res.assignment.reserve(values.size());
    for (double v : values) {
        const auto i = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), v) - distinct.begin());
        res.assignment.push_back(cluster_of[i]);
    }
    return res;
}

CategoricalColumn discretize_kmeans(const ContinuousColumn& c, const DiscretizationSpec& spec) {
    const auto labels = spec.labels();
    const auto values = observed(c);
    KMeansResult km;
    try {
        km = kmeans_1d(values, spec.k);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TooFewDistinctValues) {
            throw Error(ErrorCode::TooFewDistinctValues, "column '" + c.name + "': " + e.what());
        }
        throw;
    }
    CategoricalColumn out{c.name, labels, {}};
    out.values.reserve(c.values.size());
    std::size_t next = 0;
    for (const auto& v : c.values) {
        out.values.push_back(v ? km.assignment[next++] : kMissing);
    }
    return out;
}

CategoricalColumn discretize(const ContinuousColumn& c, const DiscretizationSpec& spec) {
    return spec.method == DiscretizationMethod::Quartile ? discretize_quartiles(c, spec)
                                                         : discretize_kmeans(c, spec);
}

Table discretize_table(const Table& t, const DiscretizationSpec& spec) {
    Table out;
    out.columns.resize(t.columns.size());
    // Columns are independent.
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (const auto* cont = std::get_if<ContinuousColumn>(&t.columns[i])) {
            out.columns[i] = discretize(*cont, spec);
        } else {
            out.columns[i] = t.columns[i];
        }
    }
    return out;
}

ContinuousColumn encode_ordinal_to_unit(const CategoricalColumn& c) {
    const auto s = c.arity();
    if (s < 2) {
        throw Error(ErrorCode::SingleState, "column '" + c.name + "' has fewer than 2 states");
    }
    ContinuousColumn out{c.name, {}};
    out.values.reserve(c.values.size());
    for (int v : c.values) {
        if (v == kMissing) {
            out.values.emplace_back(std::nullopt);
        } else {
            out.values.emplace_back(static_cast<double>(v) / static_cast<double>(s - 1));
        }
    }
    return out;
}

Table encode_table(const Table& t) {
    Table out;
    for (const auto& c : t.columns) {
        if (const auto* cat = std::get_if<CategoricalColumn>(&c)) {
            out.columns.emplace_back(encode_ordinal_to_unit(*cat));
        } else {
            out.columns.push_back(c);
        }
    }
    return out;
}

namespace {

int argmax_lowest(const std::vector<std::size_t>& counts) {
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

}  // namespace

CategoricalDataset impute_missing(const CategoricalDataset& d, ImputeStrategy strategy, const MixedGraph* graph) {
    std::vector<std::vector<std::size_t>> parents(d.cols());
    if (strategy == ImputeStrategy::ParentConditionalMode) {
        if (graph == nullptr) {
            throw Error(ErrorCode::InvalidArgument, "parent-conditional imputation needs a graph");
        }
        for (std::size_t c = 0; c < d.cols(); ++c) {
            const auto v = graph->find(d.column(c).name);
            if (!v) {
                throw Error(ErrorCode::NodeUniverseMismatch, "graph has no node '" + d.column(c).name + "'");
            }
            for (auto p : graph->parents(*v)) {
                const auto col = d.find(graph->label(p));
                if (!col) {
                    throw Error(ErrorCode::NodeUniverseMismatch, "dataset has no column '" + graph->label(p) + "'");
                }
                parents[c].push_back(*col);
            }
        }
    }

    std::vector<CategoricalColumn> out = d.columns();
    for (std::size_t c = 0; c < d.cols(); ++c) {
        const auto& col = d.column(c);
        if (col.missing_count() == 0) {
            continue;
        }
        if (col.missing_count() == d.rows()) {
            throw Error(ErrorCode::AllMissingColumn, "column '" + col.name + "' is entirely missing");
        }
        std::vector<std::size_t> counts(col.arity(), 0);
        for (int v : col.values) {
            if (v != kMissing) {
                ++counts[static_cast<std::size_t>(v)];
            }
        }
        const int mode = argmax_lowest(counts);

        // Conditional counts keyed by observed parent configuration.
        std::map<std::vector<int>, std::vector<std::size_t>> by_config;
        auto config_of = [&](std::size_t row) -> std::optional<std::vector<int>> {
            std::vector<int> cfg;
            cfg.reserve(parents[c].size());
            for (auto p : parents[c]) {
                const int v = d.value(row, p);
                if (v == kMissing) {
                    return std::nullopt;
                }
                cfg.push_back(v);
            }
            return cfg;
        };
        if (!parents[c].empty()) {
            for (std::size_t r = 0; r < d.rows(); ++r) {
                const int v = col.values[r];
                if (v == kMissing) {
                    continue;
                }
                if (auto cfg = config_of(r)) {
                    auto& row = by_config[*cfg];
                    row.resize(col.arity(), 0);
                    ++row[static_cast<std::size_t>(v)];
                }
            }
        }

        for (std::size_t r = 0; r < d.rows(); ++r) {
            if (col.values[r] != kMissing) {
                continue;
            }
            int fill = mode;
            if (!parents[c].empty()) {
                if (auto cfg = config_of(r)) {
                    if (auto it = by_config.find(*cfg); it != by_config.end()) {
                        fill = argmax_lowest(it->second);
                    }
                }
            }
            out[c].values[r] = fill;
        }
    }
    return CategoricalDataset(std::move(out));
}

}  // namespace causalwb
