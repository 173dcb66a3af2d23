#include "causalwb/cross_validation.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <random>

#include "causalwb/bn.hpp"
#include "causalwb/errors.hpp"
#include "causalwb/inference.hpp"
#include "causalwb/score.hpp"

namespace causalwb {

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t rows, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw Error(ErrorCode::InvalidArgument, "cross-validation needs k >= 2");
    }
    if (rows < k) {
        throw Error(ErrorCode::InsufficientData, "fewer rows than folds");
    }
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = rows; i-- > 1;) {
        std::swap(order[i], order[static_cast<std::size_t>(rng() % (i + 1))]);
    }
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t at = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = rows / k + (f < rows % k ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(at),
                        order.begin() + static_cast<std::ptrdiff_t>(at + len));
        at += len;
    }
    return folds;
}

namespace {

// Correct predictions per node on one fold.
std::vector<double> fold_accuracy(const Dag& d, const CategoricalDataset& data,
                                  const std::vector<std::vector<std::size_t>>& folds, std::size_t f,
                                  double alpha) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < folds.size(); ++g) {
        if (g != f) {
            train.insert(train.end(), folds[g].begin(), folds[g].end());
        }
    }
    std::sort(train.begin(), train.end());
    const auto bn = fit_cpts(d, data.select_rows(train), alpha);
    const auto n = d.size();
    std::vector<double> hits(n, 0.0);
    std::vector<int> assignment(n);
    for (auto row : folds[f]) {
        for (std::size_t v = 0; v < n; ++v) {
            assignment[v] = data.value(row, v);
        }
        for (std::size_t v = 0; v < n; ++v) {
            const auto post = posterior_given_rest(bn, static_cast<NodeIndex>(v), assignment);
            const auto guess = std::max_element(post.begin(), post.end()) - post.begin();
            if (guess == assignment[v]) {
                hits[v] += 1.0;
            }
        }
    }
    for (auto& h : hits) {
        h /= static_cast<double>(folds[f].size());
    }
    return hits;
}

}  // namespace

CvResult cross_validate(const Dag& d, const CategoricalDataset& data, const CvConfig& cfg) {
    const auto aligned = align_columns(data, d);
    if (!aligned.complete()) {
        throw Error(ErrorCode::InvalidArgument, "cross-validation requires complete data");
    }
    const auto folds = kfold_partition(aligned.rows(), cfg.k, cfg.seed);
    std::vector<std::vector<double>> per_fold(folds.size());
    const auto count = static_cast<std::ptrdiff_t>(folds.size());
    if (cfg.execution == Execution::Parallel) {
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t f = 0; f < count; ++f) {
            try {
                per_fold[static_cast<std::size_t>(f)] =
                    fold_accuracy(d, aligned, folds, static_cast<std::size_t>(f), cfg.alpha_smooth);
            } catch (...) {
#pragma omp critical(causalwb_cv_failure)
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    } else {
        for (std::ptrdiff_t f = 0; f < count; ++f) {
            per_fold[static_cast<std::size_t>(f)] =
                fold_accuracy(d, aligned, folds, static_cast<std::size_t>(f), cfg.alpha_smooth);
        }
    }

    CvResult out;
    out.nodes = d.labels();
    out.node_accuracy.assign(d.size(), 0.0);
    for (const auto& acc : per_fold) {
        for (std::size_t v = 0; v < acc.size(); ++v) {
            out.node_accuracy[v] += acc[v];
        }
    }
    for (auto& a : out.node_accuracy) {
        a /= static_cast<double>(folds.size());
    }
    if (!out.node_accuracy.empty()) {
        out.mean = std::accumulate(out.node_accuracy.begin(), out.node_accuracy.end(), 0.0) /
                   static_cast<double>(out.node_accuracy.size());
        const auto [lo, hi] = std::minmax_element(out.node_accuracy.begin(), out.node_accuracy.end());
        out.min = *lo;
        out.max = *hi;
    }
    return out;
}

}  // namespace causalwb
