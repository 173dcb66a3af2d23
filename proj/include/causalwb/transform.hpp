#ifndef CAUSALWB_TRANSFORM_HPP
#define CAUSALWB_TRANSFORM_HPP

#include <string>
#include <vector>

#include "causalwb/dataset.hpp"
#include "causalwb/graph.hpp"

namespace causalwb {

enum class DiscretizationMethod { Quartile, KMeans };

struct DiscretizationSpec {
    DiscretizationMethod method = DiscretizationMethod::Quartile;
    int k = 4;
    /// Empty means default_state_labels(k).
    std::vector<std::string> state_labels;

    std::vector<std::string> labels() const;
};

/// Very_Low, Low, High, Very_High for k = 4; S1..Sk otherwise.
std::vector<std::string> default_state_labels(int k);

/// Rank-based binning: value v goes to floor(k * rank(v) / n) where rank(v)
/// counts non-missing values strictly below v, so ties fall to the lower bin.
CategoricalColumn discretize_quartiles(const ContinuousColumn& c, const DiscretizationSpec& spec = {});

/// One-dimensional k-means; clusters are labelled by ascending centroid.
CategoricalColumn discretize_kmeans(const ContinuousColumn& c, const DiscretizationSpec& spec = {});

struct KMeansResult {
    std::vector<double> centroids;  // ascending
    std::vector<int> assignment;    // per input value, in input order
};

/// Exact one-dimensional k-means: the partition of the sorted values into k
/// contiguous groups with the least within-group sum of squares, found by
/// dynamic programming. Throws Error(TooFewDistinctValues) below k distinct values.
KMeansResult kmeans_1d(const std::vector<double>& values, int k);

CategoricalColumn discretize(const ContinuousColumn& c, const DiscretizationSpec& spec);
/// Discretize every continuous column; categorical columns pass through.
Table discretize_table(const Table& t, const DiscretizationSpec& spec);

/// State i of s maps to i / (s - 1).
ContinuousColumn encode_ordinal_to_unit(const CategoricalColumn& c);
Table encode_table(const Table& t);

enum class ImputeStrategy { Mode, ParentConditionalMode };

/// Fill every missing cell. ParentConditionalMode uses the directed parents in
/// `graph` (matched by label) and falls back to the column mode whenever a
/// parent is missing in that row or the parent configuration was never seen.
CategoricalDataset impute_missing(const CategoricalDataset& d, ImputeStrategy strategy,
                                  const MixedGraph* graph = nullptr);

}  // namespace causalwb

#endif  // CAUSALWB_TRANSFORM_HPP
