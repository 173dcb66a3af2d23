#ifndef CAUSALWB_CROSS_VALIDATION_HPP
#define CAUSALWB_CROSS_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "causalwb/dataset.hpp"
#include "causalwb/graph.hpp"
#include "causalwb/parallel.hpp"

namespace causalwb {

struct CvConfig {
    std::size_t k = 10;
    std::uint64_t seed = 0;
    double alpha_smooth = 1.0;
    Execution execution = Execution::Parallel;
};

struct CvResult {
    std::vector<std::string> nodes;
    std::vector<double> node_accuracy;  // mean over folds, DAG node order
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Row indices shuffled by `seed` and cut into k contiguous folds whose sizes
/// differ by at most one.
std::vector<std::vector<std::size_t>> kfold_partition(std::size_t rows, std::size_t k, std::uint64_t seed);

/// Per fold: fit CPTs on the training rows, then predict every node of every
/// test row as the argmax of P(node | all other nodes).
CvResult cross_validate(const Dag& d, const CategoricalDataset& data, const CvConfig& cfg = {});

}  // namespace causalwb

#endif  // CAUSALWB_CROSS_VALIDATION_HPP
