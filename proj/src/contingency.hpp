#ifndef CAUSALWB_CONTINGENCY_HPP
#define CAUSALWB_CONTINGENCY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "causalwb/dataset.hpp"

namespace causalwb::detail {

/// Dense ids for the joint configurations of `cols` observed in `d`, numbered
/// by first appearance in row order.
struct CompactConfigs {
    std::vector<std::uint32_t> id;  // per row
    std::size_t count = 0;
};

CompactConfigs compact_configs(const CategoricalDataset& d, std::span<const std::size_t> cols);

}  // namespace causalwb::detail

#endif  // CAUSALWB_CONTINGENCY_HPP
