#ifndef CAUSALWB_INFERENCE_HPP
#define CAUSALWB_INFERENCE_HPP

#include <map>
#include <span>
#include <vector>

#include "causalwb/bn.hpp"
#include "causalwb/parallel.hpp"

namespace causalwb {

using Evidence = std::map<NodeIndex, int>;

/// Exact posterior of `target` by variable elimination over the ancestral
/// closure of the query. Throws Error(ZeroProbabilityEvidence) when P(e) = 0.
std::vector<double> marginal(const DiscreteBn& bn, NodeIndex target, const Evidence& evidence = {});

/// P(node | every other node) from the node's Markov blanket. `assignment`
/// holds a state for every node; the entry for `node` is ignored.
std::vector<double> posterior_given_rest(const DiscreteBn& bn, NodeIndex node, std::span<const int> assignment);

/// Ordinal weights used to score a distribution over a target's states.
class EffectWeights {
public:
    /// Non-decreasing, first 0, last 1.
    explicit EffectWeights(std::vector<double> weights);

    /// 0, 0.33, 0.66, 1 for four states; i / (s - 1) otherwise.
    static EffectWeights for_states(std::size_t states);

    const std::vector<double>& values() const noexcept { return w_; }
    std::size_t size() const noexcept { return w_.size(); }
    double score(std::span<const double> dist) const;

private:
    std::vector<double> w_;
};

/// |score(low) - score(high)|.
double effect_score(std::span<const double> dist_low, std::span<const double> dist_high, const EffectWeights& w);

struct InterventionEffect {
    std::vector<double> dist_low;   // target under do(node = lowest state)
    std::vector<double> dist_high;  // target under do(node = highest state)
    double effect = 0.0;
};

/// Default weights come from the target's state count.
InterventionEffect intervention_effect(const DiscreteBn& bn, NodeIndex do_node, NodeIndex target);
InterventionEffect intervention_effect(const DiscreteBn& bn, NodeIndex do_node, NodeIndex target,
                                       const EffectWeights& w);

/// Move up to `epsilon` probability from the largest entry of a CPT row to the
/// smallest (first index on ties, never the same entry) and renormalise.
void perturb_row(std::span<double> row, double epsilon);

/// For every ancestor of `target`: the largest L1 shift of the target's
/// marginal over single-row perturbations of that ancestor's CPT. All other
/// nodes, `target` included, score 0.
std::vector<double> sensitivity(const DiscreteBn& bn, NodeIndex target, double epsilon,
                                Execution execution = Execution::Parallel);

}  // namespace causalwb

#endif  // CAUSALWB_INFERENCE_HPP
