#ifndef COHERE_SPLIT_SEARCH_HPP
#define COHERE_SPLIT_SEARCH_HPP

// Scoring and searching pattern splits by cohesion.
//
// After a split each part gets fresh statistics: the local mean is the mean
// of the part's counts and the global mean is the part's largest count.

#include "cohere/cohesion.hpp"
#include "cohere/core_model.hpp"

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cohere {

using PatternCounts = std::map<NodeId, double>;

struct SplitPartition {
    std::vector<std::vector<NodeId>> parts;

    bool operator==(const SplitPartition&) const = default;
};

// Throws DomainError unless the parts are non-empty, pairwise disjoint and
// cover exactly the keys of `counts`.
void validate_partition(const PatternCounts& counts, const SplitPartition& partition);

struct SplitEvaluation {
    std::vector<CohesionReport> per_part;
    double composite = 0.0;           // size-weighted mean of part cohesions
    double remainder_cohesion = 0.0;  // cohesion of the largest part (first on ties)
};

struct PartStats {
    double local_mean = 0.0;
    double global_mean = 0.0;
};

// Mean and maximum of the counts. Counts must be non-empty and >= 0.
PartStats recalc_stats(std::span<const double> counts);

// Scores each part with recalc_stats. A part whose counts are all zero gets
// the uniform-count limit of 1.
SplitEvaluation evaluate_split(const PatternCounts& counts, const SplitPartition& partition);

struct RankedRemoval {
    NodeId removed;
    SplitEvaluation evaluation;
};

// All single-node removals, best remainder first, ties by ascending NodeId.
// Each partition is scored as [rest, {removed}].
std::vector<RankedRemoval> rank_single_removals(const PatternCounts& counts);

// Splits the members into Eq-4 cohesive and non-cohesive groups, scored on
// their CI values. Returns the split only when both groups are non-empty and
// the composite beats the cohesion of the unsplit instance.
std::optional<SplitPartition> suggest_split(const PatternInstance& p, const CohesionThreshold& thr);

// CI of every member, the counts suggest_split and the split CLI score.
PatternCounts individual_counts(const PatternInstance& p);

enum class PartitionShape {
    any_two_part,
    single_removal,  // one part is a single node
};

inline constexpr std::size_t brute_force_member_limit = 12;

// Exhaustive search over 2-part partitions. Ties on composite go to the
// lexicographically smallest partition, with parts listed smallest first
// (by size, then by members). Rejects patterns above the member limit.
std::pair<SplitPartition, SplitEvaluation>
brute_force_best_split(const PatternCounts& counts,
                       PartitionShape shape = PartitionShape::any_two_part);

} // namespace cohere

#endif // COHERE_SPLIT_SEARCH_HPP
