#include "cohere/split_search.hpp"

#include "cohere/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace cohere {

namespace {

std::vector<double> counts_of(const PatternCounts& counts, const std::vector<NodeId>& part)
{
    std::vector<double> out;
    out.reserve(part.size());
    for (NodeId n : part)
        out.push_back(counts.at(n));
    return out;
}

// Parts smallest first, then by member list; each part sorted.
SplitPartition canonical(SplitPartition p)
{
    for (auto& part : p.parts)
        std::sort(part.begin(), part.end());
    std::sort(p.parts.begin(), p.parts.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    });
    return p;
}

} // namespace

void validate_partition(const PatternCounts& counts, const SplitPartition& partition)
{
    if (partition.parts.empty())
        throw DomainError("partition has no parts");
    std::set<NodeId> seen;
    for (const auto& part : partition.parts) {
        if (part.empty())
            throw DomainError("partition contains an empty part");
        for (NodeId n : part) {
            if (!counts.count(n))
                throw DomainError("node " + std::to_string(n.value) + " is not in the pattern");
            if (!seen.insert(n).second)
                throw DomainError("node " + std::to_string(n.value) + " appears in two parts");
        }
    }
    if (seen.size() != counts.size())
        throw DomainError("partition does not cover every pattern member");
}

PartStats recalc_stats(std::span<const double> counts)
{
    if (counts.empty())
        throw DomainError("cannot recalculate statistics of an empty part");
    double sum = 0.0;
    double mx = counts.front();
    for (double c : counts) {
        if (!(c >= 0.0))
            throw DomainError("counts must be non-negative");
        sum += c;
        mx = std::max(mx, c);
    }
    return {sum / static_cast<double>(counts.size()), mx};
}

SplitEvaluation evaluate_split(const PatternCounts& counts, const SplitPartition& partition)
{
    validate_partition(counts, partition);

    SplitEvaluation ev;
    double weighted = 0.0;
    std::size_t total = 0;
    std::size_t largest = 0;
    for (std::size_t k = 0; k < partition.parts.size(); ++k) {
        const auto& part = partition.parts[k];
        auto vals = counts_of(counts, part);
        // Sorted so equal multisets score bit-identically.
        std::sort(vals.begin(), vals.end());
        const auto stats = recalc_stats(vals);
        if (stats.global_mean == 0.0)
            ev.per_part.push_back(CohesionReport{1.0, 1.0, 1.0, 0.0, 0.0});  // uniform-count limit
        else
            ev.per_part.push_back(pattern_cohesion(vals, stats.local_mean, stats.global_mean));
        weighted += static_cast<double>(part.size()) * ev.per_part.back().cohesion;
        total += part.size();
        if (part.size() > partition.parts[largest].size())
            largest = k;
    }
    ev.composite = weighted / static_cast<double>(total);
    ev.remainder_cohesion = ev.per_part[largest].cohesion;
    return ev;
}

std::vector<RankedRemoval> rank_single_removals(const PatternCounts& counts)
{
    if (counts.size() < 2)
        throw DomainError("a pattern needs at least 2 nodes to remove one");

    std::vector<RankedRemoval> out;
    out.reserve(counts.size());
    for (const auto& [removed, c] : counts) {
        SplitPartition partition;
        auto& rest = partition.parts.emplace_back();
        for (const auto& kv : counts) {
            if (kv.first != removed)
                rest.push_back(kv.first);
        }
        partition.parts.push_back({removed});
        out.push_back({removed, evaluate_split(counts, partition)});
    }
    std::stable_sort(out.begin(), out.end(), [](const RankedRemoval& a, const RankedRemoval& b) {
        if (a.evaluation.remainder_cohesion != b.evaluation.remainder_cohesion)
            return a.evaluation.remainder_cohesion > b.evaluation.remainder_cohesion;
        return a.removed < b.removed;
    });
    return out;
}

PatternCounts individual_counts(const PatternInstance& p)
{
    PatternCounts out;
    for (const auto& [node, rec] : p.records())
        out.emplace(node, rec.individual_count);
    return out;
}

std::optional<SplitPartition> suggest_split(const PatternInstance& p, const CohesionThreshold& thr)
{
    if (p.group_events() == 0)
        throw DomainError("cannot suggest a split before any group event");

    SplitPartition partition;
    std::vector<NodeId> cohesive, outliers;
    for (NodeId n : p.members())
        (node_cohesion_count(p, n, thr) ? cohesive : outliers).push_back(n);
    if (cohesive.empty() || outliers.empty())
        return std::nullopt;

    partition.parts = {std::move(cohesive), std::move(outliers)};
    const auto split = evaluate_split(individual_counts(p), partition);
    const double unsplit = pattern_cohesion(p).cohesion;
    if (split.composite > unsplit)
        return partition;
    return std::nullopt;
}

std::pair<SplitPartition, SplitEvaluation>
brute_force_best_split(const PatternCounts& counts, PartitionShape shape)
{
    const std::size_t n = counts.size();
    if (n < 2)
        throw DomainError("a 2-part split needs at least 2 nodes");
    if (n > brute_force_member_limit)
        throw DomainError("exhaustive split search is limited to " +
                          std::to_string(brute_force_member_limit) + " nodes");

    std::vector<NodeId> members;
    for (const auto& kv : counts)
        members.push_back(kv.first);

    std::optional<std::pair<SplitPartition, SplitEvaluation>> best;
    // members[0] always stays in the first part, so every 2-part partition
    // is visited exactly once.
    const std::uint32_t limit = 1u << (n - 1);
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        SplitPartition partition{{{members[0]}, {}}};
        for (std::size_t k = 1; k < n; ++k)
            partition.parts[(mask >> (k - 1)) & 1u].push_back(members[k]);
        if (shape == PartitionShape::single_removal && partition.parts[0].size() != 1 &&
            partition.parts[1].size() != 1)
            continue;

        partition = canonical(std::move(partition));
        auto ev = evaluate_split(counts, partition);
        if (!best || ev.composite > best->second.composite ||
            (ev.composite == best->second.composite && partition.parts < best->first.parts))
            best.emplace(std::move(partition), std::move(ev));
    }
    return *std::move(best);
}

} // namespace cohere
