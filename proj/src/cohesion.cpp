#include "cohere/cohesion.hpp"

#include "cohere/error.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace cohere {

void CohesionThreshold::validate() const
{
    if (!(std::isfinite(delta) && delta > 0.0))
        throw DomainError("cohesion threshold delta must be finite and > 0");
}

bool node_cohesion_count(const PatternInstance& p, NodeId n, const CohesionThreshold& thr)
{
    thr.validate();
    if (p.group_events() == 0)
        throw DomainError("node count cohesion is undefined before any group event");
    const auto& rec = p.record(n);
    const double gap =
        (rec.group_count - rec.individual_count) / static_cast<double>(p.group_events());
    return gap < thr.delta;
}

bool node_cohesion_weight(const PatternInstance& p, NodeId i, NodeId j,
                          const CohesionThreshold& thr)
{
    thr.validate();
    return std::abs(p.record(i).reinforcement - p.record(j).reinforcement) < thr.delta;
}

double variance_coefficient(std::span<const double> counts, double local_mean, SpreadMode mode)
{
    if (counts.empty())
        throw DomainError("variance coefficient needs at least one count");
    if (!(std::isfinite(local_mean) && local_mean > 0.0))
        throw DomainError("local mean must be finite and > 0");

    double ss = 0.0;
    for (double c : counts) {
        const double d = c - local_mean;
        ss += d * d;
    }
    const double n = static_cast<double>(counts.size());
    const double spread = mode == SpreadMode::worked ? std::sqrt(ss) / n : std::sqrt(ss / n);
    return 1.0 - spread / local_mean;
}

double count_factor(double local_mean, double global_mean)
{
    if (!(std::isfinite(global_mean) && global_mean > 0.0))
        throw DomainError("global mean must be finite and > 0");
    return local_mean / global_mean;
}

double count_factor_from_weights(const PatternInstance& p)
{
    double sum = 0.0;
    for (const auto& kv : p.records())
        sum += kv.second.reinforcement;
    return sum / static_cast<double>(p.size());
}

CohesionReport pattern_cohesion(std::span<const double> counts, double local_mean,
                                double global_mean, SpreadMode mode)
{
    CohesionReport r;
    r.local_mean = local_mean;
    r.global_mean = global_mean;
    r.var_coefficient = variance_coefficient(counts, local_mean, mode);
    r.count_factor = count_factor(local_mean, global_mean);
    r.cohesion = r.var_coefficient * r.count_factor;
    return r;
}

CohesionReport pattern_cohesion(const PatternInstance& p, CountFactorMode cf_mode, SpreadMode mode)
{
    std::vector<double> local;
    local.reserve(p.size());
    double global_sum = 0.0;
    for (const auto& kv : p.records()) {
        local.push_back(kv.second.individual_count);
        global_sum += kv.second.group_count;
    }
    const double n = static_cast<double>(local.size());
    const double lav = std::accumulate(local.begin(), local.end(), 0.0) / n;
    const double gav = global_sum / n;

    CohesionReport r = pattern_cohesion(local, lav, gav, mode);
    if (cf_mode == CountFactorMode::mean_reinforcement) {
        r.count_factor = count_factor_from_weights(p);
        r.cohesion = r.var_coefficient * r.count_factor;
    }
    return r;
}

} // namespace cohere
