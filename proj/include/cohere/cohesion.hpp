#ifndef COHERE_COHESION_HPP
#define COHERE_COHESION_HPP

// Node-level cohesion tests and the pattern-level, entropy-style cohesion
// measure Coh = Var * CF.

#include "cohere/core_model.hpp"

#include <span>

namespace cohere {

struct CohesionThreshold {
    double delta = 0.5;

    // Throws DomainError unless delta is finite and positive.
    void validate() const;
};

enum class SpreadMode {
    // sqrt(sum of squared deviations) / n. Reproduces the worked examples
    // (counts 2,4,2,4,3 around 3 give 0.4).
    worked,
    // sqrt(sum of squared deviations / n), the usual population deviation.
    textbook,
};

struct CohesionReport {
    double var_coefficient = 0.0;
    double count_factor = 0.0;
    double cohesion = 0.0;
    double local_mean = 0.0;
    double global_mean = 0.0;
};

// ((CG - CI) / N_g) < delta. Rejects non-members and N_g == 0.
bool node_cohesion_count(const PatternInstance& p, NodeId n, const CohesionThreshold& thr);

// |R_i - R_j| < delta.
bool node_cohesion_weight(const PatternInstance& p, NodeId i, NodeId j,
                          const CohesionThreshold& thr);

// 1 - spread / local_mean, with the spread measured around local_mean.
double variance_coefficient(std::span<const double> counts, double local_mean,
                            SpreadMode mode = SpreadMode::worked);

// local_mean / global_mean.
double count_factor(double local_mean, double global_mean);

// Alternative count scaling: the mean reinforcement weight of the pattern.
double count_factor_from_weights(const PatternInstance& p);

CohesionReport pattern_cohesion(std::span<const double> counts, double local_mean,
                                double global_mean, SpreadMode mode = SpreadMode::worked);

enum class CountFactorMode { count_ratio, mean_reinforcement };

// Cohesion of a stored instance: local counts are the CI values, lav their
// mean and gav the mean CG.
CohesionReport pattern_cohesion(const PatternInstance& p,
                                CountFactorMode cf_mode = CountFactorMode::count_ratio,
                                SpreadMode mode = SpreadMode::worked);

} // namespace cohere

#endif // COHERE_COHESION_HPP
