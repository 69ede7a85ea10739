#ifndef COHERE_REINFORCEMENT_HPP
#define COHERE_REINFORCEMENT_HPP

// Presentation procedure: weight reinforcement, individual/group count
// updates and multiplicative decay of the reinforcement weights.

#include "cohere/core_model.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace cohere {

struct UpdateConfig {
    double omega_i = 1.0;       // individual increment
    double omega_g = 1.0;       // group increment
    double decay_factor = 1.0;  // 1 disables decay
    // A new instance is materialized when the best Jaccard overlap between
    // the input and any stored instance is below this value. 1.0 creates one
    // for every input that is not an exact match.
    double new_instance_overlap_threshold = 1.0;
    // Scale R increments by the input signal instead of using unit steps.
    bool signal_scaled = false;

    // Throws DomainError when a field is outside its documented range.
    void validate() const;
};

// R += omega_i (times the signal in signal-scaled mode) for members present
// in ip. Absent members are left alone.
PatternInstance reinforce(PatternInstance p, const InputPattern& ip, const UpdateConfig& cfg);

// Counting-mechanism update: CI += omega_i on the overlap, CG += omega_g on
// every member, N_g += 1. Returns nullopt when ip does not touch p so the
// caller can decide whether to create a new instance.
std::optional<PatternInstance> update_counts(PatternInstance p, const InputPattern& ip,
                                             const UpdateConfig& cfg);

struct PresentationSummary {
    std::vector<PatternId> updated;
    std::optional<PatternId> created;
    double best_overlap = 0.0;
};

// In-place variant of present(); the store is untouched if it throws.
PresentationSummary apply_presentation(PatternStore& store, const InputPattern& ip,
                                       const UpdateConfig& cfg);

// Every instance overlapping ip gets the positive update on its shared
// members; the remaining members lose omega_i of R (clamped at 0) and still
// receive the group increment. Empty ip is a DomainError.
PatternStore present(PatternStore store, const InputPattern& ip, const UpdateConfig& cfg);

// R *= decay_factor everywhere. Counts and N_g are not touched.
PatternStore decay(PatternStore store, const UpdateConfig& cfg);

// Jaccard overlap |p ∩ ip| / |p ∪ ip|.
double overlap_fraction(const PatternInstance& p, const InputPattern& ip);

// One input per line: `t <timestamp> <node_id>:<signal> ...`. Blank lines and
// lines starting with '#' are skipped.
std::vector<InputPattern> parse_input_patterns(std::istream& in);

} // namespace cohere

#endif // COHERE_REINFORCEMENT_HPP
