#ifndef COHERE_ACTIVATION_HPP
#define COHERE_ACTIVATION_HPP

// Discrete-time excitation/inhibition between patterns of neurons.
//
// The total input of neuron i at interval t is
//
//   X_it = sum_{p in P_i} E_pt
//          - delta * sum_{k active} sum_{y != t} sum_{j in P_k, j not in P_i} H_jy
//
// Declared external neurons act as one extra always-active inhibitory source.
// Intervals run from 1 to the horizon.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace cohere {

struct NeuronId {
    std::uint64_t value = 0;
    auto operator<=>(const NeuronId&) const = default;
};

struct ActivationConfig {
    double delta = 0.5;           // weight of the inhibitory sum
    int horizon = 1;              // number of intervals m
    double firing_threshold = 0.0;
    // A pattern fires at t when the sum of its members' X exceeds the
    // threshold. Fired members then add emit_excitatory to their own E at
    // t + 1 ...
    double emit_excitatory = 1.0;
    // ... and, with inhibitory_feedback, emit_inhibitory to H at t.
    bool inhibitory_feedback = false;
    double emit_inhibitory = 1.0;
    // Include neuron i's own E in its excitatory sum. Off means members only
    // receive signal from the other members.
    bool self_excitation = true;

    void validate() const;
};

struct ActivationPattern {
    std::vector<NeuronId> neurons;
    bool active = true;

    bool operator==(const ActivationPattern&) const = default;
};

class ActivationState {
public:
    // Throws DomainError on empty patterns, repeated neurons inside one
    // pattern, or external neurons that also belong to a pattern.
    ActivationState(std::vector<ActivationPattern> patterns, std::set<NeuronId> external,
                    ActivationConfig cfg);

    const std::vector<ActivationPattern>& patterns() const noexcept { return patterns_; }
    const std::set<NeuronId>& external() const noexcept { return external_; }
    const ActivationConfig& config() const noexcept { return cfg_; }
    std::size_t neuron_count() const noexcept { return known_.size(); }
    bool known(NeuronId n) const { return known_.count(n) != 0; }

    // Ledger accessors. Unknown neurons and intervals outside 1..horizon are
    // a DomainError.
    void set_excitatory(NeuronId n, int t, double value);
    void add_excitatory(NeuronId n, int t, double value);
    double excitatory(NeuronId n, int t) const;
    void set_inhibitory(NeuronId n, int t, double value);
    void add_inhibitory(NeuronId n, int t, double value);
    double inhibitory(NeuronId n, int t) const;

    using Ledger = std::map<std::pair<NeuronId, int>, double>;
    const Ledger& excitatory_ledger() const noexcept { return excitatory_; }
    const Ledger& inhibitory_ledger() const noexcept { return inhibitory_; }
    void clear_inhibitory() { inhibitory_.clear(); }

    // Index of the single pattern containing n; DomainError if there is not
    // exactly one.
    std::size_t pattern_of(NeuronId n) const;

    bool operator==(const ActivationState&) const = default;

private:
    void check(NeuronId n, int t) const;

    std::vector<ActivationPattern> patterns_;
    std::set<NeuronId> external_;
    std::set<NeuronId> known_;
    ActivationConfig cfg_;
    Ledger excitatory_;
    Ledger inhibitory_;
};

struct ActivationTrace {
    std::map<std::pair<NeuronId, int>, double> x;
    // (interval, pattern index) for every firing, in interval order.
    std::vector<std::pair<int, std::size_t>> firings;

    bool operator==(const ActivationTrace&) const = default;
};

double total_input(const ActivationState& state, NeuronId i, int t);

// Computes X for every neuron of every active pattern at t, then applies the
// firing rule. Mutates the ledgers of `state` for later intervals.
ActivationTrace step(ActivationState& state, int t);

// step() for t = 1..horizon on a copy of `state`.
ActivationTrace run(ActivationState state);

// Scenario text format, one directive per line ('#' starts a comment):
//   delta <real>              horizon <int>          threshold <real>
//   emit_excitatory <real>    emit_inhibitory <real>
//   feedback on|off           self_excitation on|off
//   pattern <neuron>...       inactive_pattern <neuron>...
//   external <neuron>...
//   E <neuron> <t> <value>    H <neuron> <t> <value>
ActivationState parse_scenario(std::istream& in);

// `neuron<TAB>t<TAB>X` rows ordered by interval, then neuron.
void write_trace(const ActivationTrace& trace, std::ostream& out);

} // namespace cohere

#endif // COHERE_ACTIVATION_HPP
