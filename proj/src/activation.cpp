#include "cohere/activation.hpp"

#include "cohere/error.hpp"
#include "cohere/text.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace cohere {

void ActivationConfig::validate() const
{
    if (!std::isfinite(delta) || delta < 0.0)
        throw DomainError("inhibition weight delta must be finite and >= 0");
    if (horizon < 1)
        throw DomainError("horizon must be at least 1 interval");
    if (!std::isfinite(firing_threshold))
        throw DomainError("firing threshold must be finite");
    if (!std::isfinite(emit_excitatory) || !std::isfinite(emit_inhibitory))
        throw DomainError("emitted signals must be finite");
}

ActivationState::ActivationState(std::vector<ActivationPattern> patterns,
                                 std::set<NeuronId> external, ActivationConfig cfg)
    : patterns_(std::move(patterns)), external_(std::move(external)), cfg_(cfg)
{
    cfg_.validate();
    for (const auto& p : patterns_) {
        if (p.neurons.empty())
            throw DomainError("activation pattern has no neurons");
        std::set<NeuronId> inside(p.neurons.begin(), p.neurons.end());
        if (inside.size() != p.neurons.size())
            throw DomainError("neuron listed twice in one pattern");
        known_.insert(inside.begin(), inside.end());
    }
    for (NeuronId n : external_) {
        if (known_.count(n))
            throw DomainError("neuron " + std::to_string(n.value) +
                              " is both external and a pattern member");
    }
    known_.insert(external_.begin(), external_.end());
}

void ActivationState::check(NeuronId n, int t) const
{
    if (!known(n))
        throw DomainError("neuron " + std::to_string(n.value) +
                          " belongs to no pattern and is not declared external");
    if (t < 1 || t > cfg_.horizon)
        throw DomainError("interval " + std::to_string(t) + " outside 1.." +
                          std::to_string(cfg_.horizon));
}

void ActivationState::set_excitatory(NeuronId n, int t, double value)
{
    check(n, t);
    excitatory_[{n, t}] = value;
}

void ActivationState::add_excitatory(NeuronId n, int t, double value)
{
    check(n, t);
    excitatory_[{n, t}] += value;
}

double ActivationState::excitatory(NeuronId n, int t) const
{
    auto it = excitatory_.find({n, t});
    return it == excitatory_.end() ? 0.0 : it->second;
}

void ActivationState::set_inhibitory(NeuronId n, int t, double value)
{
    check(n, t);
    inhibitory_[{n, t}] = value;
}

void ActivationState::add_inhibitory(NeuronId n, int t, double value)
{
    check(n, t);
    inhibitory_[{n, t}] += value;
}

double ActivationState::inhibitory(NeuronId n, int t) const
{
    auto it = inhibitory_.find({n, t});
    return it == inhibitory_.end() ? 0.0 : it->second;
}

std::size_t ActivationState::pattern_of(NeuronId n) const
{
    std::size_t found = patterns_.size();
    for (std::size_t k = 0; k < patterns_.size(); ++k) {
        const auto& ns = patterns_[k].neurons;
        if (std::find(ns.begin(), ns.end(), n) == ns.end())
            continue;
        if (found != patterns_.size())
            throw DomainError("neuron " + std::to_string(n.value) + " is in more than one pattern");
        found = k;
    }
    if (found == patterns_.size())
        throw DomainError("neuron " + std::to_string(n.value) + " is in no pattern");
    return found;
}

double total_input(const ActivationState& state, NeuronId i, int t)
{
    const auto& cfg = state.config();
    if (t < 1 || t > cfg.horizon)
        throw DomainError("interval " + std::to_string(t) + " outside the horizon");
    const auto& own = state.patterns()[state.pattern_of(i)].neurons;

    double excit = 0.0;
    for (NeuronId p : own) {
        if (p == i && !cfg.self_excitation)
            continue;
        excit += state.excitatory(p, t);
    }

    // Each H entry counts once per active pattern holding its neuron, plus
    // once if the neuron is external.
    double inhib = 0.0;
    for (const auto& [key, h] : state.inhibitory_ledger()) {
        const auto [j, y] = key;
        if (y == t || std::find(own.begin(), own.end(), j) != own.end())
            continue;
        int multiplicity = state.external().count(j) ? 1 : 0;
        for (const auto& k : state.patterns()) {
            if (k.active && std::find(k.neurons.begin(), k.neurons.end(), j) != k.neurons.end())
                ++multiplicity;
        }
        inhib += multiplicity * h;
    }
    return excit - cfg.delta * inhib;
}

ActivationTrace step(ActivationState& state, int t)
{
    const auto& cfg = state.config();
    if (t < 1 || t > cfg.horizon)
        throw DomainError("interval " + std::to_string(t) + " outside the horizon");

    ActivationTrace out;
    std::vector<std::size_t> fired;
    for (std::size_t k = 0; k < state.patterns().size(); ++k) {
        const auto& pat = state.patterns()[k];
        if (!pat.active)
            continue;
        double sum = 0.0;
        for (NeuronId n : pat.neurons) {
            const double x = total_input(state, n, t);
            out.x[{n, t}] = x;
            sum += x;
        }
        if (sum > cfg.firing_threshold)
            fired.push_back(k);
    }

    // Firing effects land after every X at t has been computed.
    for (std::size_t k : fired) {
        out.firings.emplace_back(t, k);
        for (NeuronId n : state.patterns()[k].neurons) {
            if (t < cfg.horizon && cfg.emit_excitatory != 0.0)
                state.add_excitatory(n, t + 1, cfg.emit_excitatory);
            if (cfg.inhibitory_feedback && cfg.emit_inhibitory != 0.0)
                state.add_inhibitory(n, t, cfg.emit_inhibitory);
        }
    }
    return out;
}

ActivationTrace run(ActivationState state)
{
    ActivationTrace trace;
    for (int t = 1; t <= state.config().horizon; ++t) {
        auto part = step(state, t);
        trace.x.merge(part.x);
        trace.firings.insert(trace.firings.end(), part.firings.begin(), part.firings.end());
    }
    return trace;
}

namespace {

bool parse_switch(std::string_view tok, std::size_t line)
{
    if (tok == "on" || tok == "true" || tok == "1")
        return true;
    if (tok == "off" || tok == "false" || tok == "0")
        return false;
    throw ParseError(line, "expected on|off, got '" + std::string(tok) + "'");
}

double need_real(std::string_view tok, std::size_t line, const char* what)
{
    auto v = text::parse_real(tok);
    if (!v || !std::isfinite(*v))
        throw ParseError(line, std::string(what) + " is not a finite number");
    return *v;
}

NeuronId need_neuron(std::string_view tok, std::size_t line)
{
    auto v = text::parse_uint(tok);
    if (!v)
        throw ParseError(line, "bad neuron id '" + std::string(tok) + "'");
    return NeuronId{*v};
}

} // namespace

ActivationState parse_scenario(std::istream& in)
{
    struct Entry {
        bool excitatory;
        NeuronId neuron;
        int t;
        double value;
        std::size_t line;
    };

    ActivationConfig cfg;
    std::vector<ActivationPattern> patterns;
    std::set<NeuronId> external;
    std::vector<Entry> entries;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto toks = text::split(line);
        if (toks.empty())
            continue;
        const auto key = toks[0];
        auto expect = [&](std::size_t n) {
            if (toks.size() != n + 1)
                throw ParseError(lineno, "'" + std::string(key) + "' takes " + std::to_string(n) +
                                             " argument(s)");
        };

        if (key == "delta") {
            expect(1);
            cfg.delta = need_real(toks[1], lineno, "delta");
        } else if (key == "horizon") {
            expect(1);
            auto v = text::parse_int(toks[1]);
            if (!v || *v < 1 || *v > 1'000'000)
                throw ParseError(lineno, "horizon must be a positive integer");
            cfg.horizon = static_cast<int>(*v);
        } else if (key == "threshold") {
            expect(1);
            cfg.firing_threshold = need_real(toks[1], lineno, "threshold");
        } else if (key == "emit_excitatory") {
            expect(1);
            cfg.emit_excitatory = need_real(toks[1], lineno, "emit_excitatory");
        } else if (key == "emit_inhibitory") {
            expect(1);
            cfg.emit_inhibitory = need_real(toks[1], lineno, "emit_inhibitory");
        } else if (key == "feedback") {
            expect(1);
            cfg.inhibitory_feedback = parse_switch(toks[1], lineno);
        } else if (key == "self_excitation") {
            expect(1);
            cfg.self_excitation = parse_switch(toks[1], lineno);
        } else if (key == "pattern" || key == "inactive_pattern") {
            if (toks.size() < 2)
                throw ParseError(lineno, "pattern needs at least one neuron");
            ActivationPattern p;
            p.active = key == "pattern";
            for (std::size_t k = 1; k < toks.size(); ++k)
                p.neurons.push_back(need_neuron(toks[k], lineno));
            patterns.push_back(std::move(p));
        } else if (key == "external") {
            for (std::size_t k = 1; k < toks.size(); ++k)
                external.insert(need_neuron(toks[k], lineno));
        } else if (key == "E" || key == "H") {
            expect(3);
            auto t = text::parse_int(toks[2]);
            if (!t || *t < 1 || *t > 1'000'000)
                throw ParseError(lineno, "interval must be a positive integer");
            entries.push_back({key == "E", need_neuron(toks[1], lineno), static_cast<int>(*t),
                               need_real(toks[3], lineno, "ledger value"), lineno});
        } else {
            throw ParseError(lineno, "unknown directive '" + std::string(key) + "'");
        }
    }

    if (patterns.empty())
        throw ParseError(0, "scenario declares no patterns");
    try {
        ActivationState state(std::move(patterns), std::move(external), cfg);
        for (const auto& e : entries) {
            try {
                if (e.excitatory)
                    state.add_excitatory(e.neuron, e.t, e.value);
                else
                    state.add_inhibitory(e.neuron, e.t, e.value);
            } catch (const DomainError& err) {
                throw ParseError(e.line, err.what());
            }
        }
        return state;
    } catch (const DomainError& err) {
        throw ParseError(0, err.what());
    }
}

void write_trace(const ActivationTrace& trace, std::ostream& out)
{
    std::vector<std::pair<std::pair<int, NeuronId>, double>> rows;
    rows.reserve(trace.x.size());
    for (const auto& [key, x] : trace.x)
        rows.push_back({{key.second, key.first}, x});
    std::sort(rows.begin(), rows.end());
    out << "neuron\tt\tX\n";
    for (const auto& [key, x] : rows)
        out << key.second.value << '\t' << key.first << '\t' << text::format_real(x) << '\n';
}

} // namespace cohere
