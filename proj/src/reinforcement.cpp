#include "cohere/reinforcement.hpp"

#include "cohere/error.hpp"
#include "cohere/text.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <string>

namespace cohere {

void UpdateConfig::validate() const
{
    if (!(std::isfinite(omega_i) && omega_i > 0.0))
        throw DomainError("omega_i must be finite and > 0");
    if (!(std::isfinite(omega_g) && omega_g > 0.0))
        throw DomainError("omega_g must be finite and > 0");
    if (!(decay_factor > 0.0 && decay_factor <= 1.0))
        throw DomainError("decay factor must lie in (0, 1]");
    if (!(new_instance_overlap_threshold >= 0.0 && new_instance_overlap_threshold <= 1.0))
        throw DomainError("new-instance overlap threshold must lie in [0, 1]");
}

PatternInstance reinforce(PatternInstance p, const InputPattern& ip, const UpdateConfig& cfg)
{
    for (const auto& [node, s] : ip.signals()) {
        if (!p.contains(node))
            continue;
        p.record(node).reinforcement += cfg.signal_scaled ? cfg.omega_i * s : cfg.omega_i;
    }
    return p;
}

std::optional<PatternInstance> update_counts(PatternInstance p, const InputPattern& ip,
                                             const UpdateConfig& cfg)
{
    const auto shared = overlap(p, ip);
    if (shared.empty())
        return std::nullopt;
    for (NodeId n : p.members()) {
        auto& rec = p.record(n);
        if (shared.count(n))
            rec.individual_count += cfg.omega_i;
        rec.group_count += cfg.omega_g;
    }
    p.add_group_event();
    return p;
}

double overlap_fraction(const PatternInstance& p, const InputPattern& ip)
{
    const auto shared = overlap(p, ip).size();
    const auto uni = p.size() + ip.size() - shared;
    return uni == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(uni);
}

PresentationSummary apply_presentation(PatternStore& store, const InputPattern& ip,
                                       const UpdateConfig& cfg)
{
    if (ip.empty())
        throw DomainError("cannot present an empty input pattern");
    cfg.validate();

    PresentationSummary summary;
    // Build the updated instances first; commit only once nothing can throw.
    std::vector<PatternInstance> next = store.patterns();
    for (auto& p : next) {
        const auto shared = overlap(p, ip);
        if (shared.empty())
            continue;
        summary.best_overlap = std::max(summary.best_overlap, overlap_fraction(p, ip));

        p = reinforce(std::move(p), ip, cfg);
        for (NodeId n : p.members()) {
            if (shared.count(n))
                continue;
            auto& rec = p.record(n);
            rec.reinforcement = std::max(0.0, rec.reinforcement - cfg.omega_i);
        }
        p = *update_counts(std::move(p), ip, cfg);
        summary.updated.push_back(p.id());
    }

    store.patterns() = std::move(next);
    if (summary.best_overlap < cfg.new_instance_overlap_threshold) {
        auto& fresh = store.add(ip.nodes());
        fresh = *update_counts(reinforce(std::move(fresh), ip, cfg), ip, cfg);
        summary.created = fresh.id();
    }
    store.advance_clock(ip.timestamp());
    return summary;
}

PatternStore present(PatternStore store, const InputPattern& ip, const UpdateConfig& cfg)
{
    apply_presentation(store, ip, cfg);
    return store;
}

PatternStore decay(PatternStore store, const UpdateConfig& cfg)
{
    cfg.validate();
    if (cfg.decay_factor == 1.0)
        return store;
    for (auto& p : store.patterns()) {
        for (NodeId n : p.members())
            p.record(n).reinforcement *= cfg.decay_factor;
    }
    return store;
}

std::vector<InputPattern> parse_input_patterns(std::istream& in)
{
    std::vector<InputPattern> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = text::trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        auto toks = text::split(body);
        if (toks[0] != "t")
            throw ParseError(lineno, "input line must start with 't'");
        if (toks.size() < 3)
            throw ParseError(lineno, "input line needs a timestamp and at least one node");
        auto ts = text::parse_int(toks[1]);
        if (!ts)
            throw ParseError(lineno, "timestamp is not an integer");

        std::map<NodeId, double> signals;
        for (std::size_t k = 2; k < toks.size(); ++k) {
            auto tok = toks[k];
            auto colon = tok.find(':');
            if (colon == std::string_view::npos)
                throw ParseError(lineno, "expected <node_id>:<signal>, got '" + std::string(tok) + "'");
            auto node = text::parse_uint(tok.substr(0, colon));
            auto sig = text::parse_real(tok.substr(colon + 1));
            if (!node)
                throw ParseError(lineno, "bad node id in '" + std::string(tok) + "'");
            if (!sig || !std::isfinite(*sig) || *sig < 0.0)
                throw ParseError(lineno, "bad signal in '" + std::string(tok) + "'");
            if (!signals.emplace(NodeId{*node}, *sig).second)
                throw ParseError(lineno, "node " + std::to_string(*node) + " listed twice");
        }
        InputPattern ip(std::move(signals), *ts);
        if (ip.empty())
            throw ParseError(lineno, "input pattern has no nonzero signals");
        out.push_back(std::move(ip));
    }
    return out;
}

} // namespace cohere
