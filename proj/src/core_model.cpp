#include "cohere/core_model.hpp"

#include "cohere/error.hpp"
#include "cohere/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <utility>

namespace cohere {

namespace {

bool valid_count(double v) { return std::isfinite(v) && v >= 0.0; }

} // namespace

PatternInstance::PatternInstance(PatternId id, std::map<NodeId, CountRecord> records,
                                 std::uint64_t group_events)
    : id_(id), records_(std::move(records)), group_events_(group_events)
{
    if (records_.empty())
        throw DomainError("pattern instance needs at least one member");
    for (const auto& [node, rec] : records_) {
        if (!valid_count(rec.reinforcement) || !valid_count(rec.individual_count) ||
            !valid_count(rec.group_count))
            throw DomainError("node " + std::to_string(node.value) +
                              " has a negative or non-finite count");
    }
}

std::vector<NodeId> PatternInstance::members() const
{
    std::vector<NodeId> out;
    out.reserve(records_.size());
    for (const auto& kv : records_)
        out.push_back(kv.first);
    return out;
}

const CountRecord& PatternInstance::record(NodeId n) const
{
    auto it = records_.find(n);
    if (it == records_.end())
        throw DomainError("node " + std::to_string(n.value) + " is not a member of pattern " +
                          std::to_string(id_.value));
    return it->second;
}

CountRecord& PatternInstance::record(NodeId n)
{
    return const_cast<CountRecord&>(std::as_const(*this).record(n));
}

PatternInstance create_pattern(const std::set<NodeId>& nodes, PatternId id)
{
    if (nodes.empty())
        throw DomainError("cannot create a pattern from an empty node set");
    std::map<NodeId, CountRecord> records;
    for (NodeId n : nodes)
        records.emplace(n, CountRecord{});
    return PatternInstance(id, std::move(records), 0);
}

InputPattern::InputPattern(std::map<NodeId, double> signals, std::int64_t timestamp)
    : timestamp_(timestamp)
{
    for (const auto& [node, s] : signals) {
        if (!std::isfinite(s) || s < 0.0)
            throw DomainError("signal for node " + std::to_string(node.value) +
                              " must be finite and non-negative");
        if (s != 0.0)
            signals_.emplace(node, s);
    }
}

double InputPattern::signal(NodeId n) const
{
    auto it = signals_.find(n);
    return it == signals_.end() ? 0.0 : it->second;
}

std::set<NodeId> InputPattern::nodes() const
{
    std::set<NodeId> out;
    for (const auto& kv : signals_)
        out.insert(kv.first);
    return out;
}

std::set<NodeId> overlap(const PatternInstance& p, const InputPattern& ip)
{
    std::set<NodeId> out;
    for (const auto& [node, s] : ip.signals()) {
        if (p.contains(node))
            out.insert(node);
    }
    return out;
}

PatternStore::PatternStore(std::vector<PatternInstance> patterns, PatternId next_id,
                           std::int64_t clock)
    : patterns_(std::move(patterns)), next_id_(next_id), clock_(clock)
{
    std::set<PatternId> seen;
    for (const auto& p : patterns_) {
        if (!seen.insert(p.id()).second)
            throw DomainError("duplicate pattern id " + std::to_string(p.id().value));
        if (p.id() >= next_id_)
            throw DomainError("next pattern id must exceed every stored id");
    }
}

void PatternStore::advance_clock(std::int64_t t) noexcept
{
    clock_ = std::max(clock_, t);
}

PatternInstance& PatternStore::add(const std::set<NodeId>& nodes)
{
    patterns_.push_back(create_pattern(nodes, next_id_));
    ++next_id_.value;
    return patterns_.back();
}

const PatternInstance* PatternStore::find(PatternId id) const
{
    auto it = std::find_if(patterns_.begin(), patterns_.end(),
                           [id](const PatternInstance& p) { return p.id() == id; });
    return it == patterns_.end() ? nullptr : &*it;
}

PatternInstance* PatternStore::find(PatternId id)
{
    return const_cast<PatternInstance*>(std::as_const(*this).find(id));
}

void save_store(const PatternStore& store, std::ostream& out)
{
    using text::format_real;
    out << "S\t" << store.next_id().value << '\t' << store.clock() << '\n';
    for (const auto& p : store.patterns()) {
        out << "P\t" << p.id().value << '\t' << p.group_events() << '\n';
        for (const auto& [node, rec] : p.records()) {
            out << "N\t" << node.value << '\t' << format_real(rec.reinforcement) << '\t'
                << format_real(rec.individual_count) << '\t' << format_real(rec.group_count)
                << '\n';
        }
    }
}

PatternStore load_store(std::istream& in)
{
    struct Pending {
        PatternId id;
        std::uint64_t group_events = 0;
        std::map<NodeId, CountRecord> records;
        std::size_t line = 0;
    };

    std::vector<PatternInstance> patterns;
    std::optional<Pending> current;
    std::optional<PatternId> next_id;
    std::int64_t clock = 0;

    auto flush = [&]() {
        if (!current)
            return;
        if (current->records.empty())
            throw ParseError(current->line, "pattern " + std::to_string(current->id.value) +
                                                " has no node lines");
        patterns.emplace_back(current->id, std::move(current->records), current->group_events);
        current.reset();
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty())
            continue;
        auto fields = text::split(line, '\t');
        const auto tag = fields[0];

        if (tag == "S") {
            if (next_id || lineno != 1)
                throw ParseError(lineno, "store header must be the first line");
            if (fields.size() != 3)
                throw ParseError(lineno, "store header needs 2 fields");
            auto nid = text::parse_uint(fields[1]);
            auto clk = text::parse_int(fields[2]);
            if (!nid)
                throw ParseError(lineno, "field next_pattern_id is not a non-negative integer");
            if (!clk)
                throw ParseError(lineno, "field clock is not an integer");
            next_id = PatternId{*nid};
            clock = *clk;
        } else if (!next_id) {
            throw ParseError(lineno, "missing store header line");
        } else if (tag == "P") {
            if (fields.size() != 3)
                throw ParseError(lineno, "pattern line needs 2 fields");
            auto pid = text::parse_uint(fields[1]);
            auto ng = text::parse_uint(fields[2]);
            if (!pid)
                throw ParseError(lineno, "field pattern_id is not a non-negative integer");
            if (!ng)
                throw ParseError(lineno, "field N_g is not a non-negative integer");
            flush();
            current = Pending{PatternId{*pid}, *ng, {}, lineno};
        } else if (tag == "N") {
            if (!current)
                throw ParseError(lineno, "node line before any pattern line");
            if (fields.size() != 5)
                throw ParseError(lineno, "node line needs 4 fields");
            auto nid = text::parse_uint(fields[1]);
            if (!nid)
                throw ParseError(lineno, "field node_id is not a non-negative integer");
            static constexpr const char* names[] = {"R", "CI", "CG"};
            double vals[3];
            for (int k = 0; k < 3; ++k) {
                auto v = text::parse_real(fields[2 + k]);
                if (!v)
                    throw ParseError(lineno, std::string("field ") + names[k] + " is not a number");
                if (!valid_count(*v))
                    throw ParseError(lineno, std::string("field ") + names[k] +
                                                 " must be finite and non-negative");
                vals[k] = *v;
            }
            if (!current->records.emplace(NodeId{*nid}, CountRecord{vals[0], vals[1], vals[2]})
                     .second)
                throw ParseError(lineno, "duplicate node " + std::to_string(*nid));
        } else {
            throw ParseError(lineno, "unknown record tag '" + std::string(tag) + "'");
        }
    }
    if (!next_id)
        throw ParseError(0, "missing store header line");
    flush();

    try {
        return PatternStore(std::move(patterns), *next_id, clock);
    } catch (const DomainError& e) {
        throw ParseError(0, e.what());
    }
}

void save_store_file(const PatternStore& store, const std::filesystem::path& path)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        save_store(store, out);
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot replace " + path.string() + ": " + ec.message());
    }
}

PatternStore load_store_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return load_store(in);
}

} // namespace cohere
