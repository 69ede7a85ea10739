#ifndef COHERE_CORE_MODEL_HPP
#define COHERE_CORE_MODEL_HPP

// Shared-node / per-pattern-instance data model.
//
// A physical node may belong to many patterns. Each PatternInstance keeps its
// own CountRecord per member, keyed by the shared NodeId, so the same node can
// be strongly reinforced in one instance and fading in another.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <vector>

namespace cohere {

struct NodeId {
    std::uint64_t value = 0;
    auto operator<=>(const NodeId&) const = default;
};

struct PatternId {
    std::uint64_t value = 0;
    auto operator<=>(const PatternId&) const = default;
};

// R, CI and CG for one node inside one pattern instance.
struct CountRecord {
    double reinforcement = 0.0;
    double individual_count = 0.0;
    double group_count = 0.0;

    bool operator==(const CountRecord&) const = default;
};

class PatternInstance {
public:
    // Throws DomainError on an empty record map or on a record that is
    // negative or non-finite.
    PatternInstance(PatternId id, std::map<NodeId, CountRecord> records,
                    std::uint64_t group_events = 0);

    PatternId id() const noexcept { return id_; }
    std::uint64_t group_events() const noexcept { return group_events_; }
    std::size_t size() const noexcept { return records_.size(); }

    const std::map<NodeId, CountRecord>& records() const noexcept { return records_; }
    std::vector<NodeId> members() const;
    bool contains(NodeId n) const { return records_.count(n) != 0; }

    // Throws DomainError if n is not a member.
    const CountRecord& record(NodeId n) const;
    CountRecord& record(NodeId n);

    void add_group_event() noexcept { ++group_events_; }

    bool operator==(const PatternInstance&) const = default;

private:
    PatternId id_;
    std::map<NodeId, CountRecord> records_;
    std::uint64_t group_events_ = 0;
};

// Fresh instance with every record zeroed. Empty `nodes` is a DomainError.
PatternInstance create_pattern(const std::set<NodeId>& nodes, PatternId id = {});

// One presentation. Zero signals mean "absent" and are dropped on
// construction; negative or non-finite signals are a DomainError.
class InputPattern {
public:
    InputPattern() = default;
    InputPattern(std::map<NodeId, double> signals, std::int64_t timestamp = 0);

    const std::map<NodeId, double>& signals() const noexcept { return signals_; }
    std::int64_t timestamp() const noexcept { return timestamp_; }
    bool empty() const noexcept { return signals_.empty(); }
    std::size_t size() const noexcept { return signals_.size(); }
    bool contains(NodeId n) const { return signals_.count(n) != 0; }
    double signal(NodeId n) const;
    std::set<NodeId> nodes() const;

    bool operator==(const InputPattern&) const = default;

private:
    std::map<NodeId, double> signals_;
    std::int64_t timestamp_ = 0;
};

// Members of p that carry a nonzero signal in ip.
std::set<NodeId> overlap(const PatternInstance& p, const InputPattern& ip);

class PatternStore {
public:
    PatternStore() = default;
    // Throws DomainError on duplicate ids or next_id not above every id.
    PatternStore(std::vector<PatternInstance> patterns, PatternId next_id, std::int64_t clock);

    const std::vector<PatternInstance>& patterns() const noexcept { return patterns_; }
    std::vector<PatternInstance>& patterns() noexcept { return patterns_; }
    bool empty() const noexcept { return patterns_.empty(); }

    PatternId next_id() const noexcept { return next_id_; }
    std::int64_t clock() const noexcept { return clock_; }
    // The clock never moves backwards; earlier timestamps leave it unchanged.
    void advance_clock(std::int64_t t) noexcept;

    PatternInstance& add(const std::set<NodeId>& nodes);

    const PatternInstance* find(PatternId id) const;
    PatternInstance* find(PatternId id);

    bool operator==(const PatternStore&) const = default;

private:
    std::vector<PatternInstance> patterns_;
    PatternId next_id_{1};
    std::int64_t clock_ = 0;
};

// Tab-separated store format:
//   S <next_pattern_id> <clock>
//   P <pattern_id> <N_g>
//   N <node_id> <R> <CI> <CG>     (repeated, one per member)
void save_store(const PatternStore& store, std::ostream& out);
PatternStore load_store(std::istream& in);

// Writes to a sibling temporary file and renames it over `path`, so a failed
// write never leaves a partial store behind.
void save_store_file(const PatternStore& store, const std::filesystem::path& path);
PatternStore load_store_file(const std::filesystem::path& path);

} // namespace cohere

#endif // COHERE_CORE_MODEL_HPP
