#include "cohere/eval_harness.hpp"

#include "cohere/error.hpp"
#include "cohere/split_search.hpp"
#include "cohere/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace cohere {

DatasetSchema statlog_segment_schema()
{
    DatasetSchema s;
    s.delimiter = 0;
    s.label_column = -1;
    s.header = false;
    s.categories = {"1", "2", "3", "4", "5", "6", "7"};
    s.category_names = {"brickface", "sky", "foliage", "cement", "window", "path", "grass"};
    return s;
}

void DatasetTable::validate() const
{
    if (labels.size() != rows.size())
        throw DomainError("one label is required per row");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != variables.size())
            throw DomainError("row " + std::to_string(r + 1) + " has the wrong arity");
        if (std::find(categories.begin(), categories.end(), labels[r]) == categories.end())
            throw DomainError("row " + std::to_string(r + 1) + " has undeclared label '" +
                              labels[r] + "'");
    }
}

DatasetTable load_dataset(std::istream& in, const DatasetSchema& schema)
{
    DatasetTable table;
    table.categories = schema.categories;
    table.category_names = schema.category_names;
    table.category_names.resize(table.categories.size());

    std::optional<std::size_t> columns;
    std::size_t label_idx = 0;
    std::vector<std::string> header_names;

    auto resolve = [&](std::size_t ncols, std::size_t lineno) {
        if (ncols < 2)
            throw ParseError(lineno, "a row needs at least one variable and a label");
        const long idx = schema.label_column < 0 ? static_cast<long>(ncols) + schema.label_column
                                                 : schema.label_column;
        if (idx < 0 || idx >= static_cast<long>(ncols))
            throw ParseError(lineno, "label column " + std::to_string(schema.label_column) +
                                         " is outside the " + std::to_string(ncols) + " columns");
        columns = ncols;
        label_idx = static_cast<std::size_t>(idx);
    };

    std::string line;
    std::size_t lineno = 0;
    bool header_pending = schema.header;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty())
            continue;
        auto cells = text::split(line, schema.delimiter);
        if (header_pending) {
            header_pending = false;
            resolve(cells.size(), lineno);
            for (auto c : cells)
                header_names.emplace_back(c);
            continue;
        }
        if (!columns)
            resolve(cells.size(), lineno);
        if (cells.size() != *columns)
            throw ParseError(lineno, "row has " + std::to_string(cells.size()) +
                                         " cells, expected " + std::to_string(*columns));

        std::vector<double> row;
        row.reserve(*columns - 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx)
                continue;
            auto v = text::parse_real(cells[c]);
            if (!v || !std::isfinite(*v))
                throw ParseError(lineno, "cell " + std::to_string(c + 1) + " ('" +
                                             std::string(cells[c]) + "') is not a finite number");
            row.push_back(*v);
        }
        std::string label(cells[label_idx]);
        if (label.empty())
            throw ParseError(lineno, "empty label");
        auto known = std::find(table.categories.begin(), table.categories.end(), label);
        if (known == table.categories.end()) {
            if (!schema.categories.empty())
                throw ParseError(lineno, "unknown label '" + label + "'");
            table.categories.push_back(label);
            table.category_names.push_back(label);
        }
        table.rows.push_back(std::move(row));
        table.labels.push_back(std::move(label));
    }

    if (!columns)
        throw ParseError(0, "dataset has no rows");
    for (std::size_t c = 0; c < *columns; ++c) {
        if (c == label_idx)
            continue;
        table.variables.push_back(header_names.empty() ? "v" + std::to_string(table.variables.size() + 1)
                                                       : header_names[c]);
    }
    return table;
}

DatasetTable load_dataset_file(const std::filesystem::path& path, const DatasetSchema& schema)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return load_dataset(in, schema);
}

DatasetTable normalize(const DatasetTable& table)
{
    DatasetTable out = table;
    for (std::size_t j = 0; j < table.arity(); ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& row : table.rows) {
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        const double range = hi - lo;
        for (auto& row : out.rows)
            row[j] = range > 0.0 ? (row[j] - lo) / range : 0.0;
    }
    return out;
}

double row_to_node_value(std::span<const double> row)
{
    if (row.empty())
        throw DomainError("cannot map an empty row to a node value");
    return std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
}

namespace {

std::vector<const std::vector<double>*> select(const DatasetTable& table, const GroupSelector& group)
{
    std::vector<const std::vector<double>*> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (!group || table.labels[r] == *group)
            out.push_back(&table.rows[r]);
    }
    if (out.empty())
        throw DomainError(group ? "category '" + *group + "' has no rows" : "table has no rows");
    return out;
}

double percent(double part, double whole)
{
    return whole == 0.0 ? std::numeric_limits<double>::quiet_NaN() : part / whole * 100.0;
}

} // namespace

std::vector<double> node_values(const DatasetTable& table, const GroupSelector& group)
{
    std::vector<double> out;
    for (const auto* row : select(table, group))
        out.push_back(row_to_node_value(*row));
    return out;
}

CohesionReport group_cohesion_report(const DatasetTable& table, const GroupSelector& group)
{
    const auto values = node_values(table, group);
    const auto stats = recalc_stats(values);
    return pattern_cohesion(values, stats.local_mean, stats.global_mean);
}

double group_cohesion(const DatasetTable& table, const GroupSelector& group)
{
    return group_cohesion_report(table, group).cohesion;
}

double chi_square_group(const DatasetTable& table, const GroupSelector& group, double epsilon)
{
    if (!(epsilon >= 0.0))
        throw DomainError("chi-square epsilon must be >= 0");
    const auto rows = select(table, group);
    const std::size_t arity = table.arity();
    const double n = static_cast<double>(rows.size());

    std::vector<double> expected(arity, 0.0);
    for (const auto* row : rows)
        for (std::size_t j = 0; j < arity; ++j)
            expected[j] += (*row)[j];
    for (auto& e : expected) {
        e /= n;
        if (std::max(std::abs(e), epsilon) == 0.0)
            throw DomainError("zero expected value with the epsilon guard disabled");
    }

    double total = 0.0;
    for (const auto* row : rows) {
        double per_row = 0.0;
        for (std::size_t j = 0; j < arity; ++j) {
            const double d = (*row)[j] - expected[j];
            per_row += d * d / std::max(std::abs(expected[j]), epsilon);
        }
        total += per_row;
    }
    return total / n;
}

CohesionReport presence_cohesion(const std::vector<std::vector<bool>>& presence)
{
    if (presence.empty() || presence.front().empty())
        throw DomainError("presence matrix needs at least one group and one item");
    const std::size_t items = presence.front().size();
    std::vector<double> counts(items, 0.0);
    for (const auto& group : presence) {
        if (group.size() != items)
            throw DomainError("presence rows must all list the same items");
        for (std::size_t k = 0; k < items; ++k)
            counts[k] += group[k] ? 1.0 : 0.0;
    }
    const double lav = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(items);
    return pattern_cohesion(counts, lav, static_cast<double>(presence.size()));
}

BenchReport build_report(const DatasetTable& table, Normalization norm)
{
    table.validate();
    if (table.categories.empty())
        throw DomainError("report needs at least one category");

    BenchReport report;
    std::vector<std::pair<std::string, DatasetTable>> modes;
    modes.emplace_back("raw", table);
    if (norm == Normalization::minmax)
        modes.emplace_back("minmax", normalize(table));

    for (const auto& [mode, data] : modes) {
        ModeReport mr;
        mr.mode = mode;
        mr.whole.group = "whole";
        mr.whole.name = "whole dataset";
        mr.whole.rows = data.rows.size();
        mr.whole.chi_square = chi_square_group(data, std::nullopt);
        mr.whole.cohesion = group_cohesion(data, std::nullopt);
        mr.whole.chi_square_pct = 100.0;
        mr.whole.cohesion_pct = 100.0;

        for (std::size_t c = 0; c < data.categories.size(); ++c) {
            const auto& cat = data.categories[c];
            GroupScore gs;
            gs.group = cat;
            gs.name = data.category_names[c];
            gs.rows = static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), cat));
            if (gs.rows == 0)
                continue;
            gs.chi_square = chi_square_group(data, cat);
            gs.cohesion = group_cohesion(data, cat);
            gs.chi_square_pct = percent(gs.chi_square, mr.whole.chi_square);
            gs.cohesion_pct = percent(gs.cohesion, mr.whole.cohesion);
            if ((gs.cohesion < 0.0) != (mr.whole.cohesion < 0.0))
                report.notes.push_back(mode + ": cohesion sign differs between category " + gs.name +
                                       " and the whole dataset; percentage is a signed ratio");
            mr.categories.push_back(std::move(gs));
        }
        if (mr.whole.cohesion < 0.0)
            report.notes.push_back(mode + ": whole-dataset cohesion is negative");
        report.modes.push_back(std::move(mr));
    }

    const auto& claim = report.modes.back();
    report.claim_mode = claim.mode;
    report.cohesion_claim_holds = true;
    for (const auto& gs : claim.categories) {
        if (!(gs.cohesion > claim.whole.cohesion)) {
            report.cohesion_claim_holds = false;
            std::ostringstream note;
            note << claim.mode << ": category " << gs.name << " cohesion " << gs.cohesion
                 << " does not exceed the whole-dataset value " << claim.whole.cohesion;
            report.notes.push_back(note.str());
        }
    }
    return report;
}

namespace {

std::string fmt(double v, int precision = 6)
{
    if (std::isnan(v))
        return "n/a";
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

std::string fmt_pct(double v)
{
    if (std::isnan(v))
        return "n/a";
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v << '%';
    return os.str();
}

} // namespace

void write_report_text(const BenchReport& report, std::ostream& out)
{
    out << "# node value = mean of row variables; cohesion uses lav = mean, gav = max node value\n"
        << "# chi-square expected values = group means, guard max(|e|, "
        << default_chi_square_epsilon << ")\n";
    for (const auto& mr : report.modes) {
        out << "\n[" << mr.mode << "]\n";
        out << std::left << std::setw(18) << "group" << std::right << std::setw(7) << "rows"
            << std::setw(16) << "chi-square" << std::setw(12) << "chi %" << std::setw(14)
            << "cohesion" << std::setw(12) << "cohesion %" << '\n';
        auto row = [&](const GroupScore& g) {
            out << std::left << std::setw(18) << g.name << std::right << std::setw(7) << g.rows
                << std::setw(16) << fmt(g.chi_square) << std::setw(12) << fmt_pct(g.chi_square_pct)
                << std::setw(14) << fmt(g.cohesion) << std::setw(12) << fmt_pct(g.cohesion_pct)
                << '\n';
        };
        row(mr.whole);
        for (const auto& g : mr.categories)
            row(g);
    }
    out << "\ncohesion claim (" << report.claim_mode << "): every category exceeds the whole dataset: "
        << (report.cohesion_claim_holds ? "yes" : "NO") << '\n';
    for (const auto& n : report.notes)
        out << "note: " << n << '\n';
}

void write_report_delimited(const BenchReport& report, std::ostream& out, char delimiter)
{
    const char d = delimiter;
    out << "group" << d << "mode" << d << "chi_square" << d << "cohesion" << d
        << "pct_of_whole_chi_square" << d << "pct_of_whole_cohesion" << '\n';
    for (const auto& mr : report.modes) {
        auto row = [&](const GroupScore& g) {
            out << g.group << d << mr.mode << d << text::format_real(g.chi_square) << d
                << text::format_real(g.cohesion) << d << text::format_real(g.chi_square_pct) << d
                << text::format_real(g.cohesion_pct) << '\n';
        };
        row(mr.whole);
        for (const auto& g : mr.categories)
            row(g);
    }
}

} // namespace cohere
