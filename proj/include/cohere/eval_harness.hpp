#ifndef COHERE_EVAL_HARNESS_HPP
#define COHERE_EVAL_HARNESS_HPP

// Labeled-table ingestion and the cohesion vs chi-square comparison.
//
// Each data row becomes one node whose value is the mean of the row's
// variables. A category is a pattern and the whole table is the largest
// pattern; cohesion uses lav = mean node value and gav = max node value.

#include "cohere/cohesion.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cohere {

struct DatasetSchema {
    char delimiter = 0;       // 0: runs of spaces/tabs
    int label_column = -1;    // negative counts from the end
    bool header = false;      // first line holds column names
    std::vector<std::string> categories;      // empty: take labels as found
    std::vector<std::string> category_names;  // display names, parallel to categories
};

// Statlog image segmentation layout: 19 space-separated attributes followed
// by a class code 1..7.
DatasetSchema statlog_segment_schema();

struct DatasetTable {
    std::vector<std::string> variables;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;          // one per row
    std::vector<std::string> categories;      // declared or first-seen order
    std::vector<std::string> category_names;  // parallel to categories

    std::size_t arity() const noexcept { return variables.size(); }

    // Throws DomainError on ragged rows or labels outside the category set.
    void validate() const;
};

// Throws ParseError (with the row's line number) on ragged rows, unknown
// labels or non-numeric cells.
DatasetTable load_dataset(std::istream& in, const DatasetSchema& schema);
DatasetTable load_dataset_file(const std::filesystem::path& path, const DatasetSchema& schema);

// Per-variable min-max scaling to [0, 1]; constant columns become 0.
DatasetTable normalize(const DatasetTable& table);

double row_to_node_value(std::span<const double> row);

// nullopt selects the whole table.
using GroupSelector = std::optional<std::string>;

std::vector<double> node_values(const DatasetTable& table, const GroupSelector& group);

CohesionReport group_cohesion_report(const DatasetTable& table, const GroupSelector& group);
double group_cohesion(const DatasetTable& table, const GroupSelector& group);

inline constexpr double default_chi_square_epsilon = 1e-9;

// Goodness of fit of the group's rows against the group mean vector:
//   (1 / rows) * sum_rows sum_j (x_ij - e_j)^2 / max(|e_j|, epsilon)
// With epsilon == 0 a zero expected value is a DomainError.
double chi_square_group(const DatasetTable& table, const GroupSelector& group,
                        double epsilon = default_chi_square_epsilon);

// Keyword-style presence matrix: rows are groups, columns are items. Each
// item's count is the number of groups holding it and the global extent is
// the number of groups.
CohesionReport presence_cohesion(const std::vector<std::vector<bool>>& presence);

enum class Normalization { none, minmax };

struct GroupScore {
    std::string group;
    std::string name;
    std::size_t rows = 0;
    double chi_square = 0.0;
    double cohesion = 0.0;
    double chi_square_pct = 0.0;  // of the whole-table value, signed
    double cohesion_pct = 0.0;
};

struct ModeReport {
    std::string mode;  // "raw" or "minmax"
    GroupScore whole;
    std::vector<GroupScore> categories;
};

struct BenchReport {
    std::vector<ModeReport> modes;
    std::string claim_mode;              // mode the directional check ran on
    bool cohesion_claim_holds = false;   // every category cohesion > whole
    std::vector<std::string> notes;      // sign flags and failed categories
};

BenchReport build_report(const DatasetTable& table, Normalization norm = Normalization::minmax);

void write_report_text(const BenchReport& report, std::ostream& out);
// Columns: group, mode, chi_square, cohesion, pct_of_whole_chi_square,
// pct_of_whole_cohesion.
void write_report_delimited(const BenchReport& report, std::ostream& out, char delimiter = '\t');

} // namespace cohere

#endif // COHERE_EVAL_HARNESS_HPP
