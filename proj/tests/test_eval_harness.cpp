#include "cohere/error.hpp"
#include "cohere/eval_harness.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace cohere;

namespace {

DatasetTable load(const std::string& text, DatasetSchema schema = {})
{
    std::istringstream in(text);
    return load_dataset(in, schema);
}

DatasetTable table_of(std::vector<std::vector<double>> rows, std::vector<std::string> labels)
{
    DatasetTable t;
    for (std::size_t k = 0; k < rows.front().size(); ++k)
        t.variables.push_back("v" + std::to_string(k + 1));
    t.rows = std::move(rows);
    t.labels = labels;
    for (const auto& l : labels)
        if (std::find(t.categories.begin(), t.categories.end(), l) == t.categories.end()) {
            t.categories.push_back(l);
            t.category_names.push_back(l);
        }
    return t;
}

} // namespace

TEST_CASE("toy table loads with shape and labels")
{
    const auto t = load("1 2 a\n3 4 b\n5 6 a\n");
    CHECK(t.rows.size() == 3);
    CHECK(t.arity() == 2);
    CHECK(t.labels == std::vector<std::string>{"a", "b", "a"});
    CHECK(t.categories == std::vector<std::string>{"a", "b"});
    CHECK(t.variables == std::vector<std::string>{"v1", "v2"});

    DatasetSchema csv;
    csv.delimiter = ',';
    csv.header = true;
    csv.label_column = 0;
    const auto h = load("class,x,y\nk, 1.5 ,2\n", csv);
    CHECK(h.variables == std::vector<std::string>{"x", "y"});
    CHECK(h.rows[0] == std::vector<double>{1.5, 2});
    CHECK(h.labels[0] == "k");
}

TEST_CASE("malformed tables name the row")
{
    auto line_of = [](const std::string& text, DatasetSchema schema = {}) {
        try {
            load(text, schema);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{99};
    };
    CHECK(line_of("1 2 a\n3 b\n") == 2);
    CHECK(line_of("1 2 a\n3 x a\n5 6 a\n") == 2);
    CHECK(line_of("1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 8\n",
                  statlog_segment_schema()) == 1);
}

TEST_CASE("min-max normalization")
{
    const auto n = normalize(table_of({{0, 7}, {5, 7}, {10, 7}}, {"a", "a", "b"}));
    CHECK(n.rows[0][0] == 0.0);
    CHECK(n.rows[1][0] == 0.5);
    CHECK(n.rows[2][0] == 1.0);
    for (const auto& r : n.rows)
        CHECK(r[1] == 0.0);
    CHECK(normalize(n).rows == n.rows);

    std::mt19937 rng(8);
    std::uniform_real_distribution<double> v(-50, 50);
    std::vector<std::vector<double>> rows(40, std::vector<double>(3));
    for (auto& r : rows)
        for (auto& x : r)
            x = v(rng);
    const auto t = table_of(rows, std::vector<std::string>(40, "g"));
    const auto m = normalize(t);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t a = 0; a < 40; ++a)
            for (std::size_t b = 0; b < 40; ++b) {
                CHECK(m.rows[a][j] >= 0.0);
                CHECK(m.rows[a][j] <= 1.0);
                if (t.rows[a][j] < t.rows[b][j])
                    CHECK(m.rows[a][j] <= m.rows[b][j]);
            }
}

TEST_CASE("row mean and node values")
{
    const std::vector<double> row{1, 2, 3, 6};
    CHECK(row_to_node_value(row) == 3.0);
    const auto t = table_of({{1, 3}, {2, 2}, {9, 9}}, {"a", "a", "b"});
    CHECK(node_values(t, std::string("a")) == std::vector<double>{2, 2});
    CHECK(node_values(t, std::nullopt) == std::vector<double>{2, 2, 9});
    CHECK_THROWS_AS(node_values(t, std::string("zz")), DomainError);
}

TEST_CASE("group cohesion agrees with the split recalculation rule")
{
    const auto flat = table_of({{2, 2}, {1, 3}}, {"a", "a"});
    CHECK(group_cohesion(flat, std::string("a")) == 1.0);

    const auto t = table_of({{1, 1}, {2, 2}, {5, 1}, {3, 3}}, {"a", "a", "b", "b"});
    for (const GroupSelector g : {GroupSelector{"a"}, GroupSelector{"b"}, GroupSelector{}}) {
        const auto v = node_values(t, g);
        CHECK(group_cohesion(t, g) ==
              doctest::Approx(oracle::cohesion(v, oracle::mean(v), oracle::maximum(v))).epsilon(1e-12));
    }
}

TEST_CASE("chi-square goodness of fit")
{
    const auto pair = table_of({{2}, {4}}, {"a", "a"});
    CHECK(chi_square_group(pair, std::string("a")) == 1.0 / 3.0);

    const auto constant = table_of({{3, 0}, {3, 0}, {3, 0}}, {"c", "c", "c"});
    CHECK(chi_square_group(constant, std::string("c")) == 0.0);
    CHECK_THROWS_AS(chi_square_group(constant, std::string("c"), 0.0), DomainError);

    std::mt19937 rng(41);
    std::uniform_real_distribution<double> v(-5, 5);
    std::uniform_int_distribution<int> len(1, 6);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::vector<double>> rows(len(rng), std::vector<double>(3));
        for (auto& r : rows)
            for (auto& x : r)
                x = v(rng);
        const auto t = table_of(rows, std::vector<std::string>(rows.size(), "g"));
        CHECK(chi_square_group(t, std::nullopt) >= 0.0);
    }
}

TEST_CASE("keyword presence fixture")
{
    // Five groups; every keyword appears in three of them.
    const std::vector<std::vector<bool>> three{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {0, 0, 0}};
    const auto r = presence_cohesion(three);
    CHECK(r.count_factor == 0.6);
    CHECK(r.var_coefficient == 1.0);
    CHECK(r.cohesion == 0.6);

    const std::vector<std::vector<bool>> all(5, std::vector<bool>{1, 1, 1});
    CHECK(presence_cohesion(all).cohesion == 1.0);

    CHECK_THROWS_AS(presence_cohesion({}), DomainError);
    CHECK_THROWS_AS(presence_cohesion({{1, 0}, {1}}), DomainError);
}

TEST_CASE("report on a single category is its own whole")
{
    const auto t = table_of({{1, 2}, {3, 5}, {2, 2}}, {"a", "a", "a"});
    const auto rep = build_report(t);
    REQUIRE(rep.modes.size() == 2);
    CHECK(rep.modes[0].mode == "raw");
    CHECK(rep.modes[1].mode == "minmax");
    CHECK(rep.claim_mode == "minmax");
    for (const auto& m : rep.modes) {
        REQUIRE(m.categories.size() == 1);
        CHECK(m.categories[0].cohesion_pct == doctest::Approx(100.0));
        CHECK(m.categories[0].chi_square_pct == doctest::Approx(100.0));
    }
    CHECK_FALSE(rep.cohesion_claim_holds);

    const auto raw = build_report(t, Normalization::none);
    CHECK(raw.modes.size() == 1);
    CHECK(raw.claim_mode == "raw");
}

TEST_CASE("report output is deterministic")
{
    const auto t = table_of({{1, 2}, {3, 5}, {2, 2}, {8, 1}, {7, 6}}, {"a", "b", "a", "b", "b"});
    std::ostringstream a, b, c;
    write_report_text(build_report(t), a);
    write_report_text(build_report(t), b);
    CHECK(a.str() == b.str());
    write_report_delimited(build_report(t), c);
    CHECK(c.str().rfind("group\tmode\tchi_square\tcohesion\tpct_of_whole_chi_square\t"
                        "pct_of_whole_cohesion\n",
                        0) == 0);
}

TEST_CASE("statlog segment data loads with seven named categories")
{
    const auto t = load_dataset_file(COHERE_DATA_DIR "/statlog/segment.dat", statlog_segment_schema());
    CHECK(t.rows.size() == 2310);
    CHECK(t.arity() == 19);
    REQUIRE(t.categories.size() == 7);
    CHECK(t.category_names[0] == "brickface");
    CHECK(t.category_names[6] == "grass");

    // Independent row mean from the raw text.
    std::ifstream in(COHERE_DATA_DIR "/statlog/segment.dat");
    std::string first;
    std::getline(in, first);
    std::istringstream fields(first);
    long double sum = 0;
    double x;
    for (int k = 0; k < 19 && fields >> x; ++k)
        sum += x;
    CHECK(row_to_node_value(t.rows[0]) == doctest::Approx(static_cast<double>(sum / 19)).epsilon(1e-12));
}
