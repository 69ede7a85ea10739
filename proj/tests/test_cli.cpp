#include "cohere/cli.hpp"
#include "cohere/core_model.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace cohere;
using namespace cohere::cli;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("cohere_cli_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_args(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    args.insert(args.begin(), "cohere");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace

TEST_CASE("present builds a store and replaying doubles the counts")
{
    TempDir dir;
    const auto inputs = dir.write("in.txt", "t 1 1:1 2:1 3:1\n");
    const auto store = dir.path / "store.tsv";
    std::ostringstream out, err;
    REQUIRE(cmd_present(store, inputs, {}, out, err) == exit_ok);
    CHECK(out.str().find("# delta=0.5 omega_i=1 omega_g=1") == 0);
    CHECK(out.str().find("(created)") != std::string::npos);
    auto s = load_store_file(store);
    REQUIRE(s.patterns().size() == 1);
    CHECK(s.patterns()[0].group_events() == 1);

    REQUIRE(cmd_present(store, inputs, {}, out, err) == exit_ok);
    s = load_store_file(store);
    REQUIRE(s.patterns().size() == 1);
    CHECK(s.patterns()[0].group_events() == 2);
    for (const auto& [n, rec] : s.patterns()[0].records())
        CHECK(rec == CountRecord{2, 2, 2});
}

TEST_CASE("malformed input leaves the store untouched")
{
    TempDir dir;
    const auto good = dir.write("good.txt", "t 1 1:1 2:1\n");
    const auto bad = dir.write("bad.txt", "t 2 1:1\nt 3 2:oops\n");
    const auto store = dir.path / "store.tsv";
    std::ostringstream out, err;
    REQUIRE(cmd_present(store, good, {}, out, err) == exit_ok);
    const auto before = slurp(store);
    CHECK(cmd_present(store, bad, {}, out, err) == exit_usage);
    CHECK(err.str().find("line 2") != std::string::npos);
    CHECK(slurp(store) == before);
}

TEST_CASE("cohesion prints the pattern score and node verdicts")
{
    TempDir dir;
    const auto store = dir.write("s.tsv", "S\t2\t0\nP\t1\t5\n"
                                          "N\t1\t0\t2\t5\nN\t2\t0\t4\t5\nN\t3\t0\t2\t5\n"
                                          "N\t4\t0\t4\t5\nN\t5\t0\t3\t5\n");
    std::ostringstream out, err;
    REQUIRE(cmd_cohesion(store, {}, out, err) == exit_ok);
    const auto text = out.str();
    CHECK(text.find("cohesion=0.52") != std::string::npos);
    CHECK(text.find("node 1 R=0 CI=2 CG=5 gap=0.6 not-cohesive") != std::string::npos);
    CHECK(text.find("node 2 R=0 CI=4 CG=5 gap=0.2 cohesive") != std::string::npos);

    Options bad;
    bad.delta = 0;
    CHECK(cmd_cohesion(store, bad, out, err) == exit_usage);
}

TEST_CASE("split ranks removals and refuses bad targets")
{
    TempDir dir;
    const auto store = dir.write("s.tsv", "S\t3\t0\nP\t1\t5\n"
                                          "N\t1\t0\t2\t5\nN\t2\t0\t4\t5\nN\t3\t0\t2\t5\n"
                                          "N\t4\t0\t4\t5\nN\t5\t0\t3\t5\n"
                                          "P\t2\t1\nN\t9\t1\t1\t1\n");
    std::ostringstream out, err;
    REQUIRE(cmd_split(store, 1, {}, out, err) == exit_ok);
    const auto text = out.str();
    const auto row1 = text.find("        1  ");
    const auto row5 = text.find("        5  ");
    REQUIRE(row1 != std::string::npos);
    REQUIRE(row5 != std::string::npos);
    CHECK(row1 < row5);
    CHECK(text.find("suggested split:") != std::string::npos);

    std::ostringstream e2;
    CHECK(cmd_split(store, 2, {}, out, e2) == exit_usage);
    CHECK(e2.str().find("single node") != std::string::npos);

    std::ostringstream e3;
    CHECK(cmd_split(store, 7, {}, out, e3) == exit_usage);
    CHECK(e3.str().find("known ids: 1, 2") != std::string::npos);
}

TEST_CASE("simulate writes a trace and reports firings")
{
    TempDir dir;
    const auto scen = dir.write("sc.txt", "horizon 2\nthreshold 0.5\npattern 1 2\npattern 3\n"
                                          "E 1 1 1\nH 3 1 4\n");
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(scen, {}, out, err) == exit_ok);
    CHECK(out.str().rfind("neuron\tt\tX\n", 0) == 0);
    CHECK(err.str().find("fired: t=1 pattern=1") != std::string::npos);

    Options o;
    o.inhibit_delta = 0.0;
    o.out = dir.path / "trace.tsv";
    std::ostringstream out2, err2;
    REQUIRE(cmd_simulate(scen, o, out2, err2) == exit_ok);
    CHECK(slurp(o.out).find("1\t2\t2\n") != std::string::npos);

    const auto broken = dir.write("bad.txt", "pattern 1\nE 4 1 1\n");
    std::ostringstream e3;
    CHECK(cmd_simulate(broken, {}, out, e3) == exit_usage);
    CHECK(e3.str().find("line 2") != std::string::npos);
}

TEST_CASE("bench exit codes follow the directional check")
{
    TempDir dir;
    const auto pass = dir.write("pass.txt", "0 a\n0.1 a\n0.1 a\n0.1 a\n0.1 a\n"
                                            "10 b\n9.9 b\n9.9 b\n9.9 b\n9.9 b\n");
    const auto fail = dir.write("fail.txt", "0 a\n1 a\n9 b\n10 b\n");
    std::ostringstream out, err;
    CHECK(cmd_bench(pass, {}, out, err) == exit_ok);
    CHECK(out.str().find("pct_of_whole_cohesion") != std::string::npos);

    std::ostringstream e2;
    CHECK(cmd_bench(fail, {}, out, e2) == exit_acceptance);
    CHECK(e2.str().find("acceptance") != std::string::npos);

    Options csv;
    csv.delimiter = ",";
    csv.header = true;
    csv.label_col = 0;
    csv.out = dir.path / "report.tsv";
    const auto with_header = dir.write("h.csv", "label,x\na,0\na,0.1\na,0.1\na,0.1\na,0.1\n"
                                                "b,10\nb,9.9\nb,9.9\nb,9.9\nb,9.9\n");
    std::ostringstream out3, err3;
    CHECK(cmd_bench(with_header, csv, out3, err3) == exit_ok);
    CHECK(slurp(csv.out).rfind("group\tmode", 0) == 0);
}

TEST_CASE("command line parsing")
{
    TempDir dir;
    const auto inputs = dir.write("in.txt", "t 1 1:1\n");
    std::ostringstream out, err;
    CHECK(run_args({"present", (dir.path / "s.tsv").string(), inputs.string(), "--omega-i", "2"}, out,
                   err) == exit_ok);
    CHECK(load_store_file(dir.path / "s.tsv").patterns()[0].record(NodeId{1}).reinforcement == 2.0);

    CHECK(run_args({"frobnicate"}, out, err) == exit_usage);
    CHECK(run_args({}, out, err) == exit_usage);
    CHECK(run_args({"bench", inputs.string(), "--normalize", "zscore"}, out, err) == exit_usage);
    CHECK(run_args({"--help"}, out, err) == exit_ok);
}
