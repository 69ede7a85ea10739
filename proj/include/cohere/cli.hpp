#ifndef COHERE_CLI_HPP
#define COHERE_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace cohere::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,       // bad usage, parse or I/O error
    exit_acceptance = 2,  // bench directional check failed
};

struct Options {
    double delta = 0.5;         // node cohesion threshold
    double omega_i = 1.0;
    double omega_g = 1.0;
    std::optional<double> inhibit_delta;  // overrides the scenario's delta
    double decay = 1.0;         // applied before every presentation when < 1
    double new_instance_threshold = 1.0;
    bool signal_scaled = false;
    std::string normalize = "minmax";
    std::string schema = "generic";
    int label_col = -1;
    std::string delimiter;      // empty: whitespace
    bool header = false;
    std::filesystem::path out;  // empty: stdout
};

// Each command validates its parameters, reports errors on `err` and returns
// an ExitCode.
int cmd_present(const std::filesystem::path& store_path, const std::filesystem::path& inputs_path,
                const Options& opts, std::ostream& out, std::ostream& err);
int cmd_cohesion(const std::filesystem::path& store_path, const Options& opts, std::ostream& out,
                 std::ostream& err);
int cmd_split(const std::filesystem::path& store_path, std::uint64_t pattern_id,
              const Options& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const std::filesystem::path& scenario_path, const Options& opts,
                 std::ostream& out, std::ostream& err);
int cmd_bench(const std::filesystem::path& dataset_path, const Options& opts, std::ostream& out,
              std::ostream& err);

// Full command line, argv[0] included.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cohere::cli

#endif // COHERE_CLI_HPP
