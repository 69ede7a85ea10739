#include "cohere/cli.hpp"

#include "cohere/activation.hpp"
#include "cohere/cohesion.hpp"
#include "cohere/core_model.hpp"
#include "cohere/error.hpp"
#include "cohere/eval_harness.hpp"
#include "cohere/reinforcement.hpp"
#include "cohere/split_search.hpp"
#include "cohere/text.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cohere::cli {

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string delta_str(double v)
{
    std::ostringstream os;
    os << std::showpos << std::setprecision(6) << v;
    return os.str();
}

void print_header(const Options& o, std::ostream& out)
{
    out << "# delta=" << num(o.delta) << " omega_i=" << num(o.omega_i)
        << " omega_g=" << num(o.omega_g)
        << " inhibit_delta=" << (o.inhibit_delta ? num(*o.inhibit_delta) : std::string("0.5"))
        << " decay=" << num(o.decay) << (o.decay == 1.0 ? " (off)" : "")
        << " normalize=" << o.normalize << '\n';
}

UpdateConfig update_config(const Options& o)
{
    UpdateConfig cfg;
    cfg.omega_i = o.omega_i;
    cfg.omega_g = o.omega_g;
    cfg.decay_factor = o.decay;
    cfg.new_instance_overlap_threshold = o.new_instance_threshold;
    cfg.signal_scaled = o.signal_scaled;
    cfg.validate();
    return cfg;
}

CohesionThreshold threshold(const Options& o)
{
    CohesionThreshold thr{o.delta};
    thr.validate();
    return thr;
}

// Runs `body`, mapping library exceptions onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return exit_usage;
}

// Prefixes parse errors with the file they came from.
template <class F>
auto from_file(const std::filesystem::path& path, F&& body)
{
    try {
        return body();
    } catch (const ParseError& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

PatternStore load_store_at(const std::filesystem::path& path)
{
    return from_file(path, [&] { return load_store_file(path); });
}

PatternStore load_or_fresh(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path))
        return {};
    return load_store_at(path);
}

} // namespace

int cmd_present(const std::filesystem::path& store_path, const std::filesystem::path& inputs_path,
                const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto cfg = update_config(opts);
        std::ifstream in(inputs_path);
        if (!in)
            throw std::runtime_error("cannot open " + inputs_path.string());
        const auto inputs = from_file(inputs_path, [&] { return parse_input_patterns(in); });
        PatternStore store = load_or_fresh(store_path);

        print_header(opts, out);
        for (const auto& ip : inputs) {
            if (cfg.decay_factor < 1.0)
                store = decay(std::move(store), cfg);
            const PatternStore before = store;
            const auto summary = apply_presentation(store, ip, cfg);

            out << "input t=" << ip.timestamp() << " nodes=" << ip.size()
                << " best_overlap=" << num(summary.best_overlap) << '\n';
            auto report = [&](PatternId id, bool created) {
                const auto& now = *store.find(id);
                const auto* old = before.find(id);
                out << "  pattern " << id.value << (created ? " (created)" : "") << ": N_g "
                    << (old ? old->group_events() : 0) << " -> " << now.group_events() << '\n';
                for (const auto& [node, rec] : now.records()) {
                    const CountRecord prev = old ? old->record(node) : CountRecord{};
                    out << "    node " << node.value << ": dR=" << delta_str(rec.reinforcement - prev.reinforcement)
                        << " dCI=" << delta_str(rec.individual_count - prev.individual_count)
                        << " dCG=" << delta_str(rec.group_count - prev.group_count) << '\n';
                }
            };
            for (PatternId id : summary.updated)
                report(id, false);
            if (summary.created)
                report(*summary.created, true);
        }
        save_store_file(store, store_path);
        out << "store: " << store.patterns().size() << " pattern(s) written to "
            << store_path.string() << '\n';
        return int{exit_ok};
    });
}

int cmd_cohesion(const std::filesystem::path& store_path, const Options& opts, std::ostream& out,
                 std::ostream& err)
{
    return guarded(err, [&] {
        const auto thr = threshold(opts);
        const auto store = load_store_at(store_path);
        print_header(opts, out);
        for (const auto& p : store.patterns()) {
            out << "pattern " << p.id().value << " nodes=" << p.size() << " N_g=" << p.group_events();
            if (p.group_events() == 0) {
                out << " cohesion=undefined (no group events)\n";
                continue;
            }
            const auto r = pattern_cohesion(p);
            out << " lav=" << num(r.local_mean) << " gav=" << num(r.global_mean)
                << " var=" << num(r.var_coefficient) << " cf=" << num(r.count_factor)
                << " cohesion=" << num(r.cohesion) << '\n';
            for (const auto& [node, rec] : p.records()) {
                const double gap =
                    (rec.group_count - rec.individual_count) / static_cast<double>(p.group_events());
                out << "  node " << node.value << " R=" << num(rec.reinforcement)
                    << " CI=" << num(rec.individual_count) << " CG=" << num(rec.group_count)
                    << " gap=" << num(gap)
                    << (node_cohesion_count(p, node, thr) ? " cohesive" : " not-cohesive") << '\n';
            }
        }
        return int{exit_ok};
    });
}

int cmd_split(const std::filesystem::path& store_path, std::uint64_t pattern_id,
              const Options& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto thr = threshold(opts);
        const auto store = load_store_at(store_path);
        const auto* p = store.find(PatternId{pattern_id});
        if (!p) {
            std::string known;
            for (const auto& q : store.patterns())
                known += (known.empty() ? "" : ", ") + std::to_string(q.id().value);
            err << "error: unknown pattern " << pattern_id << "; known ids: "
                << (known.empty() ? "none" : known) << '\n';
            return int{exit_usage};
        }
        if (p->size() < 2) {
            err << "error: pattern " << pattern_id
                << " has a single node; a single node is already maximally cohesive and cannot be split\n";
            return int{exit_usage};
        }

        print_header(opts, out);
        const auto counts = individual_counts(*p);
        out << "pattern " << pattern_id << " single-node removals (CI counts):\n";
        out << "  rank  removed  remainder  composite\n";
        int rank = 1;
        for (const auto& r : rank_single_removals(counts)) {
            out << "  " << std::setw(4) << rank++ << "  " << std::setw(7) << r.removed.value << "  "
                << std::setw(9) << num(r.evaluation.remainder_cohesion) << "  "
                << std::setw(9) << num(r.evaluation.composite) << '\n';
        }
        if (p->group_events() == 0) {
            out << "suggested split: none (no group events)\n";
            return int{exit_ok};
        }
        const auto suggestion = suggest_split(*p, thr);
        if (!suggestion) {
            out << "suggested split: none\n";
        } else {
            out << "suggested split:";
            for (const auto& part : suggestion->parts) {
                out << " {";
                for (std::size_t k = 0; k < part.size(); ++k)
                    out << (k ? "," : "") << part[k].value;
                out << '}';
            }
            out << " composite=" << num(evaluate_split(counts, *suggestion).composite)
                << " unsplit=" << num(pattern_cohesion(*p).cohesion) << '\n';
        }
        return int{exit_ok};
    });
}

int cmd_simulate(const std::filesystem::path& scenario_path, const Options& opts,
                 std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        std::ifstream in(scenario_path);
        if (!in)
            throw std::runtime_error("cannot open " + scenario_path.string());
        auto state = from_file(scenario_path, [&] { return parse_scenario(in); });
        if (opts.inhibit_delta) {
            auto cfg = state.config();
            cfg.delta = *opts.inhibit_delta;
            ActivationState replaced(state.patterns(), state.external(), cfg);
            for (const auto& [key, v] : state.excitatory_ledger())
                replaced.set_excitatory(key.first, key.second, v);
            for (const auto& [key, v] : state.inhibitory_ledger())
                replaced.set_inhibitory(key.first, key.second, v);
            state = std::move(replaced);
        }
        const auto trace = run(state);
        if (opts.out.empty()) {
            write_trace(trace, out);
        } else {
            std::ofstream f(opts.out);
            if (!f)
                throw std::runtime_error("cannot write " + opts.out.string());
            write_trace(trace, f);
            out << "trace: " << trace.x.size() << " rows written to " << opts.out.string() << '\n';
        }
        for (const auto& [t, k] : trace.firings)
            err << "fired: t=" << t << " pattern=" << k + 1 << '\n';
        return int{exit_ok};
    });
}

int cmd_bench(const std::filesystem::path& dataset_path, const Options& opts, std::ostream& out,
              std::ostream& err)
{
    return guarded(err, [&] {
        Normalization norm;
        if (opts.normalize == "minmax")
            norm = Normalization::minmax;
        else if (opts.normalize == "none")
            norm = Normalization::none;
        else
            throw DomainError("--normalize must be minmax or none");

        DatasetSchema schema;
        if (opts.schema == "statlog") {
            schema = statlog_segment_schema();
        } else if (opts.schema != "generic") {
            throw DomainError("--schema must be statlog or generic");
        }
        if (opts.schema == "generic" || opts.label_col != -1)
            schema.label_column = opts.label_col;
        if (!opts.delimiter.empty()) {
            if (opts.delimiter.size() != 1)
                throw DomainError("--delimiter must be a single character");
            schema.delimiter = opts.delimiter == " " ? '\0' : opts.delimiter[0];
        }
        schema.header = schema.header || opts.header;

        const auto table = from_file(dataset_path, [&] { return load_dataset_file(dataset_path, schema); });
        const auto report = build_report(table, norm);

        print_header(opts, out);
        out << "# dataset " << dataset_path.string() << ": " << table.rows.size() << " rows, "
            << table.arity() << " variables, " << table.categories.size() << " categories\n";
        write_report_text(report, out);
        if (opts.out.empty()) {
            out << '\n';
            write_report_delimited(report, out);
        } else {
            std::ofstream f(opts.out);
            if (!f)
                throw std::runtime_error("cannot write " + opts.out.string());
            write_report_delimited(report, f);
        }
        if (!report.cohesion_claim_holds) {
            err << "acceptance: not every " << report.claim_mode
                << " category cohesion exceeds the whole-dataset cohesion\n";
            return int{exit_acceptance};
        }
        return int{exit_ok};
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Pattern cohesion clustering toolkit"};
    app.require_subcommand(1);
    Options opts;
    std::string out_path;

    auto add_counting = [&](CLI::App* sub) {
        sub->add_option("--delta", opts.delta, "Node cohesion threshold")->capture_default_str();
        sub->add_option("--omega-i", opts.omega_i, "Individual increment")->capture_default_str();
        sub->add_option("--omega-g", opts.omega_g, "Group increment")->capture_default_str();
        sub->add_option("--decay", opts.decay, "Reinforcement decay factor in (0,1]")
            ->capture_default_str();
    };

    std::string store_path, inputs_path, scenario_path, dataset_path;
    std::uint64_t pattern_id = 0;
    double inhibit = 0.5;

    auto* present = app.add_subcommand("present", "Apply input patterns to a store");
    present->add_option("store", store_path, "Store file (created if missing)")->required();
    present->add_option("inputs", inputs_path, "Input pattern file")->required()->check(CLI::ExistingFile);
    add_counting(present);
    present->add_option("--new-instance-threshold", opts.new_instance_threshold,
                        "Create an instance when the best overlap is below this")
        ->capture_default_str();
    present->add_flag("--signal-scaled", opts.signal_scaled, "Scale R increments by the signal");

    auto* cohesion = app.add_subcommand("cohesion", "Report pattern and node cohesion");
    cohesion->add_option("store", store_path, "Store file")->required()->check(CLI::ExistingFile);
    add_counting(cohesion);

    auto* split = app.add_subcommand("split", "Rank single-node removals and suggest a split");
    split->add_option("store", store_path, "Store file")->required()->check(CLI::ExistingFile);
    split->add_option("pattern", pattern_id, "Pattern id")->required();
    add_counting(split);

    auto* simulate = app.add_subcommand("simulate", "Run an activation scenario");
    simulate->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    auto* inhibit_opt = simulate->add_option("--inhibit-delta", inhibit, "Override the inhibition weight");
    simulate->add_option("--out", out_path, "Trace output file");

    auto* bench = app.add_subcommand("bench", "Cohesion vs chi-square on a labeled dataset");
    bench->add_option("dataset", dataset_path, "Dataset file")->required()->check(CLI::ExistingFile);
    bench->add_option("--normalize", opts.normalize, "minmax or none")
        ->check(CLI::IsMember({"minmax", "none"}))
        ->capture_default_str();
    bench->add_option("--schema", opts.schema, "statlog or generic")
        ->check(CLI::IsMember({"statlog", "generic"}))
        ->capture_default_str();
    bench->add_option("--label-col", opts.label_col, "Label column, negative counts from the end")
        ->capture_default_str();
    bench->add_option("--delimiter", opts.delimiter, "Field delimiter (default whitespace)");
    bench->add_flag("--header", opts.header, "First line holds column names");
    bench->add_option("--out", out_path, "Machine-readable report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? int{exit_ok} : int{exit_usage};
    }
    opts.out = out_path;
    if (inhibit_opt->count())
        opts.inhibit_delta = inhibit;

    if (*present)
        return cmd_present(store_path, inputs_path, opts, out, err);
    if (*cohesion)
        return cmd_cohesion(store_path, opts, out, err);
    if (*split)
        return cmd_split(store_path, pattern_id, opts, out, err);
    if (*simulate)
        return cmd_simulate(scenario_path, opts, out, err);
    return cmd_bench(dataset_path, opts, out, err);
}

} // namespace cohere::cli
