// Command-line front end: wires ingestion -> graph -> ranking -> simulation
// -> strategies -> evaluation into reproducible experiments.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mobrisk/evaluate.hpp"
#include "mobrisk/graph.hpp"
#include "mobrisk/ingest.hpp"
#include "mobrisk/rank.hpp"
#include "mobrisk/simulate.hpp"
#include "mobrisk/strategy.hpp"
#include "mobrisk/types.hpp"
#include "mobrisk/util.hpp"

namespace {

using namespace mobrisk;

constexpr const char* kBuiltinName = "paper-synthetic";

struct InputOpts {
    std::string visits_path;
    std::string meta_path;
    std::string builtin;
    std::string weighting = "binary";
};

void add_input_options(CLI::App* cmd, InputOpts& opts) {
    cmd->add_option("--visits", opts.visits_path, "Visit log CSV (location,user,time)");
    cmd->add_option("--meta", opts.meta_path, "Location metadata CSV (location,x,y,routes,zone)");
    cmd->add_option("--builtin", opts.builtin,
                    std::string("Bundled dataset instead of --visits ('") + kBuiltinName + "')");
    cmd->add_option("--weighting", opts.weighting, "Edge weighting: binary|count")
        ->check(CLI::IsMember({"binary", "count"}));
}

std::ifstream open_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return in;
}

MobilityDataset load_dataset(const InputOpts& opts) {
    MobilityDataset dataset;
    if (!opts.builtin.empty() && !opts.visits_path.empty())
        throw UsageError("give either --visits or --builtin, not both");
    if (!opts.builtin.empty()) {
        if (opts.builtin != kBuiltinName)
            throw UsageError("unknown builtin dataset '" + opts.builtin + "'");
        dataset = builtin_synthetic();
    } else if (!opts.visits_path.empty()) {
        auto in = open_file(opts.visits_path);
        dataset = parse_visits(in);
    } else {
        throw UsageError("no input: give --visits PATH or --builtin " + std::string(kBuiltinName));
    }
    if (!opts.meta_path.empty()) {
        auto in = open_file(opts.meta_path);
        dataset.meta = parse_location_meta(in);
    }
    return dataset;
}

BipartiteGraph::Weighting parse_weighting(const InputOpts& opts) {
    return opts.weighting == "count" ? BipartiteGraph::Weighting::VisitCount
                                     : BipartiteGraph::Weighting::Binary;
}

NodeRef parse_node_ref(const std::string& text) {
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        std::string cls = text.substr(0, colon), id = text.substr(colon + 1);
        if (cls == "person" && !id.empty()) return {NodeClass::Person, id};
        if (cls == "location" && !id.empty()) return {NodeClass::Location, id};
    }
    throw UsageError("source must look like person:18 or location:C, got '" + text + "'");
}

SourceSpec to_source_spec(const NodeRef& node) {
    return node.cls == NodeClass::Person ? SourceSpec::fixed_person(node.id)
                                         : SourceSpec::random_visitor_of(node.id);
}

std::vector<double> parse_capacities(const std::string& csv) {
    std::vector<double> grid;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            grid.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("bad capacity '" + item + "'");
        }
    }
    if (grid.empty()) throw UsageError("empty capacity grid");
    return grid;
}

std::vector<double> default_capacities() {
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(static_cast<double>(i) / 20.0);
    return grid;
}

std::vector<Strategy> parse_strategies(const std::string& csv) {
    std::vector<Strategy> kinds;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto kind = strategy_from_string(item);
        if (!kind || *kind == Strategy::AllKnowing)
            throw UsageError("unknown strategy '" + item +
                             "' (expected base|location|route|pr|ppr)");
        kinds.push_back(*kind);
    }
    if (kinds.empty()) throw UsageError("empty strategy list");
    return kinds;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << contents;
}

// ---- subcommand state ----

struct BuildArgs {
    InputOpts input;
    std::string out_path;
};

struct RankArgs {
    InputOpts input;
    std::string algo;
    std::vector<std::string> sources;
    double damping = 0.85;
    double tol = 1e-10;
    int max_iter = 1000;
    bool normalize = false;
    std::string out_path;
};

struct SimulateArgs {
    InputOpts input;
    std::string source;
    double beta = 0.4;
    int isolation_step = 1;
    int replications = 1000;
    std::uint64_t seed = 0;
    std::string out_path;
};

struct EvaluateArgs {
    InputOpts input;
    std::string source;
    std::string route;
    std::string cases_path;
    std::string strategies = "base,pr,ppr";
    std::string capacities;
    double damping = 0.85;
    double tol = 1e-10;
    int max_iter = 1000;
    double beta = 0.4;
    int isolation_step = 1;
    int replications = 1000;
    int threshold = 1;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string out_file;  // sweep only
};

int run_build(const BuildArgs& args) {
    MobilityDataset dataset = load_dataset(args.input);
    BipartiteGraph graph = build_graph(dataset, parse_weighting(args.input));
    std::cout << graph.person_count() << " persons, " << graph.location_count() << " locations, "
              << graph.edge_count() << " edges\n";
    double e = static_cast<double>(graph.edge_count());
    std::cout << "average degree: persons "
              << format_double(e / static_cast<double>(graph.person_count())) << ", locations "
              << format_double(e / static_cast<double>(graph.location_count())) << "\n";
    if (!args.out_path.empty()) {
        std::ostringstream dump;
        write_edges_csv(dump, graph);
        write_file(args.out_path, dump.str());
    }
    return 0;
}

int run_rank(const RankArgs& args) {
    MobilityDataset dataset = load_dataset(args.input);
    BipartiteGraph graph = build_graph(dataset, parse_weighting(args.input));
    RankConfig config{args.damping, args.tol, args.max_iter, std::nullopt};

    ScoreVector scores;
    if (args.algo == "pr") {
        if (!args.sources.empty()) throw UsageError("pr does not take --source");
        scores = pagerank(graph, config);
    } else {
        if (args.sources.empty()) throw UsageError("ppr requires --source class:id");
        std::vector<NodeRef> seeds;
        for (const std::string& s : args.sources) seeds.push_back(parse_node_ref(s));
        scores = personalized_pagerank(graph, config, seeds);
    }
    if (args.normalize) scores = normalized(std::move(scores));

    std::ostringstream csv;
    write_scores_csv(csv, graph, scores);
    if (args.out_path.empty())
        std::cout << csv.str();
    else
        write_file(args.out_path, csv.str());
    std::cerr << "iterations=" << scores.iterations << " converged="
              << (scores.converged ? "true" : "false") << "\n";
    return 0;
}

int run_simulate(const SimulateArgs& args) {
    MobilityDataset dataset = load_dataset(args.input);
    SimConfig config{args.beta, to_source_spec(parse_node_ref(args.source)), args.isolation_step,
                     args.replications, args.seed};
    InfectionTally tally = run_simulation(dataset, config);

    std::ostringstream csv;
    write_tally_csv(csv, tally);
    if (args.out_path.empty())
        std::cout << csv.str();
    else
        write_file(args.out_path, csv.str());

    std::int64_t total = 0;
    for (std::int64_t c : tally.counts) total += c;
    std::cerr << "mean infections per replication: "
              << format_double(static_cast<double>(total) /
                               static_cast<double>(tally.replications))
              << "\n";
    return 0;
}

ExperimentSpec make_spec(const EvaluateArgs& args, const MobilityDataset& dataset) {
    if (args.source.empty()) throw UsageError("evaluate requires --source class:id");
    ExperimentSpec spec{
        .dataset = dataset,
        .weighting = parse_weighting(args.input),
        .rank_config = {args.damping, args.tol, args.max_iter, std::nullopt},
        .sim = {args.beta, to_source_spec(parse_node_ref(args.source)), args.isolation_step,
                args.replications, args.seed},
        .strategies = parse_strategies(args.strategies),
        .capacities =
            args.capacities.empty() ? default_capacities() : parse_capacities(args.capacities),
        .infected_threshold = args.threshold,
        .route = args.route.empty() ? std::nullopt : std::optional<std::string>(args.route),
        .case_counts = {},
        .seed = args.seed,
    };
    if (!args.cases_path.empty()) {
        auto in = open_file(args.cases_path);
        spec.case_counts = parse_case_counts(in);
    }
    return spec;
}

int run_evaluate(const EvaluateArgs& args) {
    MobilityDataset dataset = load_dataset(args.input);
    ExperimentSpec spec = make_spec(args, dataset);
    EvalReport report = build_report(spec);

    std::filesystem::path dir(args.out_dir);
    std::filesystem::create_directories(dir);
    std::ostringstream json, curves;
    write_report_json(json, report);
    write_curves_csv(curves, report);
    write_file(dir / "report.json", json.str());
    write_file(dir / "curves.csv", curves.str());
    if (!report.accuracy.empty()) {
        std::ostringstream acc, rho;
        write_metric_csv(acc, report.accuracy, "strategy,accuracy");
        write_metric_csv(rho, report.spearman, "strategy,spearman");
        write_file(dir / "accuracy.csv", acc.str());
        write_file(dir / "spearman.csv", rho.str());
        for (const auto& [kind, zones] : report.zones) {
            std::ostringstream csv;
            write_zone_csv(csv, zones);
            write_file(dir / ("zones_" + to_string(kind) + ".csv"), csv.str());
        }
    }

    // testing orders, one file per strategy
    BipartiteGraph graph = build_graph(dataset, spec.weighting);
    for (Strategy kind : spec.strategies) {
        std::ostringstream csv;
        write_priority_csv(csv, strategy_priority(kind, spec, graph));
        write_file(dir / ("priority_" + to_string(kind) + ".csv"), csv.str());
    }

    std::cerr << "infected " << report.infected.size() << "/" << report.population
              << ", all-knowing full recall at capacity "
              << format_double(report.full_recall_capacity) << "\n";
    return 0;
}

int run_sweep(const EvaluateArgs& args) {
    MobilityDataset dataset = load_dataset(args.input);
    ExperimentSpec spec = make_spec(args, dataset);
    EvalReport report = build_report(spec);
    std::ostringstream curves;
    write_curves_csv(curves, report);
    if (args.out_file.empty())
        std::cout << curves.str();
    else
        write_file(args.out_file, curves.str());
    return 0;
}

void add_rank_params(CLI::App* cmd, EvaluateArgs& args) {
    cmd->add_option("--damping", args.damping, "Damping factor in [0,1]");
    cmd->add_option("--tol", args.tol, "Per-node convergence threshold");
    cmd->add_option("--max-iter", args.max_iter, "Iteration cap");
}

void add_sim_params(CLI::App* cmd, EvaluateArgs& args) {
    cmd->add_option("--source", args.source, "Outbreak source, person:ID or location:ID");
    cmd->add_option("--beta", args.beta, "Infection rate per infectious step");
    cmd->add_option("--isolation-step", args.isolation_step, "Step at which the source is removed");
    cmd->add_option("--replications", args.replications, "Simulation replications");
    cmd->add_option("--threshold", args.threshold, "Min infections to count a person positive");
    cmd->add_option("--seed", args.seed, "RNG seed");
}

void add_strategy_params(CLI::App* cmd, EvaluateArgs& args) {
    cmd->add_option("--strategies", args.strategies,
                    "Comma list of base|location|route|pr|ppr");
    cmd->add_option("--capacities", args.capacities,
                    "Comma list of testing capacities in (0,1]; default 0.05..1.00");
    cmd->add_option("--route", args.route, "Route token for the route strategy");
    cmd->add_option("--cases", args.cases_path, "Zone case counts CSV (zone,cases)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"People-location mobility networks: transmission risk scores, outbreak "
                 "simulation, and tracing strategy evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "INI config file: one [subcommand] section per command, keys = long option "
                   "names; command-line flags win");
    app.allow_config_extras(false);  // unknown keys are rejected

    BuildArgs build_args;
    auto* build_cmd = app.add_subcommand("build", "Build the bipartite graph and print a summary");
    add_input_options(build_cmd, build_args.input);
    build_cmd->add_option("--out", build_args.out_path, "Write the edge list CSV here");

    RankArgs rank_args;
    auto* rank_cmd = app.add_subcommand("rank", "Score nodes by network rank");
    add_input_options(rank_cmd, rank_args.input);
    rank_cmd->add_option("--algo", rank_args.algo, "pr or ppr")
        ->required()
        ->check(CLI::IsMember({"pr", "ppr"}));
    rank_cmd->add_option("--source", rank_args.sources,
                         "Source node class:id (repeatable for multi-seed ppr)");
    rank_cmd->add_option("--damping", rank_args.damping, "Damping factor in [0,1]");
    rank_cmd->add_option("--tol", rank_args.tol, "Per-node convergence threshold");
    rank_cmd->add_option("--max-iter", rank_args.max_iter, "Iteration cap");
    rank_cmd->add_flag("--normalize", rank_args.normalize, "Scale scores to sum to 1");
    rank_cmd->add_option("--out", rank_args.out_path, "Score CSV path (default stdout)");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Run the transmission simulation");
    add_input_options(sim_cmd, sim_args.input);
    sim_cmd->add_option("--source", sim_args.source, "person:ID or location:ID")->required();
    sim_cmd->add_option("--beta", sim_args.beta, "Infection rate per infectious step");
    sim_cmd->add_option("--isolation-step", sim_args.isolation_step,
                        "Step at which the source is removed");
    sim_cmd->add_option("--replications", sim_args.replications, "Replication count");
    sim_cmd->add_option("--seed", sim_args.seed, "RNG seed");
    sim_cmd->add_option("--out", sim_args.out_path, "Tally CSV path (default stdout)");

    EvaluateArgs eval_args;
    auto* eval_cmd = app.add_subcommand(
        "evaluate", "Full pipeline: simulate, rank, compare strategies, write the report");
    add_input_options(eval_cmd, eval_args.input);
    add_rank_params(eval_cmd, eval_args);
    add_sim_params(eval_cmd, eval_args);
    add_strategy_params(eval_cmd, eval_args);
    eval_cmd->add_option("--out", eval_args.out_dir, "Output directory (default .)");

    EvaluateArgs sweep_args;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Recall-vs-capacity table only (no zone metrics)");
    add_input_options(sweep_cmd, sweep_args.input);
    add_rank_params(sweep_cmd, sweep_args);
    add_sim_params(sweep_cmd, sweep_args);
    add_strategy_params(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--out", sweep_args.out_file, "Curve CSV path (default stdout)");

    try {
        app.parse(argc, argv);
        if (build_cmd->parsed()) return run_build(build_args);
        if (rank_cmd->parsed()) return run_rank(rank_args);
        if (sim_cmd->parsed()) return run_simulate(sim_args);
        if (eval_cmd->parsed()) return run_evaluate(eval_args);
        if (sweep_cmd->parsed()) return run_sweep(sweep_args);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
