// swarmplan: planner and simulator for sharding computation graphs across a
// heterogeneous node swarm. Subcommands: partition, swarm, tune, ph, simulate.

#include "swarmplan/brkga.hpp"
#include "swarmplan/json_util.hpp"
#include "swarmplan/simulator.hpp"
#include "swarmplan/tuner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

using namespace swarmplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitInfeasible = 4;

Mode parse_mode(const std::string& mode) {
    if (mode == "default") return Mode::Default;
    if (mode == "strict-paper") return Mode::StrictPaper;
    throw CLI::ValidationError("--mode", "must be 'default' or 'strict-paper'");
}

OverflowMode overflow_of(Mode mode) {
    return mode == Mode::Default ? OverflowMode::Clamped : OverflowMode::StrictPaper;
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string row;
    for (const std::string& c : cells) {
        if (!row.empty()) row += ",";
        row += c;
    }
    return row + "\n";
}

struct PartitionArgs {
    std::string graph_file, method = "dp", mode = "default", out_dir = "out";
    std::string config_file;
    std::size_t k = 1;
    double capacity = 0.0, bandwidth = 1.0;
    std::uint64_t seed = 1;
    std::size_t pop = 100, generations = 100;
    double elite = 0.2, mutants = 0.15, alpha = 0.7;
    bool pop_set = false, generations_set = false;
};

/// Optional settings document: {"brkga": {...}} / {"tuner": {...}} sections
/// with per-field overrides; explicit command-line flags win.
json load_settings(const std::string& file, const char* section) {
    if (file.empty()) return json::object();
    const json doc = parse_json_document(read_text_file(file), file);
    require_object(doc, file, {"brkga", "tuner"});
    if (!doc.contains(section)) return json::object();
    return doc[section];
}

int cmd_partition(const PartitionArgs& args) {
    const CompGraph graph = load_graph(args.graph_file);
    const MemorySpec mem{args.capacity, args.bandwidth};
    CostOptions cost_opts;
    cost_opts.overflow_mode = overflow_of(parse_mode(args.mode));

    Partition partition;
    std::vector<double> history;
    if (args.method == "dp") {
        const TopoOrder order = kahn_topo_sort(graph);
        const SegmentCostOracle oracle = build_segment_cost(graph, order, mem, cost_opts);
        const SliceResult sliced = slice_graph_dp(oracle, graph.size(), args.k);
        partition = Partition{order.order, sliced.cuts, sliced.bottleneck};
    } else if (args.method == "brkga") {
        BrkgaConfig config;
        config.population_size = args.pop;
        config.generations = args.generations;
        config.elite_fraction = args.elite;
        config.mutant_fraction = args.mutants;
        config.crossover_alpha = args.alpha;
        const json settings = load_settings(args.config_file, "brkga");
        require_object(settings, args.config_file + ": brkga",
                       {"population_size", "generations", "elite_fraction", "mutant_fraction",
                        "crossover_alpha", "stagnation_limit", "per_gene_crossover",
                        "elite_inherit_prob"});
        if (settings.contains("population_size") && !args.pop_set)
            config.population_size = settings["population_size"].get<std::size_t>();
        if (settings.contains("generations") && !args.generations_set)
            config.generations = settings["generations"].get<std::size_t>();
        if (settings.contains("elite_fraction"))
            config.elite_fraction = settings["elite_fraction"].get<double>();
        if (settings.contains("mutant_fraction"))
            config.mutant_fraction = settings["mutant_fraction"].get<double>();
        if (settings.contains("crossover_alpha"))
            config.crossover_alpha = settings["crossover_alpha"].get<double>();
        if (settings.contains("stagnation_limit"))
            config.stagnation_limit = settings["stagnation_limit"].get<std::size_t>();
        if (settings.contains("per_gene_crossover"))
            config.per_gene_crossover = settings["per_gene_crossover"].get<bool>();
        if (settings.contains("elite_inherit_prob"))
            config.elite_inherit_prob = settings["elite_inherit_prob"].get<double>();
        config.rng_seed = args.seed;
        config.k = args.k;
        const EvolveResult evolved = evolve(graph, mem, config, cost_opts);
        partition = evolved.best.partition;
        history = evolved.history;
    } else {
        throw CLI::ValidationError("--method", "must be 'dp' or 'brkga'");
    }

    const std::filesystem::path out(args.out_dir);
    save_plan(partition, mem, out / "plan.json");

    ordered_json report;
    report["method"] = args.method;
    report["k"] = args.k;
    report["bottleneck"] = partition.bottleneck;
    report["blocks"] = ordered_json::array();
    for (std::size_t i = 0; i < partition.block_count(); ++i) {
        const BlockCostBreakdown b =
            block_cost_breakdown(graph, partition.block(i), mem, cost_opts);
        ordered_json jb;
        jb["nodes"] = std::vector<NodeId>(partition.block(i).begin(), partition.block(i).end());
        jb["io_in"] = b.io_in;
        jb["work"] = b.work;
        jb["overflow"] = b.overflow;
        jb["io_out"] = b.io_out;
        jb["total"] = b.total;
        report["blocks"].push_back(std::move(jb));
    }
    write_text_file(out / "report.json", report.dump(2) + "\n");

    if (!history.empty()) {
        std::string csv = "generation,best_fitness\n";
        for (std::size_t g = 0; g < history.size(); ++g)
            csv += csv_row({std::to_string(g), format_double(history[g])});
        write_text_file(out / "history.csv", csv);
    }
    std::cout << "bottleneck " << format_double(partition.bottleneck) << " with "
              << partition.block_count() << " blocks\n";
    return kExitOk;
}

struct SwarmArgs {
    std::string network_file, mode = "default", out_dir = "out";
    std::size_t p = 1;
    double gamma = 1.0, beta = 1.0, alpha = 1.0, payload = 1.0;
    std::size_t context_alpha = 0;
    double min_uptime = 0.0, min_gpu = 0.0;
    bool ph_adjust = false;
    double kappa = 0.25, lambda = 1.0;
};

int cmd_swarm(const SwarmArgs& args) {
    const NetworkState network = load_network(args.network_file);
    MetricsOptions mopts;
    mopts.mode = parse_mode(args.mode);
    mopts.default_payload = args.payload;
    NodeMetrics metrics = NodeMetrics::from_network(network, mopts);
    if (args.ph_adjust) {
        const MetricGraph metric = build_metric(network, args.lambda);
        const Ph0Result ph0 = compute_ph0(metric);
        metrics = ph_adjust_reliability(metrics, ph0.diagram, ph0.lifetimes, args.kappa);
    }
    const RoutingParams params{args.gamma, args.beta, args.alpha, args.context_alpha};
    const EligibilityPolicy eligibility{args.min_uptime, args.min_gpu};
    const Swarm swarm = form_swarm(metrics, args.p, params, eligibility);

    ordered_json doc;
    doc["sequence"] = swarm.sequence;
    doc["steps"] = ordered_json::array();
    for (std::size_t i = 0; i < swarm.sequence.size(); ++i) {
        const std::span<const NodeId> prefix(swarm.sequence.data(), i);
        const CostBreakdown c = node_cost_breakdown(metrics, swarm.sequence[i], prefix, params);
        ordered_json js;
        js["node"] = swarm.sequence[i];
        js["transfer"] = c.transfer;
        js["load"] = c.load;
        js["reliability"] = c.reliability;
        js["total"] = c.total;
        doc["steps"].push_back(std::move(js));
    }
    write_text_file(std::filesystem::path(args.out_dir) / "swarm.json", doc.dump(2) + "\n");
    std::cout << "swarm";
    for (NodeId id : swarm.sequence) std::cout << " " << id;
    std::cout << "\n";
    return kExitOk;
}

struct TuneArgs {
    std::string network_file, mode = "default", out_dir = "out";
    std::string config_file;
    std::size_t p = 1;
    std::size_t pop = 30, generations = 40;
    double mutation_rate = 0.3, mutation_sigma = 0.2;
    double lo = 0.1, hi = 4.0, payload = 1.0;
    std::uint64_t seed = 1;
    bool pop_set = false, generations_set = false;
};

int cmd_tune(const TuneArgs& args) {
    const NetworkState network = load_network(args.network_file);
    MetricsOptions mopts;
    mopts.mode = parse_mode(args.mode);
    mopts.default_payload = args.payload;
    const NodeMetrics metrics = NodeMetrics::from_network(network, mopts);

    TunerConfig config;
    config.population_size = args.pop;
    config.generations = args.generations;
    config.mutation_rate = args.mutation_rate;
    config.mutation_sigma = args.mutation_sigma;
    const json settings = load_settings(args.config_file, "tuner");
    require_object(settings, args.config_file + ": tuner",
                   {"population_size", "generations", "mutation_rate", "mutation_sigma",
                    "bounds"});
    if (settings.contains("population_size") && !args.pop_set)
        config.population_size = settings["population_size"].get<std::size_t>();
    if (settings.contains("generations") && !args.generations_set)
        config.generations = settings["generations"].get<std::size_t>();
    if (settings.contains("mutation_rate"))
        config.mutation_rate = settings["mutation_rate"].get<double>();
    if (settings.contains("mutation_sigma"))
        config.mutation_sigma = settings["mutation_sigma"].get<double>();
    config.rng_seed = args.seed;
    config.bounds = {args.lo, args.hi};
    if (settings.contains("bounds")) {
        const json& jb = settings["bounds"];
        if (!jb.is_array() || jb.size() != 2)
            throw ParseError(args.config_file + ": tuner bounds must be [lo, hi]");
        config.bounds = {jb[0].get<double>(), jb[1].get<double>()};
    }
    const TuneResult result = tune(metrics, args.p, config);

    const std::filesystem::path out(args.out_dir);
    ordered_json doc;
    doc["gamma"] = result.best.gamma;
    doc["beta"] = result.best.beta;
    doc["alpha"] = result.best.alpha_rel;
    doc["F"] = result.best_cost;
    write_text_file(out / "best_params.json", doc.dump(2) + "\n");

    std::string csv = "generation,best_F,best_gamma,best_beta,best_alpha\n";
    for (std::size_t g = 0; g < result.history.size(); ++g) {
        const TuneGeneration& h = result.history[g];
        csv += csv_row({std::to_string(g), format_double(h.best_cost),
                        format_double(h.best.gamma), format_double(h.best.beta),
                        format_double(h.best.alpha_rel)});
    }
    write_text_file(out / "history.csv", csv);
    std::cout << "best F " << format_double(result.best_cost) << " at gamma "
              << format_double(result.best.gamma) << " beta " << format_double(result.best.beta)
              << " alpha " << format_double(result.best.alpha_rel) << "\n";
    return kExitOk;
}

struct PhArgs {
    std::string network_file, library_dir, out_dir = "out";
    double lambda = 1.0;
    double max_scale = kInfDeath;
};

int cmd_ph(const PhArgs& args) {
    const NetworkState network = load_network(args.network_file);
    const MetricGraph metric = build_metric(network, args.lambda);
    const Ph0Result ph0 = compute_ph0(metric, args.max_scale);
    const std::vector<Simplex> filtration = rips_filtration(metric, 2, args.max_scale);
    const PersistenceDiagram ph1 = compute_ph1(filtration);

    PersistenceDiagram diagram;
    diagram.h0 = ph0.diagram.h0;
    diagram.h1 = ph1.h1;
    diagram.sort();

    const std::filesystem::path out(args.out_dir);
    write_text_file(out / "diagram.csv", diagram_to_csv(diagram));

    if (!args.library_dir.empty()) {
        const SchemaLibrary library = load_schema_library(args.library_dir);
        const SchemaEntry& chosen = select_schema(library, diagram);
        ordered_json doc;
        doc["schema"] = chosen.id;
        doc["plan"] = chosen.plan_file.filename().string();
        write_text_file(out / "selection.json", doc.dump(2) + "\n");
        std::cout << "schema " << chosen.id << "\n";
    } else {
        std::cout << diagram.h0.size() << " h0 bars, " << diagram.h1.size() << " h1 bars\n";
    }
    return kExitOk;
}

struct SimulateArgs {
    std::string scenario_file, out_dir = "out";
    std::vector<std::string> failures;
    std::uint64_t seed = 1;
};

SessionSpec parse_session(const json& js, const std::string& ctx) {
    require_object(js, ctx, {"tokens", "batch", "context", "precision_bytes", "model"});
    SessionSpec spec;
    spec.tokens_to_generate = static_cast<std::uint64_t>(require_int(js, "tokens", ctx));
    spec.batch_size = static_cast<std::uint64_t>(require_int(js, "batch", ctx));
    spec.sequence_context = static_cast<std::uint64_t>(require_int(js, "context", ctx));
    spec.precision_bytes = static_cast<std::uint64_t>(require_int(js, "precision_bytes", ctx));
    const json& jm = require_field(js, "model", ctx);
    require_object(jm, ctx + ": model", {"head_dim", "n_heads", "n_layers"});
    spec.model_dims.head_dim = static_cast<std::uint64_t>(require_int(jm, "head_dim", ctx));
    spec.model_dims.n_heads = static_cast<std::uint64_t>(require_int(jm, "n_heads", ctx));
    spec.model_dims.n_layers = static_cast<std::uint64_t>(require_int(jm, "n_layers", ctx));
    validate_spec(spec);
    return spec;
}

std::vector<FailureEvent> parse_failures(const std::vector<std::string>& flags) {
    std::vector<FailureEvent> failures;
    for (const std::string& f : flags) {
        const auto at = f.find('@');
        if (at == std::string::npos)
            throw CLI::ValidationError("--fail", "expected node@time, got '" + f + "'");
        try {
            failures.push_back({std::stoll(f.substr(0, at)), std::stod(f.substr(at + 1))});
        } catch (const std::exception&) {
            throw CLI::ValidationError("--fail", "expected node@time, got '" + f + "'");
        }
    }
    return failures;
}

void write_simulation_outputs(const SessionTrace& trace, const std::filesystem::path& out) {
    write_text_file(out / "trace.csv", trace_to_csv(trace));
    ordered_json summary;
    summary["tokens_per_second"] = trace.tokens_per_second;
    summary["total_time"] = trace.total_time;
    summary["downtime"] = trace.downtime;
    summary["period"] = trace.period;
    summary["fill_latency"] = trace.fill_latency;
    summary["tokens_completed"] = trace.tokens_completed;
    summary["aborted"] = trace.aborted;
    summary["abort_reason"] = trace.abort_reason;
    write_text_file(out / "summary.json", summary.dump(2) + "\n");
}

int cmd_simulate(const SimulateArgs& args) {
    const std::filesystem::path scenario_path(args.scenario_file);
    const std::filesystem::path base = scenario_path.parent_path();
    const json doc = parse_json_document(read_text_file(scenario_path), scenario_path.string());
    const std::string ctx = scenario_path.string();
    require_object(doc, ctx,
                   {"session", "stages", "graph", "network", "plan", "swarm", "routing",
                    "batch_slope", "rebalance_downtime", "mode"});
    const SessionSpec spec = parse_session(require_field(doc, "session", ctx), ctx + ": session");
    const std::vector<FailureEvent> failures = parse_failures(args.failures);
    const std::filesystem::path out(args.out_dir);

    if (doc.contains("stages")) {
        if (!failures.empty())
            throw CLI::ValidationError("--fail", "failure injection needs a graph-based scenario");
        StagePlan plan;
        for (const json& js : doc["stages"]) {
            require_object(js, ctx + ": stages[]", {"compute", "hop", "slope"});
            Stage s;
            s.compute_base = require_number(js, "compute", ctx + ": stages[]");
            if (js.contains("hop")) s.hop_time = js["hop"].get<double>();
            if (js.contains("slope")) s.compute_batch_slope = js["slope"].get<double>();
            plan.stages.push_back(std::move(s));
        }
        const SessionTrace trace = simulate(plan, spec);
        write_simulation_outputs(trace, out);
        std::cout << "tokens/sec " << format_double(trace.tokens_per_second) << "\n";
        return kExitOk;
    }

    const json& jgraph = require_field(doc, "graph", ctx);
    const json& jnetwork = require_field(doc, "network", ctx);
    const json& jplan = require_field(doc, "plan", ctx);
    const CompGraph graph = load_graph(base / jgraph.get<std::string>());
    const NetworkState network = load_network(base / jnetwork.get<std::string>());
    auto [partition, mem] = load_plan(base / jplan.get<std::string>());
    validate_partition(graph, partition);

    RoutingParams params;
    MetricsOptions mopts;
    if (doc.contains("mode")) mopts.mode = parse_mode(doc["mode"].get<std::string>());
    if (doc.contains("routing")) {
        const json& jr = doc["routing"];
        require_object(jr, ctx + ": routing",
                       {"gamma", "beta", "alpha", "context_alpha", "payload"});
        if (jr.contains("gamma")) params.gamma = jr["gamma"].get<double>();
        if (jr.contains("beta")) params.beta = jr["beta"].get<double>();
        if (jr.contains("alpha")) params.alpha_rel = jr["alpha"].get<double>();
        if (jr.contains("context_alpha"))
            params.context_alpha = jr["context_alpha"].get<std::size_t>();
        if (jr.contains("payload")) mopts.default_payload = jr["payload"].get<double>();
    }

    Swarm swarm;
    if (doc.contains("swarm")) {
        for (const json& v : doc["swarm"]) swarm.sequence.push_back(v.get<NodeId>());
    } else {
        // payload per step defaults to the activation bytes crossing that
        // shard boundary, tying selection to the plan
        const std::vector<double> hop_bytes = boundary_bytes(graph, partition);
        std::vector<NodeId> pool;
        for (const NetworkNode& n : network.nodes()) pool.push_back(n.id);
        for (std::size_t i = 0; i < partition.block_count(); ++i) {
            MetricsOptions step_opts = mopts;
            if (i > 0) step_opts.default_payload = hop_bytes[i - 1];
            const NodeMetrics step_metrics = NodeMetrics::from_network(network, step_opts);
            if (pool.empty())
                throw InsufficientNodes("fewer nodes than partition blocks");
            const NodeId chosen = select_next(step_metrics, swarm.sequence, pool, params);
            swarm.sequence.push_back(chosen);
            pool.erase(std::find(pool.begin(), pool.end(), chosen));
        }
    }

    FailureScenario scenario;
    scenario.graph = &graph;
    scenario.partition = partition;
    scenario.swarm = swarm;
    scenario.network = &network;
    scenario.spec = spec;
    scenario.mem = mem;
    scenario.plan_opts.overflow_mode = overflow_of(mopts.mode);
    if (doc.contains("batch_slope"))
        scenario.plan_opts.batch_slope = doc["batch_slope"].get<double>();
    scenario.params = params;
    scenario.metrics_opts = mopts;
    if (doc.contains("rebalance_downtime"))
        scenario.rebalance_downtime = doc["rebalance_downtime"].get<double>();

    const SessionTrace trace = simulate_with_failures(scenario, failures);
    write_simulation_outputs(trace, out);
    std::cout << "tokens/sec " << format_double(trace.tokens_per_second)
              << (trace.aborted ? " (aborted)" : "") << "\n";
    return trace.aborted ? kExitInfeasible : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"planner and simulator for sharding computation graphs across a node swarm"};
    app.require_subcommand(1);

    PartitionArgs pa;
    CLI::App* partition = app.add_subcommand("partition", "slice a computation graph into blocks");
    partition->add_option("--graph", pa.graph_file, "graph document")->required();
    partition->add_option("--k", pa.k, "block budget (at most k blocks)")->required();
    partition->add_option("--capacity", pa.capacity, "fast-memory capacity M per node");
    partition->add_option("--bandwidth", pa.bandwidth, "bandwidth B between nodes");
    partition->add_option("--method", pa.method, "dp | brkga");
    partition->add_option("--mode", pa.mode, "default | strict-paper");
    partition->add_option("--seed", pa.seed, "rng seed (brkga)");
    auto* pa_pop = partition->add_option("--pop", pa.pop, "brkga population size");
    auto* pa_gen = partition->add_option("--generations", pa.generations, "brkga generations");
    partition->add_option("--config", pa.config_file, "settings document (brkga section)");
    partition->add_option("--elite", pa.elite, "brkga elite fraction");
    partition->add_option("--mutants", pa.mutants, "brkga mutant fraction");
    partition->add_option("--alpha", pa.alpha, "brkga blend-crossover alpha");
    partition->add_option("--out", pa.out_dir, "output directory");

    SwarmArgs sa;
    CLI::App* swarm = app.add_subcommand("swarm", "select a node sequence for p shards");
    swarm->add_option("--network", sa.network_file, "network snapshot")->required();
    swarm->add_option("--p", sa.p, "shard count")->required();
    swarm->add_option("--gamma", sa.gamma, "transfer exponent");
    swarm->add_option("--beta", sa.beta, "load exponent");
    swarm->add_option("--alpha", sa.alpha, "reliability exponent");
    swarm->add_option("--context-alpha", sa.context_alpha, "prefix window size");
    swarm->add_option("--payload", sa.payload, "uniform payload size D");
    swarm->add_option("--min-uptime", sa.min_uptime, "eligibility: minimum uptime");
    swarm->add_option("--min-gpu", sa.min_gpu, "eligibility: minimum free GPU");
    swarm->add_option("--mode", sa.mode, "default | strict-paper");
    swarm->add_flag("--ph-adjust", sa.ph_adjust, "boost reliability by topological stability");
    swarm->add_option("--kappa", sa.kappa, "ph-adjust boost factor");
    swarm->add_option("--lambda", sa.lambda, "metric weight on inverse bandwidth");
    swarm->add_option("--out", sa.out_dir, "output directory");

    TuneArgs ta;
    CLI::App* tune_cmd = app.add_subcommand("tune", "optimize routing exponents on a snapshot");
    tune_cmd->add_option("--network", ta.network_file, "network snapshot")->required();
    tune_cmd->add_option("--p", ta.p, "shard count")->required();
    auto* ta_pop = tune_cmd->add_option("--pop", ta.pop, "population size");
    auto* ta_gen = tune_cmd->add_option("--generations", ta.generations, "generations");
    tune_cmd->add_option("--config", ta.config_file, "settings document (tuner section)");
    tune_cmd->add_option("--mutation-rate", ta.mutation_rate, "per-component mutation rate");
    tune_cmd->add_option("--mutation-sigma", ta.mutation_sigma, "mutation stddev");
    tune_cmd->add_option("--lo", ta.lo, "exponent lower bound");
    tune_cmd->add_option("--hi", ta.hi, "exponent upper bound");
    tune_cmd->add_option("--payload", ta.payload, "uniform payload size D");
    tune_cmd->add_option("--mode", ta.mode, "default | strict-paper");
    tune_cmd->add_option("--seed", ta.seed, "rng seed");
    tune_cmd->add_option("--out", ta.out_dir, "output directory");

    PhArgs ha;
    CLI::App* ph = app.add_subcommand("ph", "persistence diagram of the swarm topology");
    ph->add_option("--network", ha.network_file, "network snapshot")->required();
    ph->add_option("--lambda", ha.lambda, "metric weight on inverse bandwidth");
    ph->add_option("--max-scale", ha.max_scale, "filtration cutoff scale");
    ph->add_option("--library", ha.library_dir, "schema library directory");
    ph->add_option("--out", ha.out_dir, "output directory");

    SimulateArgs ma;
    CLI::App* sim = app.add_subcommand("simulate", "run a pipeline session");
    sim->add_option("--scenario", ma.scenario_file, "scenario document")->required();
    sim->add_option("--fail", ma.failures, "inject failure as node@time");
    sim->add_option("--seed", ma.seed, "rng seed");
    sim->add_option("--out", ma.out_dir, "output directory");

    try {
        app.parse(argc, argv);
        pa.pop_set = pa_pop->count() > 0;
        pa.generations_set = pa_gen->count() > 0;
        ta.pop_set = ta_pop->count() > 0;
        ta.generations_set = ta_gen->count() > 0;
        if (*partition) return cmd_partition(pa);
        if (*swarm) return cmd_swarm(sa);
        if (*tune_cmd) return cmd_tune(ta);
        if (*ph) return cmd_ph(ha);
        if (*sim) return cmd_simulate(ma);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const InvalidBudget& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InsufficientNodes& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const NoCandidates& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const AllZeroFitness& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
