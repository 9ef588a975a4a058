// Command-line front end: generate / discover / prune / evaluate / bench.
// Progress and timing go to stderr; data goes to files.  Exit codes:
// 0 success, 1 runtime failure, 2 configuration or usage error.

#include <exception>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "camboost/dagboost.hpp"
#include "camboost/experiment.hpp"
#include "camboost/io.hpp"
#include "camboost/metrics.hpp"
#include "camboost/ordering.hpp"
#include "camboost/pruning.hpp"
#include "camboost/semgen.hpp"

namespace {

using namespace camboost;

struct GenerateOptions {
    GenConfig gen;
    std::string model = "random";  // random | cosine-pair
    std::string graph = "er";
    std::string equations = "additive";
    std::string out;
    std::string graph_out;
    std::string adjacency_out;
};

struct DiscoverOptions {
    std::string data_path;
    std::string mode = "dagboost";
    std::string stopping = "aic";
    BoostConfig boost;
    bool scale = false;
    bool verbose = false;
    int exhaustive_limit = 8;
    std::string out;
    std::string ordering_out;
    std::string adjacency_out;
};

struct PruneOptions {
    std::string data_path;
    std::string graph_path;
    PruneConfig prune;
    std::string out;
    std::string adjacency_out;
};

struct EvaluateOptions {
    std::string truth_path;
    std::string estimate_path;
    std::string ordering_path;
    std::string policy = "one";
    std::string distance = "transposition";
    std::string out;
};

struct BenchOptions {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out;
    std::string timing_out;
    // Flag overrides; negative / empty sentinel means "not set".
    int replications = -1;
    int parallelism = -1;
    std::string mode;
    std::string scenario;
    int p = -1;
    int n = -1;
    double expected_edges = -1.0;
    std::string equations;
    std::optional<bool> prune_enabled;
};

Dag load_graph(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        return read_adjacency_json(path);
    }
    return read_edge_list(path);
}

void save_graph_outputs(const Dag& g, const std::string& edge_path,
                        const std::string& adjacency_path) {
    if (!edge_path.empty()) write_edge_list(g, edge_path);
    if (!adjacency_path.empty()) write_adjacency_json(g, adjacency_path);
}

int run_generate(const GenerateOptions& opt) {
    GroundTruth truth;
    if (opt.model == "cosine-pair") {
        truth = generate_cosine_pair(opt.gen.n, opt.gen.seed);
    } else {
        GenConfig gen = opt.gen;
        gen.graph = (opt.graph == "sf") ? GraphKind::ScaleFree : GraphKind::ErdosRenyi;
        gen.equations =
            (opt.equations == "nonadditive") ? EquationKind::NonAdditive : EquationKind::Additive;
        truth = generate_dataset(gen);
    }
    write_csv(truth.data, opt.out);
    save_graph_outputs(truth.graph, opt.graph_out, opt.adjacency_out);
    std::cerr << "generated " << truth.data.rows() << "x" << truth.data.cols() << " samples, "
              << truth.graph.edge_count() << " edges\n";
    return 0;
}

BoostConfig apply_stopping(BoostConfig cfg, const std::string& stopping) {
    if (stopping == "fixed-rate") cfg.stopping = StoppingRule::FixedRate;
    else if (stopping == "fixed-count") cfg.stopping = StoppingRule::FixedCount;
    else cfg.stopping = StoppingRule::Aic;
    return cfg;
}

int run_discover(const DiscoverOptions& opt) {
    Dataset data = read_csv(opt.data_path);
    if (opt.scale) data = data.centered(true);
    const BoostConfig cfg = apply_stopping(opt.boost, opt.stopping);
    if (opt.mode == "exhaustive") {
        const auto [pi, score] = best_ordering(data, cfg, opt.exhaustive_limit);
        if (opt.ordering_out.empty()) {
            throw std::invalid_argument("discover: exhaustive mode needs --ordering-out");
        }
        write_ordering(pi, opt.ordering_out);
        std::cerr << "best ordering score " << score << "\n";
        return 0;
    }
    StepObserver observer;
    if (opt.verbose) {
        observer = [](const StepInfo& info) {
            std::cerr << "step " << info.step << ": " << info.source + 1 << "->" << info.target + 1
                      << " aic " << info.aic_before << " -> " << info.aic_after << "\n";
        };
    }
    const FittedSem sem = dagboost_run(data, cfg, {}, observer);
    if (opt.out.empty() && opt.adjacency_out.empty()) {
        throw std::invalid_argument("discover: dagboost mode needs --out or --adjacency-out");
    }
    save_graph_outputs(sem.graph, opt.out, opt.adjacency_out);
    std::cerr << "dagboost kept " << sem.iterations << " steps, " << sem.graph.edge_count()
              << " edges, final aic " << sem.aic << (sem.converged ? "" : " (iteration cap hit)")
              << "\n";
    return 0;
}

int run_prune(const PruneOptions& opt) {
    const Dataset data = read_csv(opt.data_path);
    const Dag graph = load_graph(opt.graph_path);
    const Dag pruned = prune_graph(graph, data, opt.prune);
    if (opt.out.empty() && opt.adjacency_out.empty()) {
        throw std::invalid_argument("prune: needs --out or --adjacency-out");
    }
    save_graph_outputs(pruned, opt.out, opt.adjacency_out);
    std::cerr << "kept " << pruned.edge_count() << " of " << graph.edge_count() << " edges\n";
    return 0;
}

int run_evaluate(const EvaluateOptions& opt) {
    std::ostringstream os;
    const Dag truth = load_graph(opt.truth_path);
    if (!opt.ordering_path.empty()) {
        const Permutation pi = read_ordering(opt.ordering_path);
        const OrderingDistance kind = (opt.distance == "cayley") ? OrderingDistance::Cayley
                                                                 : OrderingDistance::Transposition;
        const int d = distance_to_ordering_set(pi, truth, kind);
        os << "metric,value\n";
        os << (opt.distance == "cayley" ? "d_cayley" : "d_trans") << ',' << d << '\n';
    } else {
        if (opt.estimate_path.empty()) {
            throw std::invalid_argument("evaluate: need --estimate or --ordering");
        }
        const Dag estimate = load_graph(opt.estimate_path);
        const ReversalPolicy policy =
            (opt.policy == "two") ? ReversalPolicy::Two : ReversalPolicy::One;
        const GraphDiff diff = graph_diff(truth, estimate, policy);
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        os << "metric,value\n";
        os << "shd," << diff.shd << '\n';
        os << "precision," << format_double(diff.precision ? *diff.precision : nan) << '\n';
        os << "recall," << format_double(diff.recall ? *diff.recall : nan) << '\n';
        os << "edges_true," << truth.edge_count() << '\n';
        os << "edges_estimated," << estimate.edge_count() << '\n';
    }
    write_text_file(opt.out, os.str());
    return 0;
}

ExperimentConfig parse_bench_config(const BenchOptions& opt) {
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        const auto j = nlohmann::json::parse(read_text_file(opt.config_path));
        if (j.contains("scenario")) {
            cfg.scenario = (j["scenario"] == "cosine_pair") ? Scenario::CosinePair : Scenario::Random;
        }
        if (j.contains("mode")) {
            cfg.mode = (j["mode"] == "exhaustive") ? ExperimentMode::Exhaustive
                                                   : ExperimentMode::Dagboost;
        }
        if (j.contains("replications")) cfg.replications = j["replications"].get<int>();
        if (j.contains("parallelism")) cfg.parallelism = j["parallelism"].get<int>();
        if (j.contains("prune_enabled")) cfg.prune_enabled = j["prune_enabled"].get<bool>();
        if (j.contains("exhaustive_limit")) cfg.exhaustive_limit = j["exhaustive_limit"].get<int>();
        if (j.contains("gen")) {
            const auto& g = j["gen"];
            if (g.contains("p")) cfg.gen.p = g["p"].get<int>();
            if (g.contains("n")) cfg.gen.n = g["n"].get<int>();
            if (g.contains("graph")) {
                cfg.gen.graph = (g["graph"] == "sf") ? GraphKind::ScaleFree : GraphKind::ErdosRenyi;
            }
            if (g.contains("expected_edges")) cfg.gen.expected_edges = g["expected_edges"].get<double>();
            if (g.contains("attachment")) cfg.gen.attachment = g["attachment"].get<int>();
            if (g.contains("equations")) {
                cfg.gen.equations = (g["equations"] == "nonadditive") ? EquationKind::NonAdditive
                                                                      : EquationKind::Additive;
            }
            if (g.contains("noise_low")) cfg.gen.noise_low = g["noise_low"].get<double>();
            if (g.contains("noise_high")) cfg.gen.noise_high = g["noise_high"].get<double>();
        }
        if (j.contains("boost")) {
            const auto& b = j["boost"];
            if (b.contains("step_size")) cfg.boost.step_size = b["step_size"].get<double>();
            if (b.contains("penalty")) cfg.boost.penalty = b["penalty"].get<double>();
            if (b.contains("max_iterations")) cfg.boost.max_iterations = b["max_iterations"].get<int>();
            if (b.contains("patience")) cfg.boost.patience = b["patience"].get<int>();
            if (b.contains("fixed_count")) cfg.boost.fixed_count = b["fixed_count"].get<int>();
            if (b.contains("stopping")) {
                cfg.boost = apply_stopping(cfg.boost, b["stopping"].get<std::string>());
            }
        }
        if (j.contains("prune")) {
            const auto& pr = j["prune"];
            if (pr.contains("alpha")) cfg.prune.alpha = pr["alpha"].get<double>();
            if (pr.contains("penalty")) cfg.prune.penalty = pr["penalty"].get<double>();
        }
    }
    if (opt.replications >= 0) cfg.replications = opt.replications;
    if (opt.parallelism >= 0) cfg.parallelism = opt.parallelism;
    if (!opt.mode.empty()) {
        cfg.mode = (opt.mode == "exhaustive") ? ExperimentMode::Exhaustive : ExperimentMode::Dagboost;
    }
    if (!opt.scenario.empty()) {
        cfg.scenario = (opt.scenario == "cosine-pair") ? Scenario::CosinePair : Scenario::Random;
    }
    if (opt.p >= 0) cfg.gen.p = opt.p;
    if (opt.n >= 0) cfg.gen.n = opt.n;
    if (opt.expected_edges >= 0.0) cfg.gen.expected_edges = opt.expected_edges;
    if (!opt.equations.empty()) {
        cfg.gen.equations =
            (opt.equations == "nonadditive") ? EquationKind::NonAdditive : EquationKind::Additive;
    }
    if (opt.prune_enabled) cfg.prune_enabled = *opt.prune_enabled;
    cfg.seed = opt.seed;
    return cfg;
}

int run_bench(const BenchOptions& opt) {
    const ExperimentConfig cfg = parse_bench_config(opt);
    const ExperimentSummary summary = run_experiment(cfg, &std::cerr);
    write_text_file(opt.out, results_csv(summary));
    if (!opt.timing_out.empty()) write_text_file(opt.timing_out, timing_csv(summary));
    for (const auto& [rep, wall] : summary.wall_seconds) {
        std::cerr << "timing replication " << rep << ": " << wall << "s\n";
    }
    std::cerr << "wrote " << summary.rows.size() << " rows to " << opt.out;
    if (summary.failures > 0) std::cerr << " (" << summary.failures << " replications failed)";
    std::cerr << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal additive model discovery via kernel boosting"};
    app.require_subcommand(1);

    GenerateOptions gen_opt;
    auto* gen = app.add_subcommand("generate", "Sample a synthetic SEM dataset");
    gen->add_option("--out", gen_opt.out, "Data CSV path")->required();
    gen->add_option("--seed", gen_opt.gen.seed, "Master seed")->required();
    gen->add_option("--p", gen_opt.gen.p, "Number of variables");
    gen->add_option("--n", gen_opt.gen.n, "Sample size");
    gen->add_option("--model", gen_opt.model, "random | cosine-pair")
        ->check(CLI::IsMember({"random", "cosine-pair"}));
    gen->add_option("--graph", gen_opt.graph, "er | sf")->check(CLI::IsMember({"er", "sf"}));
    gen->add_option("--expected-edges", gen_opt.gen.expected_edges, "Expected edge count (er)");
    gen->add_option("--attachment", gen_opt.gen.attachment, "Attachment count (sf)");
    gen->add_option("--equations", gen_opt.equations, "additive | nonadditive")
        ->check(CLI::IsMember({"additive", "nonadditive"}));
    gen->add_option("--noise-low", gen_opt.gen.noise_low, "Noise SD lower bound");
    gen->add_option("--noise-high", gen_opt.gen.noise_high, "Noise SD upper bound");
    gen->add_option("--graph-out", gen_opt.graph_out, "Ground-truth edge list path");
    gen->add_option("--adjacency-out", gen_opt.adjacency_out, "Ground-truth adjacency JSON path");

    DiscoverOptions dis_opt;
    auto* dis = app.add_subcommand("discover", "Learn an ordering or graph from data");
    dis->add_option("--data", dis_opt.data_path, "Input CSV")->required();
    dis->add_option("--mode", dis_opt.mode, "exhaustive | dagboost")
        ->check(CLI::IsMember({"exhaustive", "dagboost"}));
    dis->add_option("--step-size", dis_opt.boost.step_size, "Boosting step size");
    dis->add_option("--penalty", dis_opt.boost.penalty, "Ridge penalty");
    dis->add_option("--max-iterations", dis_opt.boost.max_iterations, "Iteration cap");
    dis->add_option("--patience", dis_opt.boost.patience, "AIC patience (dagboost)");
    dis->add_option("--stopping", dis_opt.stopping, "aic | fixed-rate | fixed-count")
        ->check(CLI::IsMember({"aic", "fixed-rate", "fixed-count"}));
    dis->add_option("--fixed-count", dis_opt.boost.fixed_count, "Iterations for fixed-count");
    dis->add_option("--exhaustive-limit", dis_opt.exhaustive_limit, "Max p for exhaustive search");
    dis->add_flag("--scale", dis_opt.scale, "Scale columns to unit variance first");
    dis->add_flag("--verbose", dis_opt.verbose, "Per-step progress on stderr");
    dis->add_option("--out", dis_opt.out, "Graph edge-list path (dagboost)");
    dis->add_option("--ordering-out", dis_opt.ordering_out, "Ordering path (exhaustive)");
    dis->add_option("--adjacency-out", dis_opt.adjacency_out, "Adjacency JSON path (dagboost)");

    PruneOptions pr_opt;
    auto* pr = app.add_subcommand("prune", "Significance-prune a graph against data");
    pr->add_option("--data", pr_opt.data_path, "Input CSV")->required();
    pr->add_option("--graph", pr_opt.graph_path, "Graph path (.json or edge list)")->required();
    pr->add_option("--alpha", pr_opt.prune.alpha, "Keep threshold for p-values");
    pr->add_option("--penalty", pr_opt.prune.penalty, "Ridge penalty of the refits");
    pr->add_option("--out", pr_opt.out, "Pruned edge-list path");
    pr->add_option("--adjacency-out", pr_opt.adjacency_out, "Pruned adjacency JSON path");

    EvaluateOptions ev_opt;
    auto* ev = app.add_subcommand("evaluate", "Score an estimate against ground truth");
    ev->add_option("--truth", ev_opt.truth_path, "Ground-truth graph path")->required();
    ev->add_option("--estimate", ev_opt.estimate_path, "Estimated graph path");
    ev->add_option("--ordering", ev_opt.ordering_path, "Estimated ordering path");
    ev->add_option("--policy", ev_opt.policy, "Reversal cost: one | two")
        ->check(CLI::IsMember({"one", "two"}));
    ev->add_option("--distance", ev_opt.distance, "transposition | cayley")
        ->check(CLI::IsMember({"transposition", "cayley"}));
    ev->add_option("--out", ev_opt.out, "Metrics CSV path")->required();

    BenchOptions be_opt;
    bool be_no_prune = false;
    auto* be = app.add_subcommand("bench", "Replicated generate/discover/evaluate runs");
    be->add_option("--config", be_opt.config_path, "Experiment config JSON");
    be->add_option("--seed", be_opt.seed, "Master seed (replications derive from it)")->required();
    be->add_option("--out", be_opt.out, "Results CSV path")->required();
    be->add_option("--timing-out", be_opt.timing_out, "Per-replication wall-time CSV path");
    be->add_option("--replications", be_opt.replications, "Override replication count");
    be->add_option("--parallelism", be_opt.parallelism, "Worker threads (0: CAMBOOST_THREADS)");
    be->add_option("--mode", be_opt.mode, "exhaustive | dagboost")
        ->check(CLI::IsMember({"exhaustive", "dagboost"}));
    be->add_option("--scenario", be_opt.scenario, "random | cosine-pair")
        ->check(CLI::IsMember({"random", "cosine-pair"}));
    be->add_option("--p", be_opt.p, "Override variable count");
    be->add_option("--n", be_opt.n, "Override sample size");
    be->add_option("--expected-edges", be_opt.expected_edges, "Override expected edge count");
    be->add_option("--equations", be_opt.equations, "additive | nonadditive")
        ->check(CLI::IsMember({"additive", "nonadditive"}));
    be->add_flag("--no-prune", be_no_prune, "Skip the pruning stage");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) return run_generate(gen_opt);
        if (*dis) return run_discover(dis_opt);
        if (*pr) return run_prune(pr_opt);
        if (*ev) return run_evaluate(ev_opt);
        if (*be) {
            if (be_no_prune) be_opt.prune_enabled = false;
            return run_bench(be_opt);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
