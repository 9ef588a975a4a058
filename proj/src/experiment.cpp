#include "camboost/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "camboost/dagboost.hpp"
#include "camboost/io.hpp"
#include "camboost/metrics.hpp"
#include "camboost/ordering.hpp"

namespace camboost {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<ResultRow> run_replication(const ExperimentConfig& cfg, int rep,
                                       std::uint64_t rep_seed) {
    GroundTruth truth;
    if (cfg.scenario == Scenario::CosinePair) {
        truth = generate_cosine_pair(cfg.gen.n, rep_seed);
    } else {
        GenConfig gen = cfg.gen;
        gen.seed = rep_seed;
        truth = generate_dataset(gen);
    }

    std::vector<ResultRow> rows;
    auto push = [&](const std::string& metric, double value) {
        rows.push_back({rep + 1, rep_seed, metric, value, 0.0});
    };

    if (cfg.mode == ExperimentMode::Exhaustive) {
        const auto [pi, score] = best_ordering(truth.data, cfg.boost, cfg.exhaustive_limit);
        const int d = distance_to_ordering_set(pi, truth.graph);
        push("d_trans", static_cast<double>(d));
        push("score", score);
    } else {
        const FittedSem sem = dagboost_run(truth.data, cfg.boost);
        const Dag estimate =
            cfg.prune_enabled ? prune_graph(sem, truth.data, cfg.prune) : sem.graph;
        const GraphDiff diff = graph_diff(truth.graph, estimate);
        push("shd", static_cast<double>(diff.shd));
        push("precision", diff.precision ? *diff.precision : kNan);
        push("recall", diff.recall ? *diff.recall : kNan);
        push("edges_true", static_cast<double>(truth.graph.edge_count()));
        push("edges_estimated", static_cast<double>(estimate.edge_count()));
    }
    return rows;
}

}  // namespace

int resolve_parallelism(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("CAMBOOST_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, std::ostream* progress) {
    if (cfg.replications < 1) {
        throw std::invalid_argument("run_experiment: replications must be >= 1");
    }
    const int reps = cfg.replications;
    const int threads = resolve_parallelism(cfg.parallelism);
    const RngStream master(cfg.seed);

    ExperimentSummary summary;
    summary.config = cfg;
    std::vector<std::vector<ResultRow>> slots(static_cast<std::size_t>(reps));
    std::vector<double> walls(static_cast<std::size_t>(reps), 0.0);
    std::vector<std::string> errors(static_cast<std::size_t>(reps));

#ifdef _OPENMP
    const int prev_threads = omp_get_max_threads();
    omp_set_num_threads(threads);
#endif
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
        const std::uint64_t rep_seed = master.derive(static_cast<std::uint64_t>(r)).seed();
        const auto start = std::chrono::steady_clock::now();
        try {
            slots[static_cast<std::size_t>(r)] = run_replication(cfg, r, rep_seed);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(r)] = e.what();
            slots[static_cast<std::size_t>(r)] = {{r + 1, rep_seed, "error", 1.0, 0.0}};
        }
        const auto end = std::chrono::steady_clock::now();
        walls[static_cast<std::size_t>(r)] = std::chrono::duration<double>(end - start).count();
        if (progress) {
#pragma omp critical
            {
                *progress << "replication " << r + 1 << "/" << reps << " done in "
                          << walls[static_cast<std::size_t>(r)] << "s";
                if (!errors[static_cast<std::size_t>(r)].empty()) {
                    *progress << " (FAILED: " << errors[static_cast<std::size_t>(r)] << ")";
                }
                *progress << "\n";
            }
        }
    }
#ifdef _OPENMP
    omp_set_num_threads(prev_threads);
#endif

    // Deterministic assembly: replication order, then the per-rep metric order.
    std::vector<std::string> metric_order;
    std::map<std::string, std::vector<double>> values;
    for (int r = 0; r < reps; ++r) {
        if (!errors[static_cast<std::size_t>(r)].empty()) ++summary.failures;
        for (auto& row : slots[static_cast<std::size_t>(r)]) {
            row.wall_seconds = walls[static_cast<std::size_t>(r)];
            if (!values.count(row.metric)) {
                metric_order.push_back(row.metric);
                values[row.metric];
            }
            if (!std::isnan(row.value)) values[row.metric].push_back(row.value);
            summary.rows.push_back(row);
        }
        summary.wall_seconds.push_back({r + 1, walls[static_cast<std::size_t>(r)]});
    }
    if (summary.failures == reps) {
        throw std::runtime_error("run_experiment: every replication failed; first error: " +
                                 errors[0]);
    }
    for (const auto& name : metric_order) {
        const auto& v = values[name];
        if (v.empty()) {
            summary.means.push_back({name, kNan});
            summary.sds.push_back({name, kNan});
            continue;
        }
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double sd = 0.0;
        if (v.size() > 1) {
            for (double x : v) sd += (x - mean) * (x - mean);
            sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
        }
        summary.means.push_back({name, mean});
        summary.sds.push_back({name, sd});
    }
    return summary;
}

std::string results_csv(const ExperimentSummary& summary) {
    std::ostringstream os;
    os << "replication,seed,metric,value\n";
    for (const auto& row : summary.rows) {
        os << row.replication << ',' << row.seed << ',' << row.metric << ','
           << format_double(row.value) << '\n';
    }
    for (const auto& [name, value] : summary.means) {
        os << "mean,," << name << ',' << format_double(value) << '\n';
    }
    for (const auto& [name, value] : summary.sds) {
        os << "sd,," << name << ',' << format_double(value) << '\n';
    }
    return os.str();
}

std::string timing_csv(const ExperimentSummary& summary) {
    std::ostringstream os;
    os << "replication,wall_seconds\n";
    for (const auto& [rep, wall] : summary.wall_seconds) {
        os << rep << ',' << format_double(wall) << '\n';
    }
    return os.str();
}

}  // namespace camboost
