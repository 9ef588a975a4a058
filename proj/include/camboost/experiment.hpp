#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "camboost/boosting.hpp"
#include "camboost/pruning.hpp"
#include "camboost/semgen.hpp"

namespace camboost {

enum class ExperimentMode { Exhaustive, Dagboost };
enum class Scenario { Random, CosinePair };

struct ExperimentConfig {
    Scenario scenario = Scenario::Random;
    GenConfig gen;
    BoostConfig boost;
    PruneConfig prune;
    bool prune_enabled = true;   // dagboost mode only
    ExperimentMode mode = ExperimentMode::Dagboost;
    int replications = 1;
    int parallelism = 0;         // 0: CAMBOOST_THREADS env var, else 1
    std::uint64_t seed = 0;      // master seed; replication r uses derive(r)
    int exhaustive_limit = 8;
};

struct ResultRow {
    int replication = 0;         // 1-based
    std::uint64_t seed = 0;      // per-replication derived seed
    std::string metric;
    double value = 0.0;          // NaN when the metric is undefined
    double wall_seconds = 0.0;   // reported on stderr / timing file, never in results
};

struct ExperimentSummary {
    ExperimentConfig config;
    std::vector<ResultRow> rows;                          // replication-major, fixed metric order
    std::vector<std::pair<std::string, double>> means;    // over defined (non-NaN) values
    std::vector<std::pair<std::string, double>> sds;      // sample SD, 0 for a single value
    std::vector<std::pair<int, double>> wall_seconds;     // per replication (1-based)
    int failures = 0;
};

// Number of worker threads: explicit config wins, then the CAMBOOST_THREADS
// environment variable, then 1.
int resolve_parallelism(int configured);

// Generate -> discover -> (prune ->) evaluate for each replication, in
// parallel over replications.  Rows are bit-identical for equal configs, at
// any parallelism.  A failed replication contributes an "error" row and a
// diagnostic on `progress`; the run only fails wholesale if every replication
// fails.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, std::ostream* progress = nullptr);

// Deterministic columns only: replication,seed,metric,value with aggregate
// rows (replication = "mean" / "sd") after the per-replication block.
std::string results_csv(const ExperimentSummary& summary);

// replication,wall_seconds — separate because wall time is not reproducible.
std::string timing_csv(const ExperimentSummary& summary);

}  // namespace camboost
