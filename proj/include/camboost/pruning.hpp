#pragma once

#include <vector>

#include "camboost/dag.hpp"
#include "camboost/dagboost.hpp"
#include "camboost/dataset.hpp"
#include "camboost/kernel.hpp"

namespace camboost {

struct PruneConfig {
    double alpha = 0.001;   // keep a parent iff p_value < alpha
    double penalty = 0.01;  // ridge penalty of the additive refits
    KernelSpec spec = {};
};

// Significance of parent j for node k within the additive kernel ridge refit
// on the full parent set:
//   F = ((RSS_red - RSS_full) / (df_full - df_red)) / (RSS_full / (N - df_full)),
// df = trace of the ridge smoother; the reduced model drops j.  A numerator
// or df-difference <= 0 clamps F to 0 (p = 1).
struct ParentTest {
    int node = -1;
    int parent = -1;
    double f_statistic = 0.0;
    double p_value = 1.0;
    double df_effect = 0.0;    // df_full - df_red
    double df_residual = 0.0;  // N - df_full
};

ParentTest parent_pvalue(const Dataset& data, int k, const std::vector<int>& parents, int j,
                         const PruneConfig& cfg);

// Per-node backward significance filter: every parent is tested against the
// full parent set in one pass; parents with p >= alpha are dropped.  The
// result is always a subgraph of the input.
Dag prune_graph(const Dag& graph, const Dataset& data, const PruneConfig& cfg);
Dag prune_graph(const FittedSem& sem, const Dataset& data, const PruneConfig& cfg);

}  // namespace camboost
