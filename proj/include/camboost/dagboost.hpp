#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "camboost/boosting.hpp"
#include "camboost/dag.hpp"
#include "camboost/dataset.hpp"
#include "camboost/kernel.hpp"

namespace camboost {

// Per-column single-kernel base learner, cached once per run: the Gram
// eigendecomposition plus the dense smoother S_j = G_j (G_j + penalty I)^{-1}
// needed for the hat-matrix updates.
struct ColumnLearner {
    EigenGram gram;
    Matrix smoother;
    double smoother_trace = 0.0;
};
using ColumnLearners = std::vector<ColumnLearner>;

ColumnLearners precompute_column_learners(const Dataset& centered_data, double penalty,
                                          const KernelSpec& spec = {},
                                          Execution exec = Execution::Parallel);

// Candidate ridge fit of node `target`'s current residual on column `source`.
struct EdgeCandidate {
    int source = -1;
    int target = -1;
    Vector fitted;
    Vector coefficients;
    double score = 0.0;  // log sum_l (fitted_l - residual_l)^2
};

// log of the squared distance between a candidate fit and the residual it was
// fit to.  A zero sum (exact interpolation) is impossible for penalty > 0 with
// a nonzero residual and signals numerical breakdown: hard error.
double edge_score(const Vector& candidate_fitted, const Vector& residual);

// Ordered pairs (j, k) whose insertion j->k would close a cycle, i.e. k
// already reaches j.  Existing edges are not forbidden (re-selection is how
// an edge function accumulates boosting steps).
std::set<std::pair<int, int>> forbidden_edges(const Dag& g);

// Boosting state of one node of the structural equation model.
struct NodeFitState {
    int node = -1;
    Vector fitted;                           // empty until the first incoming edge (== zero fit)
    Matrix hat;                              // 0x0 until the first incoming edge
    double trace = 0.0;                      // tr(hat), maintained incrementally
    double rss = 0.0;                        // sum_l (x_lk - fitted_l)^2, raw (not /N)
    std::map<int, Vector> edge_coefficients; // source j -> accumulated coefficient vector

    bool active() const { return fitted.size() > 0; }
};

// Additive SEM produced by dagboost: per-node fits over an acyclic graph,
// with the standardized training data kept for out-of-sample evaluation.
struct FittedSem {
    Dag graph;
    std::vector<NodeFitState> nodes;
    BoostConfig config;
    KernelSpec spec;
    Dataset centered_data;  // standardized: see DagboostState
    int iterations = 0;   // kept boosting steps
    bool converged = true; // false when max_iterations was hit before an AIC stop
    double aic = 0.0;      // N*sum_k log(RSS_k/N) + 2*sum_k tr(B_k)
};

struct StepInfo {
    int step = 0;  // 1-based kept-step counter
    int source = -1;
    int target = -1;
    double score = 0.0;
    double aic_before = 0.0;
    double aic_after = 0.0;
    double rss_before = 0.0;  // target node, raw RSS
    double rss_after = 0.0;
};
using StepObserver = std::function<void(const StepInfo&)>;

// Incremental dagboost state machine: component-wise gradient descent on the
// loss L(F) = sum_k log(RSS_k) over additive SEMs that form a DAG.  The input
// data are standardized (centered, unit variance) on construction.  preview()
// selects the allowed candidate with the best loss gain score - log(RSS_k)
// and evaluates its AIC effect without mutating anything; apply_pending()
// commits it: graph edge, hat/trace/fitted/rss update and a refresh of every
// candidate targeting the updated node (and only those).
//
// The stopping criterion is the AIC of the loss, N*sum_k log(RSS_k / N) +
// 2*sum_k tr(B_k); a boosting step is worthwhile only while the likelihood
// improvement outweighs twice the added degrees of freedom, which is what
// keeps pure-noise data from growing spurious structure.
class DagboostState {
public:
    DagboostState(const Dataset& data, BoostConfig cfg, KernelSpec spec = {});
    DagboostState(const Dataset& data, BoostConfig cfg, KernelSpec spec,
                  std::shared_ptr<const ColumnLearners> learners);

    struct Pending {
        int candidate_index = -1;
        int source = -1;
        int target = -1;
        double score = 0.0;
        double delta_aic = 0.0;
        Vector new_fitted;
        double new_rss = 0.0;
        double delta_trace = 0.0;
    };

    // nullopt when every remaining pair is forbidden.
    std::optional<Pending> preview() const;
    void apply_pending(const Pending& pending);

    const Dag& graph() const { return graph_; }
    const std::vector<NodeFitState>& nodes() const { return nodes_; }
    const std::vector<EdgeCandidate>& candidates() const { return candidates_; }
    const std::set<std::pair<int, int>>& forbidden() const { return forbidden_; }
    const ColumnLearners& learners() const { return *learners_; }
    const Dataset& data() const { return data_; }
    double aic() const { return aic_; }
    int kept_steps() const { return kept_steps_; }

    Vector residual(int k) const;
    FittedSem to_sem(bool converged) const;

private:
    void refresh_target(int k);
    void refresh_all();

    Dataset data_;  // standardized
    BoostConfig cfg_;
    KernelSpec spec_;
    std::shared_ptr<const ColumnLearners> learners_;
    Dag graph_;
    std::vector<NodeFitState> nodes_;
    std::vector<EdgeCandidate> candidates_;  // index = source * p + target
    std::set<std::pair<int, int>> forbidden_;
    double aic_ = 0.0;
    int kept_steps_ = 0;
};

// Full run: start from the empty model, take AIC-greedy steps until the
// global AIC would rise (patience = cfg.patience consecutive rises allowed;
// the state at the AIC minimum is returned), no candidate remains, or
// cfg.max_iterations steps were kept (converged = false).
FittedSem dagboost_run(const Dataset& data, const BoostConfig& cfg, const KernelSpec& spec = {},
                       const StepObserver& observer = {});

// Per-node function values at a query point given on the model's internal
// standardized scale (length p).  Map a raw observation with the means and
// scales recorded on sem.centered_data before calling.
Vector evaluate_sem(const FittedSem& sem, const Vector& query);

}  // namespace camboost
