#include "camboost/dagboost.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace camboost {

ColumnLearners precompute_column_learners(const Dataset& centered_data, double penalty,
                                          const KernelSpec& spec, Execution exec) {
    if (!(penalty > 0.0)) {
        throw std::invalid_argument("precompute_column_learners: penalty must be positive");
    }
    const int p = centered_data.cols();
    ColumnLearners learners(static_cast<std::size_t>(p));
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < p; ++j) {
        try {
            ColumnLearner& cl = learners[static_cast<std::size_t>(j)];
            cl.gram = build_eigen_gram(centered_data, {j}, spec, exec);
            const Vector d = base_spectrum(cl.gram, penalty);
            cl.smoother = cl.gram.eigenvectors * d.asDiagonal() * cl.gram.eigenvectors.transpose();
            cl.smoother_trace = d.sum();
        } catch (const std::exception& e) {
#pragma omp critical
            if (failure.empty()) {
                failure = "precompute_column_learners: column " +
                          centered_data.column_names()[static_cast<std::size_t>(j)] + ": " + e.what();
            }
        }
    }
    if (!failure.empty()) throw std::runtime_error(failure);
    return learners;
}

double edge_score(const Vector& candidate_fitted, const Vector& residual) {
    if (candidate_fitted.size() != residual.size()) {
        throw std::invalid_argument("edge_score: length mismatch");
    }
    const double sum = (candidate_fitted - residual).squaredNorm();
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw std::runtime_error(
            "edge_score: candidate interpolates the residual exactly (zero or non-finite "
            "squared distance); numerical breakdown");
    }
    return std::log(sum);
}

std::set<std::pair<int, int>> forbidden_edges(const Dag& g) {
    std::set<std::pair<int, int>> out;
    const int p = g.node_count();
    for (int j = 0; j < p; ++j) {
        for (int k = 0; k < p; ++k) {
            if (j != k && g.has_path(k, j)) out.insert({j, k});
        }
    }
    return out;
}

DagboostState::DagboostState(const Dataset& data, BoostConfig cfg, KernelSpec spec)
    : DagboostState(data, cfg, spec, nullptr) {}

DagboostState::DagboostState(const Dataset& data, BoostConfig cfg, KernelSpec spec,
                             std::shared_ptr<const ColumnLearners> learners)
    // Columns are standardized (centered, unit variance): the edge selection
    // compares residual sums across different target nodes, which is only
    // meaningful on a common scale.  Raw columns make the argmin chase the
    // smallest-variance node regardless of structure.
    : data_(data.centered(true)), cfg_(cfg), spec_(spec), graph_(data.cols()) {
    data_.require_finite();
    const int p = data_.cols();
    const int n = data_.rows();
    if (n < 2) throw std::invalid_argument("dagboost: need at least 2 rows");
    if (learners) {
        if (static_cast<int>(learners->size()) != p) {
            throw std::invalid_argument("dagboost: learner count does not match column count");
        }
        learners_ = std::move(learners);
    } else {
        learners_ = std::make_shared<const ColumnLearners>(
            precompute_column_learners(data_, cfg_.penalty, spec_));
    }
    nodes_.resize(static_cast<std::size_t>(p));
    aic_ = 0.0;
    for (int k = 0; k < p; ++k) {
        NodeFitState& s = nodes_[static_cast<std::size_t>(k)];
        s.node = k;
        s.rss = data_.column(k).squaredNorm();
        if (s.rss <= static_cast<double>(n) * 1e-12) {
            throw std::invalid_argument("dagboost: column " +
                                        data_.column_names()[static_cast<std::size_t>(k)] +
                                        " is numerically constant");
        }
        aic_ += static_cast<double>(n) * std::log(s.rss / static_cast<double>(n));
    }
    candidates_.assign(static_cast<std::size_t>(p) * static_cast<std::size_t>(p), EdgeCandidate{});
    refresh_all();
}

Vector DagboostState::residual(int k) const {
    const NodeFitState& s = nodes_[static_cast<std::size_t>(k)];
    if (s.active()) return data_.column(k) - s.fitted;
    return data_.column(k);
}

void DagboostState::refresh_target(int k) {
    const int p = data_.cols();
    const Vector r = residual(k);
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < p; ++j) {
        if (j == k) continue;
        try {
            const ColumnLearner& cl = learners()[static_cast<std::size_t>(j)];
            const RidgeFit fit = ridge_solve(cl.gram, r, cfg_.penalty);
            EdgeCandidate& cand =
                candidates_[static_cast<std::size_t>(j) * static_cast<std::size_t>(p) +
                            static_cast<std::size_t>(k)];
            cand.source = j;
            cand.target = k;
            cand.fitted = fit.fitted;
            cand.coefficients = fit.coefficients;
            cand.score = edge_score(fit.fitted, r);
        } catch (const std::exception& e) {
#pragma omp critical
            if (failure.empty()) {
                failure = "dagboost: candidate " + std::to_string(j + 1) + "->" +
                          std::to_string(k + 1) + ": " + e.what();
            }
        }
    }
    if (!failure.empty()) throw std::runtime_error(failure);
}

void DagboostState::refresh_all() {
    for (int k = 0; k < data_.cols(); ++k) refresh_target(k);
}

std::optional<DagboostState::Pending> DagboostState::preview() const {
    const int p = data_.cols();
    const int n = data_.rows();
    // Greedy descent on the loss L(F) = sum_k log(RSS_k): a step on (j, k)
    // changes only the k-th term, so the best candidate minimizes the gain
    // score - log(RSS_k).  The gain is scale-free per target, which keeps
    // nodes with already-small residuals from monopolizing the selection.
    int best = -1;
    double best_gain = 0.0;
    for (int j = 0; j < p; ++j) {
        for (int k = 0; k < p; ++k) {
            if (j == k || forbidden_.count({j, k})) continue;
            const int idx = j * p + k;
            const double gain = candidates_[static_cast<std::size_t>(idx)].score -
                                std::log(nodes_[static_cast<std::size_t>(k)].rss);
            if (best < 0 || gain < best_gain) {
                best = idx;  // scanning j-major then k keeps ties at the smallest (j, k)
                best_gain = gain;
            }
        }
    }
    if (best < 0) return std::nullopt;

    const EdgeCandidate& cand = candidates_[static_cast<std::size_t>(best)];
    const NodeFitState& node = nodes_[static_cast<std::size_t>(cand.target)];
    const ColumnLearner& cl = learners()[static_cast<std::size_t>(cand.source)];
    const double nu = cfg_.step_size;

    Pending pending;
    pending.candidate_index = best;
    pending.source = cand.source;
    pending.target = cand.target;
    pending.score = cand.score;
    pending.new_fitted =
        node.active() ? Vector(node.fitted + nu * cand.fitted) : Vector(nu * cand.fitted);
    pending.new_rss = (data_.column(cand.target) - pending.new_fitted).squaredNorm();
    if (!(pending.new_rss > 0.0)) {
        throw std::runtime_error("dagboost: residual of node " + std::to_string(cand.target + 1) +
                                 " collapsed to zero (numerical breakdown)");
    }
    const double tr_sh =
        node.active() ? cl.smoother.cwiseProduct(node.hat.transpose()).sum() : 0.0;
    pending.delta_trace = nu * (cl.smoother_trace - tr_sh);
    pending.delta_aic = static_cast<double>(n) * (std::log(pending.new_rss) - std::log(node.rss)) +
                        2.0 * pending.delta_trace;
    return pending;
}

void DagboostState::apply_pending(const Pending& pending) {
    const int j = pending.source;
    const int k = pending.target;
    NodeFitState& node = nodes_[static_cast<std::size_t>(k)];
    const ColumnLearner& cl = learners()[static_cast<std::size_t>(j)];
    const EdgeCandidate& cand = candidates_[static_cast<std::size_t>(pending.candidate_index)];
    const double nu = cfg_.step_size;

    if (node.active()) {
        node.hat = node.hat + nu * (cl.smoother - cl.smoother * node.hat);
    } else {
        node.hat = nu * cl.smoother;
    }
    aic_ += pending.delta_aic;
    node.trace += pending.delta_trace;
    node.fitted = pending.new_fitted;
    node.rss = pending.new_rss;
    auto [it, inserted] = node.edge_coefficients.try_emplace(j, nu * cand.coefficients);
    if (!inserted) it->second += nu * cand.coefficients;

    graph_.add_edge(j, k);  // no-op when re-selecting an existing edge
    forbidden_ = forbidden_edges(graph_);
    ++kept_steps_;
    refresh_target(k);
}

FittedSem DagboostState::to_sem(bool converged) const {
    FittedSem sem;
    sem.graph = graph_;
    sem.nodes = nodes_;
    sem.config = cfg_;
    sem.spec = spec_;
    sem.centered_data = data_;
    sem.iterations = kept_steps_;
    sem.converged = converged;
    sem.aic = aic_;
    return sem;
}

FittedSem dagboost_run(const Dataset& data, const BoostConfig& cfg, const KernelSpec& spec,
                       const StepObserver& observer) {
    DagboostState state(data, cfg, spec);
    // Snapshot of the state at the current AIC minimum; only needed when a
    // positive patience lets the run walk through AIC increases.  The empty
    // model counts as a candidate minimum: if every step from the start
    // raises the AIC, the run must return the untouched state.
    std::optional<DagboostState> best_state;
    if (cfg.patience > 0) best_state = state;
    int bad_streak = 0;
    bool converged = true;

    for (int step = 1; step <= cfg.max_iterations; ++step) {
        const auto pending = state.preview();
        if (!pending) break;  // every remaining pair closes a cycle
        if (pending->delta_aic > 0.0 && bad_streak >= cfg.patience) break;

        const double aic_before = state.aic();
        const double rss_before = state.nodes()[static_cast<std::size_t>(pending->target)].rss;
        state.apply_pending(*pending);
        if (pending->delta_aic > 0.0) {
            ++bad_streak;
        } else {
            bad_streak = 0;
            if (cfg.patience > 0) best_state = state;
        }
        if (observer) {
            StepInfo info;
            info.step = state.kept_steps();
            info.source = pending->source;
            info.target = pending->target;
            info.score = pending->score;
            info.aic_before = aic_before;
            info.aic_after = state.aic();
            info.rss_before = rss_before;
            info.rss_after = pending->new_rss;
            observer(info);
        }
        if (step == cfg.max_iterations) converged = false;
    }

    // Trailing AIC-increasing steps (possible only with patience > 0) are
    // discarded: return the state at the AIC minimum.
    if (bad_streak > 0 && best_state) return best_state->to_sem(converged);
    return state.to_sem(converged);
}

Vector evaluate_sem(const FittedSem& sem, const Vector& query) {
    const int p = sem.centered_data.cols();
    if (query.size() != p) {
        throw std::invalid_argument("evaluate_sem: query has " + std::to_string(query.size()) +
                                    " values, expected " + std::to_string(p));
    }
    const int n = sem.centered_data.rows();
    const double inv_n = 1.0 / static_cast<double>(n);
    Vector out = Vector::Zero(p);
    for (int k = 0; k < p; ++k) {
        const NodeFitState& node = sem.nodes[static_cast<std::size_t>(k)];
        double value = 0.0;
        for (const auto& [j, coeff] : node.edge_coefficients) {
            const auto col = sem.centered_data.values().col(j);
            double term = 0.0;
            for (int l = 0; l < n; ++l) {
                const double diff = query(j) - col(l);
                term += coeff(l) * std::exp(-(diff * diff) / (2.0 * sem.spec.bandwidth));
            }
            value += term * inv_n;
        }
        out(k) = value;
    }
    return out;
}

}  // namespace camboost
