#include "camboost/pruning.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "camboost/special.hpp"

namespace camboost {

namespace {

// RSS and smoother trace of the additive kernel ridge fit of y on `cols`.
// Empty column set: the null model (zero fit), RSS = |y|^2, df = 0.
std::pair<double, double> rss_and_df(const Dataset& centered, const Vector& y,
                                     const std::vector<int>& cols, const PruneConfig& cfg) {
    if (cols.empty()) return {y.squaredNorm(), 0.0};
    const EigenGram gram = build_eigen_gram(centered, cols, cfg.spec);
    const RidgeFit fit = ridge_solve(gram, y, cfg.penalty);
    const Vector d = base_spectrum(gram, cfg.penalty);
    return {(y - fit.fitted).squaredNorm(), d.sum()};
}

}  // namespace

ParentTest parent_pvalue(const Dataset& data, int k, const std::vector<int>& parents, int j,
                         const PruneConfig& cfg) {
    if (k < 0 || k >= data.cols()) throw std::invalid_argument("parent_pvalue: node out of range");
    if (std::find(parents.begin(), parents.end(), j) == parents.end()) {
        throw std::invalid_argument("parent_pvalue: tested parent is not in the parent set");
    }
    if (std::find(parents.begin(), parents.end(), k) != parents.end()) {
        throw std::invalid_argument("parent_pvalue: node cannot be its own parent");
    }
    if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0)) {
        throw std::invalid_argument("parent_pvalue: alpha must lie in (0, 1)");
    }
    const Dataset centered = data.centered();
    const Vector y = centered.column(k);
    const int n = centered.rows();

    std::vector<int> full = parents;
    std::sort(full.begin(), full.end());
    std::vector<int> reduced;
    for (int c : full) {
        if (c != j) reduced.push_back(c);
    }

    const auto [rss_full, df_full] = rss_and_df(centered, y, full, cfg);
    const auto [rss_red, df_red] = rss_and_df(centered, y, reduced, cfg);

    ParentTest test;
    test.node = k;
    test.parent = j;
    test.df_effect = df_full - df_red;
    test.df_residual = static_cast<double>(n) - df_full;
    if (!(test.df_residual > 0.0)) {
        throw std::runtime_error("parent_pvalue: smoother degrees of freedom reach the sample size");
    }
    const double numerator = rss_red - rss_full;
    if (numerator <= 0.0 || test.df_effect <= 0.0) {
        test.f_statistic = 0.0;  // clamped: the larger model fits no better
        test.p_value = 1.0;
        return test;
    }
    test.f_statistic = (numerator / test.df_effect) / (rss_full / test.df_residual);
    test.p_value = f_distribution_sf(test.f_statistic, test.df_effect, test.df_residual);
    return test;
}

Dag prune_graph(const Dag& graph, const Dataset& data, const PruneConfig& cfg) {
    if (graph.node_count() != data.cols()) {
        throw std::invalid_argument("prune_graph: graph size does not match dataset");
    }
    const int p = graph.node_count();
    const Dataset centered = data.centered();
    std::vector<std::vector<int>> kept(static_cast<std::size_t>(p));
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < p; ++k) {
        try {
            std::vector<int> parents = graph.parents(k);
            std::sort(parents.begin(), parents.end());
            for (int j : parents) {
                const ParentTest t = parent_pvalue(centered, k, parents, j, cfg);
                if (t.p_value < cfg.alpha) kept[static_cast<std::size_t>(k)].push_back(j);
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (failure.empty()) {
                failure = "prune_graph: node " + std::to_string(k + 1) + ": " + e.what();
            }
        }
    }
    if (!failure.empty()) throw std::runtime_error(failure);
    Dag out(p);
    for (int k = 0; k < p; ++k) {
        for (int j : kept[static_cast<std::size_t>(k)]) out.add_edge(j, k);
    }
    return out;
}

Dag prune_graph(const FittedSem& sem, const Dataset& data, const PruneConfig& cfg) {
    return prune_graph(sem.graph, data, cfg);
}

}  // namespace camboost
