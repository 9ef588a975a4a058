#include "camboost/metrics.hpp"

#include <stdexcept>

namespace camboost {

namespace {

void check_sizes(const Dag& truth, const Dag& estimate) {
    if (truth.node_count() != estimate.node_count()) {
        throw std::invalid_argument("metrics: graphs have different node counts");
    }
}

}  // namespace

GraphDiff graph_diff(const Dag& truth, const Dag& estimate, ReversalPolicy policy) {
    check_sizes(truth, estimate);
    GraphDiff diff;
    const int p = truth.node_count();
    int correct = 0;
    for (int a = 0; a < p; ++a) {
        for (int b = a + 1; b < p; ++b) {
            // A DAG carries at most one direction per unordered pair.
            const int t = truth.has_edge(a, b) ? 1 : (truth.has_edge(b, a) ? 2 : 0);
            const int e = estimate.has_edge(a, b) ? 1 : (estimate.has_edge(b, a) ? 2 : 0);
            if (t == e) {
                if (t != 0) ++correct;
                continue;
            }
            if (t != 0 && e != 0) {
                diff.reversed.push_back(t == 1 ? Dag::Edge{a, b} : Dag::Edge{b, a});
                diff.shd += (policy == ReversalPolicy::One) ? 1 : 2;
            } else if (t != 0) {
                diff.missing.push_back(t == 1 ? Dag::Edge{a, b} : Dag::Edge{b, a});
                diff.shd += 1;
            } else {
                diff.extra.push_back(e == 1 ? Dag::Edge{a, b} : Dag::Edge{b, a});
                diff.shd += 1;
            }
        }
    }
    if (estimate.edge_count() > 0) {
        diff.precision = static_cast<double>(correct) / estimate.edge_count();
    }
    if (truth.edge_count() > 0) {
        diff.recall = static_cast<double>(correct) / truth.edge_count();
    }
    return diff;
}

int shd(const Dag& truth, const Dag& estimate, ReversalPolicy policy) {
    return graph_diff(truth, estimate, policy).shd;
}

std::pair<std::optional<double>, std::optional<double>> precision_recall(const Dag& truth,
                                                                         const Dag& estimate) {
    const GraphDiff diff = graph_diff(truth, estimate, ReversalPolicy::One);
    return {diff.precision, diff.recall};
}

}  // namespace camboost
