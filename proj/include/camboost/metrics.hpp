#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "camboost/dag.hpp"

namespace camboost {

// Cost charged when truth and estimate carry the same pair in opposite
// directions: One treats a reversal as a single edit, Two as a deletion
// plus an insertion.
enum class ReversalPolicy { One, Two };

struct GraphDiff {
    std::vector<Dag::Edge> missing;               // in truth, absent from estimate
    std::vector<Dag::Edge> extra;                 // in estimate, absent from truth
    std::vector<Dag::Edge> reversed;              // truth direction of flipped pairs
    int shd = 0;
    std::optional<double> precision;              // undefined when the estimate is empty
    std::optional<double> recall;                 // undefined when the truth is empty
};

int shd(const Dag& truth, const Dag& estimate, ReversalPolicy policy = ReversalPolicy::One);

// Directed precision/recall: correct = edges with matching direction.
std::pair<std::optional<double>, std::optional<double>> precision_recall(const Dag& truth,
                                                                         const Dag& estimate);

GraphDiff graph_diff(const Dag& truth, const Dag& estimate,
                     ReversalPolicy policy = ReversalPolicy::One);

}  // namespace camboost
