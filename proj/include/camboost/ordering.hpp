#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "camboost/boosting.hpp"
#include "camboost/dag.hpp"
#include "camboost/dataset.hpp"

namespace camboost {

// Causal ordering stored as a sequence: sequence()[i] is the variable (0-based)
// placed at position i, so earlier entries are candidate causes of later ones.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> sequence);
    static Permutation identity(int p);

    int size() const { return static_cast<int>(sequence_.size()); }
    int at(int position) const { return sequence_[static_cast<std::size_t>(position)]; }
    int position(int variable) const { return position_[static_cast<std::size_t>(variable)]; }
    const std::vector<int>& sequence() const { return sequence_; }

    // Variables placed before `variable`, ascending by index.
    std::vector<int> predecessors(int variable) const;

    bool operator==(const Permutation& o) const { return sequence_ == o.sequence_; }
    bool operator<(const Permutation& o) const { return sequence_ < o.sequence_; }

private:
    std::vector<int> sequence_;
    std::vector<int> position_;
};

// Minimal number of adjacent transpositions turning `a` into `b`
// (the Kendall-tau / inversion distance between the sequences).
int transposition_distance(const Permutation& a, const Permutation& b);

// Minimal number of arbitrary (not necessarily adjacent) transpositions:
// p minus the number of cycles of a∘b^{-1}.  Diagnostic variant only.
int cayley_distance(const Permutation& a, const Permutation& b);

enum class OrderingDistance { Transposition, Cayley };

// All topological orderings of g, lexicographically sorted.  Guarded by a
// hard node limit (enumeration is factorial in the worst case).
std::vector<Permutation> enumerate_topological_orderings(const Dag& g, int hard_limit = 10);

// min over all topological orderings pi0 of d(estimate, pi0).
int distance_to_ordering_set(const Permutation& estimate, const Dag& truth,
                             OrderingDistance kind = OrderingDistance::Transposition,
                             int hard_limit = 10);

// Memo for per-node regression scores, keyed by (node, predecessor bitmask).
// Binds the (centered) dataset and the boosting configuration at construction
// so every cached value is reproducible by recomputation with the same inputs.
// Gram matrices are shared across nodes with the same predecessor set.
class ScoreCache {
public:
    ScoreCache(const Dataset& data, BoostConfig cfg, KernelSpec spec = {});

    const Dataset& data() const { return data_; }
    const BoostConfig& config() const { return cfg_; }
    int node_count() const { return data_.cols(); }

    // sigma^2_{k,S}: mean squared residual of the AIC-stopped boosting fit of
    // column k on predecessor set S; for empty S the centered second moment.
    // Errors: k in S, index out of range, numerically constant column k.
    // The _masked variant is deliberately not an overload: a braced list like
    // {0} would silently convert to the integer mask instead of a vector.
    double node_residual_variance(int k, const std::vector<int>& predecessors);
    double node_residual_variance_masked(int k, std::uint64_t predecessor_mask);

    // log-variance score of a full ordering: sum_k log sigma^2_{k, predecessors}.
    double score_ordering(const Permutation& pi);

    // Computes every (node, predecessor-subset) score once, in parallel over
    // a deterministic partition of the keys.  After this every score_ordering
    // call is a pure cache read.
    void prefill_all();

    long regression_count() const { return regressions_; }

private:
    struct Entry {
        double sigma2 = 0.0;
        int iterations = 0;
        bool converged = true;
    };

    const EigenGram& gram_for(std::uint64_t mask);
    Entry compute_entry(int k, std::uint64_t mask, const EigenGram* gram);
    double centered_second_moment(int k) const;

    Dataset data_;  // centered copy
    BoostConfig cfg_;
    KernelSpec spec_;
    std::unordered_map<std::uint64_t, EigenGram> grams_;
    std::unordered_map<std::uint64_t, Entry> scores_;
    long regressions_ = 0;
    std::mutex mutex_;
};

// Exhaustive search over all p! orderings (p <= exhaustive_limit, default 8).
// Permutations are visited in lexicographic order and ties keep the first,
// i.e. the lexicographically smallest minimiser.  Scores come from `cache`,
// which is prefilled in parallel.
std::pair<Permutation, double> best_ordering(ScoreCache& cache, int exhaustive_limit = 8);
std::pair<Permutation, double> best_ordering(const Dataset& data, const BoostConfig& cfg,
                                             int exhaustive_limit = 8);

}  // namespace camboost
