#include "camboost/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace camboost {

namespace {

constexpr double kVarianceFloor = 1e-12;  // below this a column counts as constant

std::uint64_t score_key(int k, std::uint64_t mask) {
    return (mask << 6) | static_cast<std::uint64_t>(k);
}

}  // namespace

Permutation::Permutation(std::vector<int> sequence) : sequence_(std::move(sequence)) {
    const int p = static_cast<int>(sequence_.size());
    position_.assign(static_cast<std::size_t>(p), -1);
    for (int i = 0; i < p; ++i) {
        const int v = sequence_[static_cast<std::size_t>(i)];
        if (v < 0 || v >= p || position_[static_cast<std::size_t>(v)] != -1) {
            throw std::invalid_argument("Permutation: sequence is not a permutation of 0.." +
                                        std::to_string(p - 1));
        }
        position_[static_cast<std::size_t>(v)] = i;
    }
}

Permutation Permutation::identity(int p) {
    std::vector<int> seq(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) seq[static_cast<std::size_t>(i)] = i;
    return Permutation(std::move(seq));
}

std::vector<int> Permutation::predecessors(int variable) const {
    const int pos = position(variable);
    std::vector<int> out(sequence_.begin(), sequence_.begin() + pos);
    std::sort(out.begin(), out.end());
    return out;
}

int transposition_distance(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("transposition_distance: permutations differ in size");
    }
    const int p = a.size();
    // Map a's sequence through b's positions; the inversion count of the
    // resulting sequence is the minimal number of adjacent swaps.
    std::vector<int> r(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) r[static_cast<std::size_t>(i)] = b.position(a.at(i));
    int inversions = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (r[static_cast<std::size_t>(i)] > r[static_cast<std::size_t>(j)]) ++inversions;
        }
    }
    return inversions;
}

int cayley_distance(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cayley_distance: permutations differ in size");
    }
    const int p = a.size();
    std::vector<int> g(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) g[static_cast<std::size_t>(v)] = a.at(b.position(v));
    std::vector<char> seen(static_cast<std::size_t>(p), 0);
    int cycles = 0;
    for (int v = 0; v < p; ++v) {
        if (seen[static_cast<std::size_t>(v)]) continue;
        ++cycles;
        int w = v;
        while (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            w = g[static_cast<std::size_t>(w)];
        }
    }
    return p - cycles;
}

namespace {

void enumerate_rec(const Dag& g, std::vector<int>& indegree, std::vector<char>& placed,
                   std::vector<int>& prefix, std::vector<Permutation>& out) {
    const int p = g.node_count();
    if (static_cast<int>(prefix.size()) == p) {
        out.emplace_back(prefix);
        return;
    }
    for (int v = 0; v < p; ++v) {
        if (placed[static_cast<std::size_t>(v)] || indegree[static_cast<std::size_t>(v)] != 0) continue;
        placed[static_cast<std::size_t>(v)] = 1;
        prefix.push_back(v);
        for (int w : g.children(v)) --indegree[static_cast<std::size_t>(w)];
        enumerate_rec(g, indegree, placed, prefix, out);
        for (int w : g.children(v)) ++indegree[static_cast<std::size_t>(w)];
        prefix.pop_back();
        placed[static_cast<std::size_t>(v)] = 0;
    }
}

}  // namespace

std::vector<Permutation> enumerate_topological_orderings(const Dag& g, int hard_limit) {
    const int p = g.node_count();
    if (p > hard_limit) {
        throw std::invalid_argument("enumerate_topological_orderings: " + std::to_string(p) +
                                    " nodes exceeds the enumeration limit of " +
                                    std::to_string(hard_limit));
    }
    std::vector<int> indegree(static_cast<std::size_t>(p), 0);
    for (const auto& [j, k] : g.edges()) ++indegree[static_cast<std::size_t>(k)];
    std::vector<char> placed(static_cast<std::size_t>(p), 0);
    std::vector<int> prefix;
    prefix.reserve(static_cast<std::size_t>(p));
    std::vector<Permutation> out;
    enumerate_rec(g, indegree, placed, prefix, out);
    return out;  // candidates tried in ascending order => lexicographic output
}

int distance_to_ordering_set(const Permutation& estimate, const Dag& truth, OrderingDistance kind,
                             int hard_limit) {
    if (estimate.size() != truth.node_count()) {
        throw std::invalid_argument("distance_to_ordering_set: size mismatch");
    }
    const auto orderings = enumerate_topological_orderings(truth, hard_limit);
    int best = -1;
    for (const auto& pi0 : orderings) {
        const int d = (kind == OrderingDistance::Transposition)
                          ? transposition_distance(estimate, pi0)
                          : cayley_distance(estimate, pi0);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

ScoreCache::ScoreCache(const Dataset& data, BoostConfig cfg, KernelSpec spec)
    : data_(data.centered()), cfg_(cfg), spec_(spec) {
    if (data_.cols() < 1) throw std::invalid_argument("ScoreCache: empty dataset");
    if (data_.cols() > 58) {
        throw std::invalid_argument("ScoreCache: predecessor bitmask supports at most 58 variables");
    }
    data_.require_finite();
}

double ScoreCache::centered_second_moment(int k) const {
    return data_.column(k).squaredNorm() / static_cast<double>(data_.rows());
}

const EigenGram& ScoreCache::gram_for(std::uint64_t mask) {
    auto it = grams_.find(mask);
    if (it != grams_.end()) return it->second;
    std::vector<int> cols;
    for (int j = 0; j < data_.cols(); ++j) {
        if (mask & (std::uint64_t{1} << j)) cols.push_back(j);
    }
    return grams_.emplace(mask, build_eigen_gram(data_, cols, spec_)).first->second;
}

ScoreCache::Entry ScoreCache::compute_entry(int k, std::uint64_t mask, const EigenGram* gram) {
    const double var_k = centered_second_moment(k);
    if (var_k < kVarianceFloor) {
        throw std::invalid_argument("ScoreCache: column " + data_.column_names()[static_cast<std::size_t>(k)] +
                                    " is numerically constant");
    }
    Entry e;
    if (mask == 0) {
        e.sigma2 = var_k;
        e.iterations = 0;
        return e;
    }
    const BoostFit fit = boost(*gram, data_.column(k), cfg_);
    e.sigma2 = fit.residual_ss;
    e.iterations = fit.iterations;
    e.converged = fit.converged;
    return e;
}

double ScoreCache::node_residual_variance(int k, const std::vector<int>& predecessors) {
    std::uint64_t mask = 0;
    for (int j : predecessors) {
        if (j < 0 || j >= data_.cols()) {
            throw std::invalid_argument("node_residual_variance: predecessor index out of range");
        }
        if (j == k) {
            throw std::invalid_argument("node_residual_variance: node cannot be its own predecessor");
        }
        mask |= std::uint64_t{1} << j;
    }
    return node_residual_variance_masked(k, mask);
}

double ScoreCache::node_residual_variance_masked(int k, std::uint64_t predecessor_mask) {
    if (k < 0 || k >= data_.cols()) {
        throw std::invalid_argument("node_residual_variance: node index out of range");
    }
    if (predecessor_mask & (std::uint64_t{1} << k)) {
        throw std::invalid_argument("node_residual_variance: node cannot be its own predecessor");
    }
    std::lock_guard<std::mutex> lock(mutex_);
    const std::uint64_t key = score_key(k, predecessor_mask);
    auto it = scores_.find(key);
    if (it != scores_.end()) return it->second.sigma2;
    const EigenGram* gram = (predecessor_mask == 0) ? nullptr : &gram_for(predecessor_mask);
    Entry e = compute_entry(k, predecessor_mask, gram);
    if (predecessor_mask != 0) ++regressions_;
    return scores_.emplace(key, e).first->second.sigma2;
}

double ScoreCache::score_ordering(const Permutation& pi) {
    if (pi.size() != data_.cols()) {
        throw std::invalid_argument("score_ordering: permutation size does not match dataset");
    }
    double score = 0.0;
    std::uint64_t mask = 0;
    for (int pos = 0; pos < pi.size(); ++pos) {
        const int k = pi.at(pos);
        score += std::log(node_residual_variance_masked(k, mask));
        mask |= std::uint64_t{1} << k;
    }
    return score;
}

void ScoreCache::prefill_all() {
    const int p = data_.cols();
    const std::uint64_t full = (std::uint64_t{1} << p) - 1;

    // Phase 1: Gram matrices for every proper nonempty subset, in parallel.
    std::vector<std::uint64_t> gram_masks;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (std::uint64_t mask = 1; mask < full; ++mask) {
            if (!grams_.count(mask)) gram_masks.push_back(mask);
        }
    }
    std::vector<EigenGram> built(gram_masks.size());
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(gram_masks.size()); ++i) {
        try {
            std::vector<int> cols;
            for (int j = 0; j < p; ++j) {
                if (gram_masks[static_cast<std::size_t>(i)] & (std::uint64_t{1} << j)) cols.push_back(j);
            }
            built[static_cast<std::size_t>(i)] = build_eigen_gram(data_, cols, spec_);
        } catch (const std::exception& e) {
#pragma omp critical
            if (failure.empty()) failure = e.what();
        }
    }
    if (!failure.empty()) throw std::runtime_error("ScoreCache::prefill_all: " + failure);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (std::size_t i = 0; i < gram_masks.size(); ++i) {
            grams_.emplace(gram_masks[i], std::move(built[i]));
        }
    }

    // Phase 2: one score per (node, predecessor-subset) key, in parallel.
    struct Job {
        int k;
        std::uint64_t mask;
    };
    std::vector<Job> jobs;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (int k = 0; k < p; ++k) {
            const std::uint64_t comp = full & ~(std::uint64_t{1} << k);
            std::uint64_t sub = comp;
            while (true) {  // all subsets of comp, including empty
                if (!scores_.count(score_key(k, sub))) jobs.push_back({k, sub});
                if (sub == 0) break;
                sub = (sub - 1) & comp;
            }
        }
    }
    std::vector<Entry> results(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(jobs.size()); ++i) {
        try {
            const Job& job = jobs[static_cast<std::size_t>(i)];
            const EigenGram* gram = (job.mask == 0) ? nullptr : &grams_.at(job.mask);
            results[static_cast<std::size_t>(i)] = compute_entry(job.k, job.mask, gram);
        } catch (const std::exception& e) {
#pragma omp critical
            if (failure.empty()) failure = e.what();
        }
    }
    if (!failure.empty()) throw std::runtime_error("ScoreCache::prefill_all: " + failure);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            scores_.emplace(score_key(jobs[i].k, jobs[i].mask), results[i]);
            if (jobs[i].mask != 0) ++regressions_;
        }
    }
}

std::pair<Permutation, double> best_ordering(ScoreCache& cache, int exhaustive_limit) {
    const int p = cache.node_count();
    if (p > exhaustive_limit) {
        throw std::invalid_argument(
            "best_ordering: exhaustive search is limited to " + std::to_string(exhaustive_limit) +
            " variables (got " + std::to_string(p) + "); use dagboost for larger graphs");
    }
    cache.prefill_all();
    std::vector<int> seq(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) seq[static_cast<std::size_t>(i)] = i;
    Permutation best_pi = Permutation(seq);
    double best_score = cache.score_ordering(best_pi);
    while (std::next_permutation(seq.begin(), seq.end())) {
        Permutation pi(seq);
        const double score = cache.score_ordering(pi);
        if (score < best_score) {  // strict: ties keep the lexicographically smallest
            best_score = score;
            best_pi = pi;
        }
    }
    return {best_pi, best_score};
}

std::pair<Permutation, double> best_ordering(const Dataset& data, const BoostConfig& cfg,
                                             int exhaustive_limit) {
    ScoreCache cache(data, cfg);
    return best_ordering(cache, exhaustive_limit);
}

}  // namespace camboost
