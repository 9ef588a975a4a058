#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "camboost/dag.hpp"
#include "camboost/dataset.hpp"
#include "camboost/rng.hpp"

namespace camboost {

enum class GraphKind { ErdosRenyi, ScaleFree };
enum class EquationKind { Additive, NonAdditive };

struct GenConfig {
    int p = 5;
    int n = 200;
    GraphKind graph = GraphKind::ErdosRenyi;
    double expected_edges = 5.0;  // Erdos-Renyi: keep probability = expected_edges / C(p,2)
    int attachment = 1;           // scale-free: edges attached per new node
    EquationKind equations = EquationKind::Additive;
    double noise_low = std::sqrt(2.0) / 5.0;   // noise SDs drawn uniformly from
    double noise_high = std::sqrt(2.0);        // [noise_low, noise_high]
    std::uint64_t seed = 0;
};

struct GroundTruth {
    Dag graph;
    Dataset data;    // raw (uncentered) samples
    Vector sigmas;   // per-node noise standard deviations
    GenConfig config;
};

// Uniform random ordering, then each forward pair kept independently with
// probability expected_edges / C(p,2) (clamped to [0, 1]).
Dag sample_er_dag(int p, double expected_edges, RngStream& rng);

// Barabasi-Albert preferential attachment: node t attaches to min(t, m)
// distinct earlier nodes with probability proportional to degree + 1;
// edges are oriented from the earlier node to the later node.
Dag sample_sf_dag(int p, int attachment, RngStream& rng);

// One draw of a centered Gaussian process with covariance
// exp(-|x - x'|^2 / 2) at the given input rows.  Cholesky with escalating
// jitter (1e-8 .. 1e-4 by decades); failure at the last level is an error.
// The normal draws are consumed before factorization, so the draw sequence
// never depends on the jitter level.  The stream is taken by value: a GP
// draw owns its (derived) stream.
Vector sample_gp(const Matrix& inputs, RngStream rng);

// Full synthetic instance: graph, then columns in topological order.
// Additive equations sum one GP draw per parent; non-additive equations draw
// a single GP over the joint parent vector.  Bit-identical for equal configs.
GroundTruth generate_dataset(const GenConfig& cfg);

// Fixed-function injection: the graph, a univariate function per edge and the
// noise SDs are supplied; only the noise is random (additive equations).
struct FixedEdgeFunction {
    int source = -1;
    int target = -1;
    std::function<double(double)> f;
};
GroundTruth generate_fixed(const Dag& graph, const std::vector<FixedEdgeFunction>& functions,
                           const Vector& sigmas, int n, std::uint64_t seed);

// Two-variable demo model: X1 = e1, X2 = -3 cos(X1) + e2, unit noise SDs.
GroundTruth generate_cosine_pair(int n, std::uint64_t seed);

}  // namespace camboost
