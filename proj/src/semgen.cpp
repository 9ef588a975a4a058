#include "camboost/semgen.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <stdexcept>
#include <string>

namespace camboost {

namespace {

// Stream labels under the master seed; every replication, node and edge gets
// its own derived stream so draws never depend on generation order.
constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kSigmaStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kFunctionStream = 4;

Vector draw_normals(RngStream rng, int n) {
    Vector z(n);
    for (int i = 0; i < n; ++i) z(i) = rng.next_normal();
    return z;
}

}  // namespace

Dag sample_er_dag(int p, double expected_edges, RngStream& rng) {
    if (p < 1) throw std::invalid_argument("sample_er_dag: p must be >= 1");
    if (!(expected_edges >= 0.0)) {
        throw std::invalid_argument("sample_er_dag: expected_edges must be >= 0");
    }
    const double pairs = 0.5 * p * (p - 1);
    const double q = (pairs > 0.0) ? std::min(1.0, expected_edges / pairs) : 0.0;
    std::vector<int> order(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);
    Dag g(p);
    for (int a = 0; a < p; ++a) {
        for (int b = a + 1; b < p; ++b) {
            if (rng.next_uniform() < q) {
                g.add_edge(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
            }
        }
    }
    return g;
}

Dag sample_sf_dag(int p, int attachment, RngStream& rng) {
    if (p < 1) throw std::invalid_argument("sample_sf_dag: p must be >= 1");
    if (attachment < 1) throw std::invalid_argument("sample_sf_dag: attachment must be >= 1");
    Dag g(p);
    std::vector<int> degree(static_cast<std::size_t>(p), 0);
    for (int t = 1; t < p; ++t) {
        const int picks = std::min(t, attachment);
        std::vector<char> chosen(static_cast<std::size_t>(t), 0);
        for (int pick = 0; pick < picks; ++pick) {
            double total = 0.0;
            for (int v = 0; v < t; ++v) {
                if (!chosen[static_cast<std::size_t>(v)]) total += degree[static_cast<std::size_t>(v)] + 1.0;
            }
            double u = rng.next_uniform() * total;
            int selected = -1;
            for (int v = 0; v < t; ++v) {
                if (chosen[static_cast<std::size_t>(v)]) continue;
                u -= degree[static_cast<std::size_t>(v)] + 1.0;
                if (u < 0.0) {
                    selected = v;
                    break;
                }
            }
            if (selected < 0) {  // guard against u landing exactly on the total
                for (int v = t - 1; v >= 0; --v) {
                    if (!chosen[static_cast<std::size_t>(v)]) {
                        selected = v;
                        break;
                    }
                }
            }
            chosen[static_cast<std::size_t>(selected)] = 1;
        }
        for (int v = 0; v < t; ++v) {
            if (chosen[static_cast<std::size_t>(v)]) {
                g.add_edge(v, t);
                ++degree[static_cast<std::size_t>(v)];
                ++degree[static_cast<std::size_t>(t)];
            }
        }
    }
    return g;
}

Vector sample_gp(const Matrix& inputs, RngStream rng) {
    const int n = static_cast<int>(inputs.rows());
    if (n < 1) throw std::invalid_argument("sample_gp: need at least one input row");
    const Vector z = draw_normals(rng, n);
    Matrix cov(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b <= a; ++b) {
            const double d2 = (inputs.row(a) - inputs.row(b)).squaredNorm();
            const double v = std::exp(-0.5 * d2);
            cov(a, b) = v;
            cov(b, a) = v;
        }
    }
    for (double jitter = 1e-8; jitter <= 1.001e-4; jitter *= 10.0) {
        Matrix attempt = cov;
        attempt.diagonal().array() += jitter;
        Eigen::LLT<Matrix> llt(attempt);
        if (llt.info() == Eigen::Success) {
            return llt.matrixL() * z;
        }
    }
    throw std::runtime_error("sample_gp: Cholesky failed at every jitter level");
}

namespace {

GroundTruth assemble(const Dag& graph, const Vector& sigmas, int n, std::uint64_t seed,
                     const std::function<Vector(int, const std::vector<int>&, const Matrix&)>& mean_fn) {
    const int p = graph.node_count();
    RngStream root(seed);
    const RngStream noise_root = root.derive(kNoiseStream);

    Matrix values(n, p);
    for (int k : graph.topological_sort()) {
        std::vector<int> parents = graph.parents(k);
        std::sort(parents.begin(), parents.end());
        Vector column = sigmas(k) * draw_normals(noise_root.derive(static_cast<std::uint64_t>(k)), n);
        if (!parents.empty()) {
            column += mean_fn(k, parents, values);
        }
        values.col(k) = column;
    }
    GroundTruth gt;
    gt.graph = graph;
    gt.data = Dataset::from_matrix(std::move(values));
    gt.sigmas = sigmas;
    return gt;
}

}  // namespace

GroundTruth generate_dataset(const GenConfig& cfg) {
    if (cfg.p < 1) throw std::invalid_argument("generate_dataset: p must be >= 1");
    if (cfg.n < 1) throw std::invalid_argument("generate_dataset: n must be >= 1");
    if (!(cfg.noise_low > 0.0) || !(cfg.noise_high >= cfg.noise_low)) {
        throw std::invalid_argument("generate_dataset: need 0 < noise_low <= noise_high");
    }
    RngStream root(cfg.seed);
    RngStream graph_rng = root.derive(kGraphStream);
    RngStream sigma_rng = root.derive(kSigmaStream);
    const RngStream fn_root = root.derive(kFunctionStream);

    const Dag graph = (cfg.graph == GraphKind::ErdosRenyi)
                          ? sample_er_dag(cfg.p, cfg.expected_edges, graph_rng)
                          : sample_sf_dag(cfg.p, cfg.attachment, graph_rng);
    Vector sigmas(cfg.p);
    for (int k = 0; k < cfg.p; ++k) sigmas(k) = sigma_rng.next_uniform(cfg.noise_low, cfg.noise_high);

    const std::uint64_t pp = static_cast<std::uint64_t>(cfg.p) * static_cast<std::uint64_t>(cfg.p);
    auto mean_fn = [&](int k, const std::vector<int>& parents, const Matrix& values) {
        if (cfg.equations == EquationKind::Additive) {
            Vector sum = Vector::Zero(cfg.n);
            for (int j : parents) {
                const std::uint64_t edge_id =
                    static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(cfg.p) +
                    static_cast<std::uint64_t>(k);
                sum += sample_gp(values.col(j), fn_root.derive(edge_id));
            }
            return sum;
        }
        Matrix inputs(cfg.n, static_cast<int>(parents.size()));
        for (std::size_t c = 0; c < parents.size(); ++c) {
            inputs.col(static_cast<int>(c)) = values.col(parents[c]);
        }
        return sample_gp(inputs, fn_root.derive(pp + static_cast<std::uint64_t>(k)));
    };

    GroundTruth gt = assemble(graph, sigmas, cfg.n, cfg.seed, mean_fn);
    gt.config = cfg;
    return gt;
}

GroundTruth generate_fixed(const Dag& graph, const std::vector<FixedEdgeFunction>& functions,
                           const Vector& sigmas, int n, std::uint64_t seed) {
    const int p = graph.node_count();
    if (sigmas.size() != p) throw std::invalid_argument("generate_fixed: one sigma per node required");
    if (n < 1) throw std::invalid_argument("generate_fixed: n must be >= 1");
    for (int k = 0; k < p; ++k) {
        if (!(sigmas(k) > 0.0)) throw std::invalid_argument("generate_fixed: sigmas must be positive");
    }
    auto find_function = [&](int j, int k) -> const FixedEdgeFunction& {
        for (const auto& fe : functions) {
            if (fe.source == j && fe.target == k) return fe;
        }
        throw std::invalid_argument("generate_fixed: no function for edge " + std::to_string(j + 1) +
                                    "->" + std::to_string(k + 1));
    };
    auto mean_fn = [&](int k, const std::vector<int>& parents, const Matrix& values) {
        Vector sum = Vector::Zero(n);
        for (int j : parents) {
            const auto& fe = find_function(j, k);
            for (int i = 0; i < n; ++i) sum(i) += fe.f(values(i, j));
        }
        return sum;
    };
    GroundTruth gt = assemble(graph, sigmas, n, seed, mean_fn);
    gt.config.p = p;
    gt.config.n = n;
    gt.config.seed = seed;
    return gt;
}

GroundTruth generate_cosine_pair(int n, std::uint64_t seed) {
    Dag graph = Dag::from_edges(2, {{0, 1}});
    std::vector<FixedEdgeFunction> functions;
    functions.push_back({0, 1, [](double x) { return -3.0 * std::cos(x); }});
    Vector sigmas(2);
    sigmas << 1.0, 1.0;
    return generate_fixed(graph, functions, sigmas, n, seed);
}

}  // namespace camboost
