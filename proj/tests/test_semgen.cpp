#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "camboost/semgen.hpp"
#include "helpers.hpp"

using namespace camboost;

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

double column_variance(const Vector& col) {
    const double mean = col.mean();
    return (col.array() - mean).square().sum() / static_cast<double>(col.size());
}

}  // namespace

TEST_CASE("ER edge counts follow the binomial law") {
    RngStream rng(4242);
    const int draws = 2000;
    // p = 5, expected 5 edges: each of the C(5,2) = 10 pairs is kept with
    // probability 1/2, so the edge count is Binomial(10, 1/2).  Tail bins are
    // merged so every expected cell count stays comfortably large.
    std::vector<double> bin_probability = {11.0, 45.0, 120.0, 210.0, 252.0,
                                           210.0, 120.0, 45.0,  11.0};
    for (double& p : bin_probability) p /= 1024.0;
    std::vector<int> observed(9, 0);
    double total_edges = 0.0;
    for (int d = 0; d < draws; ++d) {
        const Dag g = sample_er_dag(5, 5.0, rng);
        CHECK(static_cast<int>(g.topological_sort().size()) == 5);
        const int e = g.edge_count();
        total_edges += e;
        const int bin = e <= 1 ? 0 : (e >= 9 ? 8 : e - 1);
        ++observed[static_cast<std::size_t>(bin)];
    }
    const double mean = total_edges / draws;
    CHECK(mean > 4.7);
    CHECK(mean < 5.3);
    double chi2 = 0.0;
    for (int b = 0; b < 9; ++b) {
        const double expected = draws * bin_probability[static_cast<std::size_t>(b)];
        const double diff = observed[static_cast<std::size_t>(b)] - expected;
        chi2 += diff * diff / expected;
    }
    // 99.9% point of chi-squared with 8 degrees of freedom.
    CHECK(chi2 < 26.125);
}

TEST_CASE("ER edge-count extremes") {
    RngStream rng(1);
    CHECK(sample_er_dag(1, 0.0, rng).edge_count() == 0);
    for (int d = 0; d < 10; ++d) {
        CHECK(sample_er_dag(4, 0.0, rng).edge_count() == 0);
        CHECK(sample_er_dag(5, 1000.0, rng).edge_count() == 10);
    }
    CHECK_THROWS_AS(sample_er_dag(0, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_er_dag(3, -1.0, rng), std::invalid_argument);
}

TEST_CASE("scale-free draws have a deterministic edge count") {
    RngStream rng(2);
    for (int d = 0; d < 20; ++d) {
        const Dag tiny = sample_sf_dag(2, 1, rng);
        CHECK(tiny.edges() == std::set<Dag::Edge>{{0, 1}});
    }
    for (int p = 2; p <= 7; ++p) {
        for (int m = 1; m <= 3; ++m) {
            int expected = 0;
            for (int t = 1; t < p; ++t) expected += std::min(t, m);
            const Dag g = sample_sf_dag(p, m, rng);
            CHECK(g.edge_count() == expected);
            CHECK(static_cast<int>(g.topological_sort().size()) == p);
        }
    }
    CHECK_THROWS_AS(sample_sf_dag(0, 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_sf_dag(3, 0, rng), std::invalid_argument);
}

TEST_CASE("preferential attachment grows hubs") {
    int with_hub = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        RngStream rng(7000 + s);
        const Dag g = sample_sf_dag(100, 1, rng);
        std::vector<int> degree(100, 0);
        for (const auto& [j, k] : g.edges()) {
            ++degree[static_cast<std::size_t>(j)];
            ++degree[static_cast<std::size_t>(k)];
        }
        if (*std::max_element(degree.begin(), degree.end()) >= 8) ++with_hub;
    }
    // A uniform-attachment tree of 100 nodes almost never reaches degree 8.
    CHECK(with_hub >= 90);
}

TEST_CASE("a single-point GP draw is a standard normal draw") {
    RngStream rng(123);
    RngStream copy = rng;
    const Vector out = sample_gp(Matrix::Constant(1, 1, 0.7), rng);
    const double z = copy.next_normal();
    CHECK(std::abs(out(0) - z) <= 1e-6);
}

TEST_CASE("duplicate GP inputs give near-identical outputs") {
    Matrix inputs(2, 1);
    inputs << 0.5, 0.5;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Vector out = sample_gp(inputs, RngStream(300 + s));
        CHECK(std::abs(out(0) - out(1)) <= 1e-3);
    }
    CHECK_THROWS_AS(sample_gp(Matrix(0, 1), RngStream(1)), std::invalid_argument);
}

TEST_CASE("GP draws honor the squared-exponential covariance") {
    std::vector<double> far0, far1, near0, near1;
    for (std::uint64_t s = 0; s < 500; ++s) {
        RngStream rng(100000 + s);
        Matrix far(2, 1);
        far << 0.0, 10.0;
        const Vector a = sample_gp(far, rng.derive(1));
        far0.push_back(a(0));
        far1.push_back(a(1));
        Matrix near(2, 1);
        near << 0.0, 0.1;
        const Vector b = sample_gp(near, rng.derive(2));
        near0.push_back(b(0));
        near1.push_back(b(1));
    }
    CHECK(std::abs(pearson(far0, far1)) < 0.15);
    CHECK(pearson(near0, near1) > 0.9);
    const auto var = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return s / static_cast<double>(v.size());
    };
    CHECK(var(far0) > 0.8);
    CHECK(var(far0) < 1.2);
    CHECK(var(far1) > 0.8);
    CHECK(var(far1) < 1.2);
}

TEST_CASE("a single root node is pure scaled noise") {
    GenConfig cfg;
    cfg.p = 1;
    cfg.n = 500;
    cfg.seed = 1234;
    const GroundTruth gt = generate_dataset(cfg);
    CHECK(gt.graph.edge_count() == 0);
    const double sd = std::sqrt(column_variance(gt.data.column(0)));
    CHECK(sd > 0.85 * gt.sigmas(0));
    CHECK(sd < 1.15 * gt.sigmas(0));
}

TEST_CASE("an empty graph yields uncorrelated columns") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        GenConfig cfg;
        cfg.p = 4;
        cfg.n = 500;
        cfg.expected_edges = 0.0;
        cfg.seed = seed;
        const GroundTruth gt = generate_dataset(cfg);
        CHECK(gt.graph.edge_count() == 0);
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                const Vector ca = gt.data.column(a);
                const Vector cb = gt.data.column(b);
                std::vector<double> va(ca.data(), ca.data() + ca.size());
                std::vector<double> vb(cb.data(), cb.data() + cb.size());
                CHECK(std::abs(pearson(va, vb)) < 0.15);
            }
        }
    }
}

TEST_CASE("the cosine pair matches its closed-form variance") {
    // Var(-3 cos X + e) with X, e standard normal:
    //   9 * ((1 + e^{-2})/2 - e^{-1}) + 1.
    const double theory =
        9.0 * ((1.0 + std::exp(-2.0)) / 2.0 - std::exp(-1.0)) + 1.0;
    double pooled = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const GroundTruth gt = generate_cosine_pair(2000, seed);
        CHECK(gt.graph.edges() == std::set<Dag::Edge>{{0, 1}});
        CHECK(gt.sigmas(0) == 1.0);
        CHECK(gt.sigmas(1) == 1.0);
        pooled += column_variance(gt.data.column(1));
    }
    pooled /= 5.0;
    CHECK(std::abs(pooled - theory) < 0.15);
}

TEST_CASE("generation is bit-deterministic and seed-sensitive") {
    GenConfig cfg;
    cfg.p = 5;
    cfg.n = 60;
    cfg.seed = 77;
    const GroundTruth a = generate_dataset(cfg);
    const GroundTruth b = generate_dataset(cfg);
    CHECK(a.data.values() == b.data.values());
    CHECK(a.graph == b.graph);
    CHECK(a.sigmas == b.sigmas);

    cfg.seed = 78;
    const GroundTruth c = generate_dataset(cfg);
    CHECK(a.data.values() != c.data.values());
}

TEST_CASE("noise scales respect the configured range") {
    GenConfig cfg;
    cfg.p = 6;
    cfg.n = 10;
    cfg.seed = 90;
    const GroundTruth gt = generate_dataset(cfg);
    REQUIRE(gt.sigmas.size() == 6);
    for (int k = 0; k < 6; ++k) {
        CHECK(gt.sigmas(k) >= cfg.noise_low);
        CHECK(gt.sigmas(k) <= cfg.noise_high);
    }
    CHECK(gt.data.rows() == 10);
    CHECK(gt.data.cols() == 6);
    CHECK_FALSE(gt.data.is_centered());
}

TEST_CASE("the configured graph kind is honored") {
    GenConfig cfg;
    cfg.p = 6;
    cfg.n = 20;
    cfg.graph = GraphKind::ScaleFree;
    cfg.attachment = 2;
    cfg.seed = 91;
    const GroundTruth gt = generate_dataset(cfg);
    CHECK(gt.graph.edge_count() == 9);

    cfg.equations = EquationKind::NonAdditive;
    const GroundTruth na = generate_dataset(cfg);
    CHECK(na.graph == gt.graph);
    CHECK(na.data.rows() == 20);
}

TEST_CASE("generator configs are validated") {
    GenConfig cfg;
    cfg.p = 0;
    CHECK_THROWS_AS(generate_dataset(cfg), std::invalid_argument);
    cfg = GenConfig{};
    cfg.n = 0;
    CHECK_THROWS_AS(generate_dataset(cfg), std::invalid_argument);
    cfg = GenConfig{};
    cfg.expected_edges = -2.0;
    CHECK_THROWS_AS(generate_dataset(cfg), std::invalid_argument);
    cfg = GenConfig{};
    cfg.noise_low = 0.0;
    CHECK_THROWS_AS(generate_dataset(cfg), std::invalid_argument);
    cfg = GenConfig{};
    cfg.noise_low = 2.0;
    cfg.noise_high = 1.0;
    CHECK_THROWS_AS(generate_dataset(cfg), std::invalid_argument);
}

TEST_CASE("fixed-function generation validates its inputs") {
    const Dag chain = Dag::from_edges(2, {{0, 1}});
    const std::vector<FixedEdgeFunction> funcs{
        {0, 1, [](double x) { return x * x; }}};
    CHECK_THROWS_AS(generate_fixed(chain, {}, Vector::Ones(2), 50, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_fixed(chain, funcs, Vector::Ones(3), 50, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_fixed(chain, funcs, Vector::Zero(2), 50, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_fixed(chain, funcs, Vector::Ones(2), 0, 1),
                    std::invalid_argument);

    const GroundTruth gt = generate_fixed(chain, funcs, Vector::Ones(2), 50, 1);
    CHECK(gt.data.rows() == 50);
    CHECK(gt.graph == chain);
}
