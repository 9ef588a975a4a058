#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "camboost/boosting.hpp"
#include "camboost/semgen.hpp"
#include "helpers.hpp"

using namespace camboost;
using testutil::diag_gram;
using testutil::normal_dataset;
using testutil::normal_matrix;
using testutil::vec;

namespace {

EigenGram real_gram(int n, int seed, Vector* targets = nullptr) {
    const Dataset data = normal_dataset(n, 2, seed).centered();
    if (targets) *targets = data.column(1);
    return build_eigen_gram(data, {0});
}

}  // namespace

TEST_CASE("base spectrum applies the shrinkage formula eigenvalue-wise") {
    const EigenGram g = diag_gram(vec({0.8, 0.2}));
    const Vector d = base_spectrum(g, 0.2);
    CHECK(d(0) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(d(1) == doctest::Approx(0.5).epsilon(1e-14));

    const Vector one = base_spectrum(diag_gram(vec({1.0})), 0.01);
    CHECK(one(0) == doctest::Approx(1.0 / 1.01).epsilon(1e-14));

    CHECK_THROWS_AS(base_spectrum(g, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(base_spectrum(g, -0.5), std::invalid_argument);
}

TEST_CASE("zero boosting steps give the zero fit") {
    Vector y;
    const EigenGram g = real_gram(20, 101, &y);
    const BoostFit fit = boost_fixed(g, y, BoostConfig{}, 0);
    CHECK(fit.iterations == 0);
    CHECK(fit.fitted.cwiseAbs().maxCoeff() == 0.0);
    CHECK(fit.trace == 0.0);
    CHECK(fit.residual_ss == doctest::Approx(y.squaredNorm() / 20.0).epsilon(1e-14));
    CHECK(fit.shrinkage.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one full-step boosting iteration is the ridge fit") {
    Vector y;
    const EigenGram g = real_gram(25, 102, &y);
    BoostConfig cfg;
    cfg.step_size = 1.0;
    const BoostFit fit = boost_fixed(g, y, cfg, 1);
    const RidgeFit ridge = ridge_solve(g, y, cfg.penalty);
    CHECK((fit.fitted - ridge.fitted).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral and iterative boosting agree on real data") {
    Vector y;
    const EigenGram g = real_gram(40, 103, &y);
    BoostConfig cfg;
    cfg.step_size = 0.3;
    const BoostFit a = boost_fixed(g, y, cfg, 7);
    const BoostFit b = boost_iterative_reference(g, y, cfg, 7);
    CHECK((a.fitted - b.fitted).cwiseAbs().maxCoeff() < 1e-8);
    // Coefficients are identified only through the Gram: the spectral form
    // zeroes the (near-)null directions that the literal loop leaves free.
    CHECK((g.gram * (a.coefficients - b.coefficients)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(a.trace == doctest::Approx(b.trace).epsilon(1e-8));
    CHECK(a.residual_ss == doctest::Approx(b.residual_ss).epsilon(1e-8));
}

TEST_CASE("shrinkage factors are bounded, monotone in m, and at most min(1, m nu d)") {
    Vector y;
    const EigenGram g = real_gram(30, 104, &y);
    BoostConfig cfg;
    const Vector d = base_spectrum(g, cfg.penalty);
    Vector prev = Vector::Zero(30);
    double prev_rss = y.squaredNorm() / 30.0;
    for (int m = 1; m <= 12; ++m) {
        const BoostFit fit = boost_fixed(g, y, cfg, m);
        for (int l = 0; l < 30; ++l) {
            CHECK(fit.shrinkage(l) >= 0.0);
            CHECK(fit.shrinkage(l) < 1.0);
            CHECK(fit.shrinkage(l) >= prev(l) - 1e-12);
            CHECK(fit.shrinkage(l) <=
                  std::min(1.0, m * cfg.step_size * d(l)) + 1e-12);
        }
        CHECK(fit.residual_ss <= prev_rss + 1e-12);
        prev = fit.shrinkage;
        prev_rss = fit.residual_ss;
    }
}

TEST_CASE("the boosting trace matches the explicit hat matrix") {
    Vector y;
    const EigenGram g = real_gram(25, 105, &y);
    BoostConfig cfg;
    const int m = 5;
    const BoostFit fit = boost_fixed(g, y, cfg, m);
    CHECK(fit.trace == doctest::Approx(fit.shrinkage.sum()).epsilon(1e-12));

    const Vector d = base_spectrum(g, cfg.penalty);
    Vector factors(25);
    for (int l = 0; l < 25; ++l) {
        factors(l) = 1.0 - std::pow(1.0 - cfg.step_size * d(l), m);
    }
    const Matrix hat = g.eigenvectors * factors.asDiagonal() * g.eigenvectors.transpose();
    CHECK(fit.trace == doctest::Approx(hat.trace()).epsilon(1e-8));
    CHECK((fit.fitted - hat * y).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("negative iteration counts are rejected") {
    Vector y;
    const EigenGram g = real_gram(10, 106, &y);
    CHECK_THROWS_AS(boost_fixed(g, y, BoostConfig{}, -1), std::invalid_argument);
    CHECK_THROWS_AS(boost_iterative_reference(g, y, BoostConfig{}, -2), std::invalid_argument);
}

TEST_CASE("AIC stopping on zero targets stops immediately") {
    Vector y;
    const EigenGram g = real_gram(15, 107, &y);
    const BoostFit fit = boost_aic(g, Vector::Zero(15), BoostConfig{});
    CHECK(fit.iterations == 1);
    CHECK(fit.fitted.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(fit.converged);
}

TEST_CASE("AIC stopping on pure noise does not overfit") {
    const int n = 100;
    int in_range = 0;
    for (int seed = 1; seed <= 5; ++seed) {
        const Dataset data =
            Dataset::from_matrix(normal_matrix(n, 2, RngStream(seed))).centered();
        const EigenGram g = build_eigen_gram(data, {0});
        const Vector y = data.column(1);
        const double variance = y.squaredNorm() / n;
        const BoostFit fit = boost_aic(g, y, BoostConfig{});
        CHECK(fit.converged);
        CHECK(fit.residual_ss > 0.3);
        const double ratio = fit.residual_ss / variance;
        if (ratio >= 0.5 && ratio <= 1.5) ++in_range;
    }
    CHECK(in_range == 5);
}

namespace {

// Smooth signal plus noise of SD 0.5: the stopped fit should recover most of
// the signal, leaving a residual mean square near 0.25.
Dataset gp_noise_dataset(int n, std::uint64_t seed) {
    RngStream rng(seed);
    Matrix x(n, 1);
    for (int i = 0; i < n; ++i) x(i, 0) = rng.next_normal();
    const Vector signal = sample_gp(x, rng.derive(99));
    Matrix m(n, 2);
    m.col(0) = x.col(0);
    for (int i = 0; i < n; ++i) m(i, 1) = signal(i) + 0.5 * rng.next_normal();
    return Dataset::from_matrix(std::move(m)).centered();
}

}  // namespace

TEST_CASE("AIC stopping recovers a smooth signal") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Dataset data = gp_noise_dataset(200, seed);
        const EigenGram g = build_eigen_gram(data, {0});
        const BoostFit fit = boost_aic(g, data.column(1), BoostConfig{});
        CHECK(fit.converged);
        CHECK(fit.residual_ss >= 0.25 / 3.0);
        CHECK(fit.residual_ss <= 0.5);
        CHECK(fit.iterations >= 1);
    }
}

TEST_CASE("an exhausted iteration budget is reported as not converged") {
    const Dataset data = gp_noise_dataset(200, 3);
    const EigenGram g = build_eigen_gram(data, {0});
    BoostConfig cfg;
    cfg.max_iterations = 3;
    const BoostFit fit = boost_aic(g, data.column(1), cfg);
    CHECK_FALSE(fit.converged);
    CHECK(fit.iterations == 3);
}

TEST_CASE("the dispatcher routes each stopping rule") {
    Vector y;
    const EigenGram g = real_gram(30, 108, &y);

    BoostConfig fixed;
    fixed.stopping = StoppingRule::FixedCount;
    fixed.fixed_count = 6;
    const BoostFit a = boost(g, y, fixed);
    const BoostFit b = boost_fixed(g, y, fixed, 6);
    CHECK(a.iterations == 6);
    CHECK((a.fitted - b.fitted).cwiseAbs().maxCoeff() == 0.0);

    BoostConfig rate;
    rate.stopping = StoppingRule::FixedRate;
    rate.decay = DecayConstants{0.5, 1.0};
    const int m = theoretical_mstop(30, DecayConstants{0.5, 1.0});
    const BoostFit c = boost(g, y, rate);
    const BoostFit d = boost_fixed(g, y, rate, m);
    CHECK(c.iterations == m);
    CHECK((c.fitted - d.fitted).cwiseAbs().maxCoeff() == 0.0);

    BoostConfig aic;
    aic.stopping = StoppingRule::Aic;
    const BoostFit e = boost(g, y, aic);
    const BoostFit f = boost_aic(g, y, aic);
    CHECK(e.iterations == f.iterations);
    CHECK((e.fitted - f.fitted).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the rate-optimal stopping count follows the closed form") {
    CHECK(theoretical_mstop(1, DecayConstants{0.5, 1.0}) == 1);
    // exponent (1/4)(0.5 + 1.0 + 0.5)/(1.0 + 1) = 1/4, and 10000^{1/4} = 10.
    CHECK(theoretical_mstop(10000, DecayConstants{0.5, 1.0}) == 10);
    for (int n : {2, 10, 100, 1000}) {
        const int m = theoretical_mstop(n, DecayConstants{0.5, 1.0});
        CHECK(m >= 1);
        CHECK(m <= static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))) + 1);
    }
    CHECK_THROWS_AS(theoretical_mstop(0, DecayConstants{0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(theoretical_mstop(10, DecayConstants{0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(theoretical_mstop(10, DecayConstants{1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("decay constants are recovered exactly from a clean exponential spectrum") {
    Vector mu(10);
    for (int l = 0; l < 10; ++l) mu(l) = std::exp(-0.7 * (l + 1));
    const DecayConstants c = estimate_decay_constants(diag_gram(mu));
    CHECK(c.lower == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(c.upper == doctest::Approx(1.4).epsilon(1e-6));
}

TEST_CASE("decay estimation rejects degenerate spectra") {
    CHECK_THROWS_WITH_AS(
        (void)estimate_decay_constants(diag_gram(vec({0.25, 0.25, 0.25, 0.25}))),
        doctest::Contains("does not decay"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        (void)estimate_decay_constants(diag_gram(vec({0.9, 0.1, 1e-13, 1e-14}))),
        doctest::Contains("fewer than 3"), std::runtime_error);
}

TEST_CASE("decay estimation on real data yields a positive rate") {
    Vector y;
    const EigenGram g = real_gram(200, 5, &y);
    const DecayConstants c = estimate_decay_constants(g);
    CHECK(c.lower > 0.0);
    CHECK(c.upper == doctest::Approx(2.0 * c.lower).epsilon(1e-12));
}

TEST_CASE("the spectral RKHS norm matches the coefficient quadratic form") {
    Vector y;
    const EigenGram g = real_gram(35, 109, &y);
    BoostConfig cfg;
    CHECK(rkhs_norm_diag(g, y, cfg, 0) == 0.0);
    CHECK(rkhs_norm_diag(g, Vector::Zero(35), cfg, 5) == 0.0);

    double prev = 0.0;
    for (int m : {1, 3, 8, 20}) {
        const double spectral = rkhs_norm_diag(g, y, cfg, m);
        const BoostFit fit = boost_fixed(g, y, cfg, m);
        const double quadratic = fit.coefficients.dot(g.gram * fit.coefficients) / 35.0;
        CHECK(spectral == doctest::Approx(quadratic).epsilon(1e-6));
        CHECK(spectral >= prev - 1e-12);
        prev = spectral;
    }
}
