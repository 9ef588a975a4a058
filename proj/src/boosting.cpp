#include "camboost/boosting.hpp"

#include <cmath>
#include <stdexcept>

namespace camboost {

namespace {

constexpr double kEigenvalueCutoff = 1e-12;  // below this an eigendirection is treated as null

void check_config(const BoostConfig& cfg) {
    if (!(cfg.step_size > 0.0) || cfg.step_size > 1.0) {
        throw std::invalid_argument("boosting: step_size must lie in (0, 1]");
    }
    if (!(cfg.penalty > 0.0)) throw std::invalid_argument("boosting: penalty must be positive");
    if (cfg.max_iterations < 1) throw std::invalid_argument("boosting: max_iterations must be >= 1");
}

void check_targets(const EigenGram& gram, const Vector& targets) {
    if (targets.size() != gram.gram.rows()) {
        throw std::invalid_argument("boosting: target length does not match Gram size");
    }
}

}  // namespace

Vector base_spectrum(const EigenGram& gram, double penalty) {
    if (!(penalty > 0.0)) throw std::invalid_argument("base_spectrum: penalty must be positive");
    return gram.eigenvalues.array() / (gram.eigenvalues.array() + penalty);
}

BoostFit boost_fixed(const EigenGram& gram, const Vector& targets, const BoostConfig& cfg, int m) {
    check_config(cfg);
    check_targets(gram, targets);
    if (m < 0) throw std::invalid_argument("boost_fixed: iteration count must be >= 0");
    const int n = gram.n();
    const Vector d = base_spectrum(gram, cfg.penalty);
    const Vector w = gram.eigenvectors.transpose() * targets;

    BoostFit fit;
    fit.iterations = m;
    fit.shrinkage.resize(n);
    Vector coeff_diag(n);
    for (int l = 0; l < n; ++l) {
        const double q = 1.0 - cfg.step_size * d(l);
        const double s = (m == 0) ? 0.0 : 1.0 - std::pow(q, m);
        fit.shrinkage(l) = s;
        const double mu = gram.eigenvalues(l);
        coeff_diag(l) = (mu > kEigenvalueCutoff) ? s / mu : 0.0;
    }
    fit.fitted = gram.eigenvectors * (fit.shrinkage.array() * w.array()).matrix();
    fit.coefficients = gram.eigenvectors * (coeff_diag.array() * w.array()).matrix();
    fit.trace = fit.shrinkage.sum();
    fit.residual_ss = (targets - fit.fitted).squaredNorm() / static_cast<double>(n);
    return fit;
}

BoostFit boost_iterative_reference(const EigenGram& gram, const Vector& targets,
                                   const BoostConfig& cfg, int m) {
    check_config(cfg);
    check_targets(gram, targets);
    if (m < 0) throw std::invalid_argument("boost_iterative_reference: iteration count must be >= 0");
    const int n = gram.n();
    Vector fitted = Vector::Zero(n);
    Vector coefficients = Vector::Zero(n);
    for (int step = 0; step < m; ++step) {
        const RidgeFit base = ridge_solve(gram, targets - fitted, cfg.penalty);
        fitted += cfg.step_size * base.fitted;
        coefficients += cfg.step_size * base.coefficients;
    }
    BoostFit fit;
    fit.iterations = m;
    const Vector d = base_spectrum(gram, cfg.penalty);
    fit.shrinkage.resize(n);
    for (int l = 0; l < n; ++l) {
        const double q = 1.0 - cfg.step_size * d(l);
        fit.shrinkage(l) = (m == 0) ? 0.0 : 1.0 - std::pow(q, m);
    }
    fit.fitted = fitted;
    fit.coefficients = coefficients;
    fit.trace = fit.shrinkage.sum();
    fit.residual_ss = (targets - fitted).squaredNorm() / static_cast<double>(n);
    return fit;
}

BoostFit boost_aic(const EigenGram& gram, const Vector& targets, const BoostConfig& cfg) {
    check_config(cfg);
    check_targets(gram, targets);
    const int n = gram.n();
    const Vector d = base_spectrum(gram, cfg.penalty);
    const Vector w = gram.eigenvectors.transpose() * targets;

    // In the eigenbasis the residual after m steps is q_l^m * w_l with
    // q_l = 1 - nu*d_l, so the whole AIC path costs O(N) per iteration.
    Vector q(n), qm(n);
    for (int l = 0; l < n; ++l) {
        q(l) = 1.0 - cfg.step_size * d(l);
        qm(l) = 1.0;
    }
    auto aic_at = [&](const Vector& power) {
        double rss = 0.0, trace = 0.0;
        for (int l = 0; l < n; ++l) {
            rss += w(l) * w(l) * power(l) * power(l);
            trace += 1.0 - power(l);
        }
        return rss + trace;
    };

    int best_m = cfg.max_iterations;
    bool converged = false;
    qm = qm.cwiseProduct(q);  // m = 1
    double prev_aic = aic_at(qm);
    for (int m = 2; m <= cfg.max_iterations; ++m) {
        qm = qm.cwiseProduct(q);
        const double aic = aic_at(qm);
        if (aic > prev_aic) {
            best_m = m - 1;
            converged = true;
            break;
        }
        prev_aic = aic;
    }
    BoostFit fit = boost_fixed(gram, targets, cfg, best_m);
    fit.converged = converged;
    return fit;
}

BoostFit boost(const EigenGram& gram, const Vector& targets, const BoostConfig& cfg) {
    switch (cfg.stopping) {
        case StoppingRule::Aic:
            return boost_aic(gram, targets, cfg);
        case StoppingRule::FixedCount:
            return boost_fixed(gram, targets, cfg, cfg.fixed_count);
        case StoppingRule::FixedRate: {
            const DecayConstants dc = cfg.decay ? *cfg.decay : estimate_decay_constants(gram);
            return boost_fixed(gram, targets, cfg, theoretical_mstop(gram.n(), dc));
        }
    }
    throw std::logic_error("boost: unknown stopping rule");
}

int theoretical_mstop(int n, const DecayConstants& constants) {
    if (n < 1) throw std::invalid_argument("theoretical_mstop: sample size must be >= 1");
    if (!(constants.lower > 0.0) || !(constants.upper > constants.lower)) {
        throw std::invalid_argument("theoretical_mstop: need 0 < lower < upper decay constants");
    }
    const double exponent =
        0.25 * (constants.lower + constants.upper + 0.5) / (constants.upper + 1.0);
    const double m = std::round(std::pow(static_cast<double>(n), exponent));
    return std::max(1, static_cast<int>(m));
}

DecayConstants estimate_decay_constants(const EigenGram& gram) {
    const int n = gram.n();
    // Slope of log(mu_k) against the 1-based rank k, usable eigenvalues only.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (int l = 0; l < n; ++l) {
        const double mu = gram.eigenvalues(l);
        if (mu > kEigenvalueCutoff) {
            const double x = static_cast<double>(l + 1);
            const double y = std::log(mu);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++count;
        }
    }
    if (count < 3) {
        throw std::runtime_error("estimate_decay_constants: fewer than 3 usable eigenvalues");
    }
    const double denom = count * sxx - sx * sx;
    const double slope = (count * sxy - sx * sy) / denom;
    if (!(slope < 0.0)) {
        throw std::runtime_error("estimate_decay_constants: spectrum does not decay");
    }
    DecayConstants dc;
    dc.lower = -slope;
    dc.upper = 2.0 * dc.lower;
    return dc;
}

double rkhs_norm_diag(const EigenGram& gram, const Vector& targets, const BoostConfig& cfg, int m) {
    check_config(cfg);
    check_targets(gram, targets);
    if (m < 0) throw std::invalid_argument("rkhs_norm_diag: iteration count must be >= 0");
    const int n = gram.n();
    const Vector d = base_spectrum(gram, cfg.penalty);
    const Vector w = gram.eigenvectors.transpose() * targets;
    double norm2 = 0.0;
    for (int l = 0; l < n; ++l) {
        const double mu = gram.eigenvalues(l);
        if (mu <= kEigenvalueCutoff) continue;
        const double s = (m == 0) ? 0.0 : 1.0 - std::pow(1.0 - cfg.step_size * d(l), m);
        norm2 += s * s * w(l) * w(l) / mu;
    }
    return norm2 / static_cast<double>(n);
}

}  // namespace camboost
