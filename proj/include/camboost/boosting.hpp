#pragma once

#include <optional>

#include "camboost/kernel.hpp"

namespace camboost {

enum class StoppingRule { Aic, FixedRate, FixedCount };

// Spectrum decay model mu_k ~ exp(-C * k): the decay rate is assumed to lie
// in [lower, upper] with 0 < lower < upper.
struct DecayConstants {
    double lower = 0.0;  // C_u
    double upper = 0.0;  // C_d
};

struct BoostConfig {
    double step_size = 0.3;       // nu, in (0, 1]
    double penalty = 0.01;        // ridge penalty lambda (gamma * N with gamma fixed per N)
    int max_iterations = 1000;
    StoppingRule stopping = StoppingRule::Aic;
    int fixed_count = 0;          // iteration count for StoppingRule::FixedCount
    std::optional<DecayConstants> decay;  // for FixedRate; estimated from data if absent
    int patience = 0;             // consecutive AIC increases tolerated (dagboost)
};

struct BoostFit {
    int iterations = 0;
    Vector shrinkage;      // eigendirection factors 1 - (1 - nu*d_l)^m, in [0, 1)
    Vector fitted;
    Vector coefficients;   // c with fitted = gram * c (zeroed on eigenvalues <= 1e-12)
    double trace = 0.0;            // tr(B^(m)) = sum of shrinkage factors
    double residual_ss = 0.0;      // (1/N) * sum (y - fitted)^2
    bool converged = true;         // false when AIC never increased before max_iterations
};

// Eigenvalues of the base learner S = G (G + penalty I)^{-1}: d_l = mu_l / (mu_l + penalty).
Vector base_spectrum(const EigenGram& gram, double penalty);

// Closed-form boosting fit after exactly m steps of step size cfg.step_size:
// fitted = U (I - (I - nu D)^m) U^T y.  m = 0 is the zero fit.
BoostFit boost_fixed(const EigenGram& gram, const Vector& targets, const BoostConfig& cfg, int m);

// Literal gradient-descent loop (serial reference): repeatedly ridge-fit the
// current residual and take a nu-sized step.  Kept for testing and for the
// kernel benchmark; must agree with boost_fixed to numerical precision.
BoostFit boost_iterative_reference(const EigenGram& gram, const Vector& targets,
                                   const BoostConfig& cfg, int m);

// AIC-stopped boosting: scans AIC(m) = sum residual^2 + tr(B^(m)) over
// m = 1, 2, ... and returns the fit at the last m before the first increase.
// If AIC never increases by max_iterations, returns that fit with
// converged = false.
BoostFit boost_aic(const EigenGram& gram, const Vector& targets, const BoostConfig& cfg);

// Dispatch on cfg.stopping.
BoostFit boost(const EigenGram& gram, const Vector& targets, const BoostConfig& cfg);

// Rate-optimal stopping m = round(N^{(1/4)(C_u + C_d + 1/2)/(C_d + 1)}), >= 1.
// Requires 0 < C_u < C_d.
int theoretical_mstop(int n, const DecayConstants& constants);

// Least-squares slope of log(mu_k) against k over eigenvalues above 1e-12
// gives C_u = -slope; C_d = 2 * C_u.  Errors: fewer than 3 usable eigenvalues,
// non-decaying spectrum (slope >= 0).
DecayConstants estimate_decay_constants(const EigenGram& gram);

// Squared RKHS norm of the m-step boosting fit, evaluated spectrally:
//   (1/N) * y^T U (I - (I - nu D)^m)^2 Lambda^+ U^T y,
// where Lambda^+ drops eigendirections with eigenvalue <= 1e-12.
double rkhs_norm_diag(const EigenGram& gram, const Vector& targets, const BoostConfig& cfg, int m);

}  // namespace camboost
