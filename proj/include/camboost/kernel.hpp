#pragma once

#include <Eigen/Dense>
#include <vector>

#include "camboost/dataset.hpp"

namespace camboost {

// Execution policy for the hand-written kernels.  Serial is the reference
// implementation kept for testing; Parallel is the OpenMP path.  Both must
// produce bit-identical results (each matrix entry is computed independently
// with the same arithmetic order).
enum class Execution { Serial, Parallel };

struct KernelSpec {
    double bandwidth = 1.0;  // scale parameter in exp(-(x-x')^2 / (2*bandwidth))
};

// Gaussian kernel value K(x, x') = exp(-(x-x')^2 / (2*bandwidth)).
double gaussian_kernel(double x, double x_prime, const KernelSpec& spec = {});

// Additive-kernel Gram over the given columns (N x d), scaled by 1/N:
//   gram(a, b) = (1/N) * sum_j exp(-(cols(a,j)-cols(b,j))^2 / (2*bandwidth_j)).
Matrix assemble_gram(const Matrix& columns, const std::vector<double>& bandwidths,
                     Execution exec = Execution::Parallel);

// Cross-kernel matrix between query rows (M x d) and training rows (N x d):
//   cross(q, a) = (1/N) * sum_j K_j(queries(q,j), training(a,j)).
Matrix cross_gram(const Matrix& training, const Matrix& queries,
                  const std::vector<double>& bandwidths,
                  Execution exec = Execution::Parallel);

// Scaled Gram matrix of an additive Gaussian kernel together with its full
// symmetric eigendecomposition.  Eigenvalues are sorted non-increasing and
// clamped at zero; a raw eigenvalue below -1e-8 * mu_1 is a hard error.
struct EigenGram {
    Matrix gram;                        // N x N, entries K(x_a, x_b) / N
    Vector eigenvalues;                 // non-increasing, >= 0
    Matrix eigenvectors;                // columns paired with eigenvalues
    std::vector<int> predictor_columns; // dataset column indices used
    std::vector<double> bandwidths;     // per-predictor kernel scales
    Matrix training;                    // N x d copy of the predictor columns

    int n() const { return static_cast<int>(gram.rows()); }
};

// Builds the Gram for the selected dataset columns.  Errors: empty column
// set, fewer than 2 rows, non-finite data (named column), eigensolver
// failure (diagnostic carries the offending column set).
EigenGram build_eigen_gram(const Dataset& data, const std::vector<int>& columns,
                           const std::vector<KernelSpec>& specs,
                           Execution exec = Execution::Parallel);
EigenGram build_eigen_gram(const Dataset& data, const std::vector<int>& columns,
                           const KernelSpec& shared_spec = {},
                           Execution exec = Execution::Parallel);

// Kernel ridge solution computed in the eigenbasis:
//   coefficients = U (Lambda + penalty I)^{-1} U^T y,  fitted = gram * coefficients.
struct RidgeFit {
    Vector coefficients;
    Vector fitted;
    double penalty = 0.0;
    std::vector<int> predictor_columns;
    std::vector<double> bandwidths;
    Matrix training;  // copy of the predictor columns, for out-of-sample prediction
};

RidgeFit ridge_solve(const EigenGram& gram, const Vector& targets, double penalty);

// Out-of-sample prediction: f(x*) = sum_l c_l * (1/N) sum_j K_j(x*_j, X_lj).
// query must have one value per predictor column.
double predict(const RidgeFit& fit, const Vector& query);

}  // namespace camboost
