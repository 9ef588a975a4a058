#pragma once

// Shared construction helpers for the unit tests.

#include <initializer_list>
#include <utility>

#include <Eigen/Dense>

#include "camboost/dataset.hpp"
#include "camboost/kernel.hpp"
#include "camboost/rng.hpp"

namespace testutil {

using camboost::Dataset;
using camboost::Matrix;
using camboost::Vector;

inline Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<int>(values.size()));
    int i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

inline Dataset single_column(std::initializer_list<double> values) {
    Matrix m(static_cast<int>(values.size()), 1);
    int i = 0;
    for (double x : values) m(i++, 0) = x;
    return Dataset::from_matrix(std::move(m));
}

// N x p matrix of independent standard normal draws.
inline Matrix normal_matrix(int n, int p, camboost::RngStream rng) {
    Matrix m(n, p);
    for (int j = 0; j < p; ++j) {
        for (int i = 0; i < n; ++i) m(i, j) = rng.next_normal();
    }
    return m;
}

inline Dataset normal_dataset(int n, int p, std::uint64_t seed) {
    return Dataset::from_matrix(normal_matrix(n, p, camboost::RngStream(seed)));
}

// EigenGram with a prescribed spectrum and identity eigenvectors, for
// exercising the spectral formulas directly.
inline camboost::EigenGram diag_gram(const Vector& eigenvalues) {
    camboost::EigenGram g;
    const int n = static_cast<int>(eigenvalues.size());
    g.eigenvalues = eigenvalues;
    g.eigenvectors = Matrix::Identity(n, n);
    g.gram = eigenvalues.asDiagonal();
    g.predictor_columns = {0};
    g.bandwidths = {1.0};
    g.training = Matrix::Zero(n, 1);
    return g;
}

}  // namespace testutil
