#include "camboost/kernel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace camboost {

double gaussian_kernel(double x, double x_prime, const KernelSpec& spec) {
    if (!(spec.bandwidth > 0.0)) {
        throw std::invalid_argument("gaussian_kernel: bandwidth must be positive");
    }
    const double d = x - x_prime;
    return std::exp(-(d * d) / (2.0 * spec.bandwidth));
}

namespace {

// One Gram entry: additive kernel over all columns, then the 1/N scale.
// Shared by both execution paths so they are bit-identical by construction.
inline double gram_entry(const Matrix& columns, const std::vector<double>& bandwidths,
                         int a, int b, double inv_n) {
    double sum = 0.0;
    const int d = static_cast<int>(columns.cols());
    for (int j = 0; j < d; ++j) {
        const double diff = columns(a, j) - columns(b, j);
        sum += std::exp(-(diff * diff) / (2.0 * bandwidths[static_cast<std::size_t>(j)]));
    }
    return sum * inv_n;
}

inline double cross_entry(const Matrix& training, const Matrix& queries,
                          const std::vector<double>& bandwidths, int q, int a, double inv_n) {
    double sum = 0.0;
    const int d = static_cast<int>(training.cols());
    for (int j = 0; j < d; ++j) {
        const double diff = queries(q, j) - training(a, j);
        sum += std::exp(-(diff * diff) / (2.0 * bandwidths[static_cast<std::size_t>(j)]));
    }
    return sum * inv_n;
}

std::string column_list(const std::vector<int>& columns) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ", ";
        os << columns[i] + 1;
    }
    os << "}";
    return os.str();
}

}  // namespace

Matrix assemble_gram(const Matrix& columns, const std::vector<double>& bandwidths,
                     Execution exec) {
    const int n = static_cast<int>(columns.rows());
    if (static_cast<std::size_t>(columns.cols()) != bandwidths.size()) {
        throw std::invalid_argument("assemble_gram: bandwidth count does not match column count");
    }
    for (double b : bandwidths) {
        if (!(b > 0.0)) throw std::invalid_argument("assemble_gram: bandwidth must be positive");
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    Matrix g(n, n);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b <= a; ++b) {
                const double v = gram_entry(columns, bandwidths, a, b, inv_n);
                g(a, b) = v;
                g(b, a) = v;
            }
        }
    } else {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b <= a; ++b) {
                const double v = gram_entry(columns, bandwidths, a, b, inv_n);
                g(a, b) = v;
                g(b, a) = v;
            }
        }
    }
    return g;
}

Matrix cross_gram(const Matrix& training, const Matrix& queries,
                  const std::vector<double>& bandwidths, Execution exec) {
    if (training.cols() != queries.cols()) {
        throw std::invalid_argument("cross_gram: query dimension does not match training dimension");
    }
    const int n = static_cast<int>(training.rows());
    const int m = static_cast<int>(queries.rows());
    const double inv_n = 1.0 / static_cast<double>(n);
    Matrix c(m, n);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int q = 0; q < m; ++q) {
            for (int a = 0; a < n; ++a) c(q, a) = cross_entry(training, queries, bandwidths, q, a, inv_n);
        }
    } else {
        for (int q = 0; q < m; ++q) {
            for (int a = 0; a < n; ++a) c(q, a) = cross_entry(training, queries, bandwidths, q, a, inv_n);
        }
    }
    return c;
}

EigenGram build_eigen_gram(const Dataset& data, const std::vector<int>& columns,
                           const std::vector<KernelSpec>& specs, Execution exec) {
    if (columns.empty()) throw std::invalid_argument("build_eigen_gram: empty column set");
    if (data.rows() < 2) throw std::invalid_argument("build_eigen_gram: need at least 2 rows");
    if (specs.size() != columns.size()) {
        throw std::invalid_argument("build_eigen_gram: one KernelSpec per column required");
    }
    const int n = data.rows();
    const int d = static_cast<int>(columns.size());

    EigenGram eg;
    eg.predictor_columns = columns;
    eg.training.resize(n, d);
    eg.bandwidths.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        const int col = columns[static_cast<std::size_t>(j)];
        if (col < 0 || col >= data.cols()) {
            throw std::invalid_argument("build_eigen_gram: column index " + std::to_string(col + 1) +
                                        " out of range");
        }
        const double bw = specs[static_cast<std::size_t>(j)].bandwidth;
        if (!(bw > 0.0)) throw std::invalid_argument("build_eigen_gram: bandwidth must be positive");
        eg.bandwidths[static_cast<std::size_t>(j)] = bw;
        for (int i = 0; i < n; ++i) {
            const double v = data.values()(i, col);
            if (!std::isfinite(v)) {
                throw std::invalid_argument("build_eigen_gram: non-finite value in column " +
                                            data.column_names()[static_cast<std::size_t>(col)]);
            }
            eg.training(i, j) = v;
        }
    }

    eg.gram = assemble_gram(eg.training, eg.bandwidths, exec);

    Eigen::SelfAdjointEigenSolver<Matrix> solver(eg.gram);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("build_eigen_gram: eigendecomposition failed for columns " +
                                 column_list(columns));
    }
    // Eigen returns eigenvalues in increasing order; flip to non-increasing.
    const int last = n - 1;
    eg.eigenvalues.resize(n);
    eg.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        eg.eigenvalues(i) = solver.eigenvalues()(last - i);
        eg.eigenvectors.col(i) = solver.eigenvectors().col(last - i);
    }
    const double mu1 = std::max(eg.eigenvalues(0), 0.0);
    for (int i = 0; i < n; ++i) {
        if (eg.eigenvalues(i) < -1e-8 * mu1) {
            throw std::runtime_error(
                "build_eigen_gram: eigenvalue " + std::to_string(eg.eigenvalues(i)) +
                " below the negativity tolerance for columns " + column_list(columns));
        }
        if (eg.eigenvalues(i) < 0.0) eg.eigenvalues(i) = 0.0;
    }
    return eg;
}

EigenGram build_eigen_gram(const Dataset& data, const std::vector<int>& columns,
                           const KernelSpec& shared_spec, Execution exec) {
    return build_eigen_gram(data, columns, std::vector<KernelSpec>(columns.size(), shared_spec),
                            exec);
}

RidgeFit ridge_solve(const EigenGram& gram, const Vector& targets, double penalty) {
    if (targets.size() != gram.gram.rows()) {
        throw std::invalid_argument("ridge_solve: target length does not match Gram size");
    }
    if (!(penalty > 0.0)) throw std::invalid_argument("ridge_solve: penalty must be positive");
    const Vector w = gram.eigenvectors.transpose() * targets;
    const Vector scaled = w.array() / (gram.eigenvalues.array() + penalty);
    RidgeFit fit;
    fit.coefficients = gram.eigenvectors * scaled;
    fit.fitted = gram.eigenvectors * (gram.eigenvalues.array() * scaled.array()).matrix();
    fit.penalty = penalty;
    fit.predictor_columns = gram.predictor_columns;
    fit.bandwidths = gram.bandwidths;
    fit.training = gram.training;
    return fit;
}

double predict(const RidgeFit& fit, const Vector& query) {
    const int d = static_cast<int>(fit.training.cols());
    if (query.size() != d) {
        throw std::invalid_argument("predict: query has " + std::to_string(query.size()) +
                                    " values, expected " + std::to_string(d));
    }
    const int n = static_cast<int>(fit.training.rows());
    const double inv_n = 1.0 / static_cast<double>(n);
    double out = 0.0;
    for (int a = 0; a < n; ++a) {
        double k = 0.0;
        for (int j = 0; j < d; ++j) {
            const double diff = query(j) - fit.training(a, j);
            k += std::exp(-(diff * diff) / (2.0 * fit.bandwidths[static_cast<std::size_t>(j)]));
        }
        out += fit.coefficients(a) * k * inv_n;
    }
    return out;
}

}  // namespace camboost
