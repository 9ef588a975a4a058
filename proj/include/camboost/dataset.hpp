#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace camboost {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Immutable N x p sample matrix with column names ("x1".."xp" by default).
// Centering produces a new Dataset and records the subtracted means so the
// operation is traceable and idempotent.
class Dataset {
public:
    Dataset() = default;
    Dataset(Matrix values, std::vector<std::string> column_names);
    static Dataset from_matrix(Matrix values);
    static std::vector<std::string> default_names(int p);

    int rows() const { return static_cast<int>(values_.rows()); }
    int cols() const { return static_cast<int>(values_.cols()); }
    const Matrix& values() const { return values_; }
    Vector column(int j) const { return values_.col(j); }
    const std::vector<std::string>& column_names() const { return names_; }

    bool is_centered() const { return centered_; }
    const Vector& column_means() const { return means_; }
    // Per-column divisors applied by centered(true); empty when never scaled.
    const Vector& column_scales() const { return scales_; }

    // Subtract column means; optionally scale each column to unit variance.
    // Centering an already-centered dataset returns *this unchanged; repeated
    // scaling composes (and is a no-op once columns have unit variance).
    Dataset centered(bool scale = false) const;

    // Throws std::invalid_argument if any entry is non-finite.
    void require_finite() const;

private:
    Matrix values_;
    std::vector<std::string> names_;
    bool centered_ = false;
    Vector means_;
    Vector scales_;
};

}  // namespace camboost
