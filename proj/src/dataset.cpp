#include "camboost/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace camboost {

Dataset::Dataset(Matrix values, std::vector<std::string> column_names)
    : values_(std::move(values)), names_(std::move(column_names)) {
    if (static_cast<int>(names_.size()) != values_.cols()) {
        throw std::invalid_argument("Dataset: column name count does not match column count");
    }
}

Dataset Dataset::from_matrix(Matrix values) {
    const int p = static_cast<int>(values.cols());
    return Dataset(std::move(values), default_names(p));
}

std::vector<std::string> Dataset::default_names(int p) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
    return names;
}

Dataset Dataset::centered(bool scale) const {
    if (centered_ && !scale) return *this;
    Dataset out = *this;
    const int n = rows();
    if (n == 0) return out;
    Vector means = values_.colwise().mean();
    out.values_ = values_.rowwise() - means.transpose();
    if (scale) {
        Vector sds = Vector::Ones(cols());
        for (int j = 0; j < cols(); ++j) {
            double sd = std::sqrt(out.values_.col(j).squaredNorm() / n);
            if (sd > 0.0) {
                out.values_.col(j) /= sd;
                sds(j) = sd;
            }
        }
        out.scales_ = scales_.size() > 0 ? Vector(scales_.cwiseProduct(sds)) : sds;
    }
    out.centered_ = true;
    out.means_ = centered_ ? Vector(means_) : means;
    return out;
}

void Dataset::require_finite() const {
    for (int j = 0; j < cols(); ++j) {
        for (int i = 0; i < rows(); ++i) {
            if (!std::isfinite(values_(i, j))) {
                throw std::invalid_argument("Dataset: non-finite value in column " + names_[j] +
                                            " at row " + std::to_string(i + 1));
            }
        }
    }
}

}  // namespace camboost
