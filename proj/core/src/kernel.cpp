#include "oksvm/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "oksvm/error.hpp"

namespace oksvm {

DistanceMatrix::DistanceMatrix(Matrix d2) : d2_(std::move(d2)) {
    if (d2_.rows() != d2_.cols()) throw ConfigError("distance matrix must be square");
    for (Eigen::Index i = 0; i < d2_.rows(); ++i) {
        if (d2_(i, i) != 0.0) throw ConfigError("distance matrix diagonal must be zero");
        for (Eigen::Index j = 0; j < i; ++j) {
            if (d2_(i, j) != d2_(j, i)) throw ConfigError("distance matrix must be symmetric");
            if (!(d2_(i, j) >= 0.0)) throw ConfigError("distance matrix entries must be nonnegative");
        }
    }
}

DistanceMatrix squared_distance_matrix(const Matrix& features) {
    const auto n = features.rows();
    Matrix d2 = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = std::max(0.0, (features.row(i) - features.row(j)).squaredNorm());
            d2(i, j) = v;
            d2(j, i) = v;
        }
    }
    return DistanceMatrix(std::move(d2), DistanceMatrix::Trusted{});
}

Matrix cross_squared_distances(const Matrix& rows, const Matrix& cols) {
    if (rows.cols() != cols.cols()) throw ConfigError("feature dimension mismatch");
    Matrix out(rows.rows(), cols.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
        for (Eigen::Index j = 0; j < cols.rows(); ++j)
            out(i, j) = std::max(0.0, (rows.row(i) - cols.row(j)).squaredNorm());
    return out;
}

namespace {

void check_gamma(double gamma, GammaCheck check) {
    const bool ok = check == GammaCheck::allow_zero ? gamma >= 0.0 : gamma > 0.0;
    if (!ok || !std::isfinite(gamma)) throw ConfigError("RBF gamma must be positive and finite");
}

}  // namespace

KernelCache rbf_kernel_matrix(std::shared_ptr<const DistanceMatrix> d2, double gamma, GammaCheck check) {
    if (!d2) throw ConfigError("null distance matrix");
    check_gamma(gamma, check);
    // std::exp rather than Eigen's vectorised exp so that kernel rows built
    // for test points agree bit-for-bit with the cached matrix.
    Matrix k = d2->values().unaryExpr([gamma](double d) { return std::exp(-gamma * d); });
    return KernelCache(std::move(d2), gamma, std::move(k));
}

KernelCache KernelCache::with_gamma(double gamma, GammaCheck check) const {
    return rbf_kernel_matrix(d2_, gamma, check);
}

std::vector<double> rbf_kernel_row(std::span<const double> d2_row, double gamma) {
    std::vector<double> out(d2_row.size());
    std::transform(d2_row.begin(), d2_row.end(), out.begin(),
                   [gamma](double d) { return std::exp(-gamma * d); });
    return out;
}

}  // namespace oksvm
