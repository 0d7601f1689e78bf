#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "oksvm/dataset.hpp"

namespace oksvm {

/// Symmetric matrix of pairwise squared Euclidean distances with an exactly
/// zero diagonal and nonnegative entries.
class DistanceMatrix {
public:
    /// Takes ownership of a precomputed matrix; throws ConfigError unless it is
    /// square, symmetric, nonnegative and zero on the diagonal.
    explicit DistanceMatrix(Matrix d2);

    const Matrix& values() const noexcept { return d2_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(d2_.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return d2_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

private:
    struct Trusted {};
    DistanceMatrix(Matrix d2, Trusted) : d2_(std::move(d2)) {}
    friend DistanceMatrix squared_distance_matrix(const Matrix& features);

    Matrix d2_;
};

/// d2[i][j] = sum_c (x_i[c] - x_j[c])^2, computed once per unordered pair and
/// mirrored; negative round-off is clamped to 0.
DistanceMatrix squared_distance_matrix(const Matrix& features);

/// Squared distances between every row of `rows` and every row of `cols`
/// (rows.rows() x cols.rows()).
Matrix cross_squared_distances(const Matrix& rows, const Matrix& cols);

enum class GammaCheck { strict, allow_zero };

/// RBF kernel matrix exp(-gamma * d2) tied to the distances it was built from.
/// Moving to another gamma reuses the distances and recomputes only the
/// elementwise exponential.
class KernelCache {
public:
    double gamma() const noexcept { return gamma_; }
    const Matrix& values() const noexcept { return k_; }
    const DistanceMatrix& distances() const noexcept { return *d2_; }
    const std::shared_ptr<const DistanceMatrix>& shared_distances() const noexcept { return d2_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(k_.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return k_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    KernelCache with_gamma(double gamma, GammaCheck check = GammaCheck::strict) const;

private:
    KernelCache(std::shared_ptr<const DistanceMatrix> d2, double gamma, Matrix k)
        : d2_(std::move(d2)), gamma_(gamma), k_(std::move(k)) {}
    friend KernelCache rbf_kernel_matrix(std::shared_ptr<const DistanceMatrix>, double, GammaCheck);

    std::shared_ptr<const DistanceMatrix> d2_;
    double gamma_;
    Matrix k_;
};

/// Throws ConfigError for gamma <= 0 (gamma == 0 is accepted with allow_zero).
KernelCache rbf_kernel_matrix(std::shared_ptr<const DistanceMatrix> d2, double gamma,
                              GammaCheck check = GammaCheck::strict);

/// Elementwise exp(-gamma * d2) over one row of distances.
std::vector<double> rbf_kernel_row(std::span<const double> d2_row, double gamma);

}  // namespace oksvm
