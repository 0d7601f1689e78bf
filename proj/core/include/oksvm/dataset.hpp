#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace oksvm {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Binary classification data: an N x n feature matrix and N labels in {-1, +1}.
///
/// Immutable once constructed. The constructor enforces the invariants
/// (matching sizes, labels exactly +-1, N >= 2, n >= 1) and throws DataError.
class Dataset {
public:
    Dataset(Matrix features, std::vector<int> labels);

    const Matrix& features() const noexcept { return features_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(features_.cols()); }
    std::size_t count(int label) const noexcept;

    /// Rows at the given indices, in the given order.
    Dataset subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const Dataset& a, const Dataset& b);

private:
    Matrix features_;
    std::vector<int> labels_;
};

struct SyntheticConfig {
    std::size_t n_samples = 200;
    std::size_t dim = 2;
    double sep = 1.0;
    std::uint64_t seed = 0;

    static constexpr std::size_t max_dim = 64;
    void validate() const;
};

/// Two isotropic unit-variance Gaussian clusters centred at +sep*u (label +1)
/// and -sep*u (label -1), where u has every coordinate 1/sqrt(dim). The
/// centres are 2*sep apart in any dimension. Classes are exactly balanced and
/// the rows are shuffled; the result is a pure function of the config.
Dataset generate_synthetic(const SyntheticConfig& config);

/// Ingestion options for delimited text files.
struct CsvOptions {
    std::string label_column = "label";
    /// Label cells equal to this string map to +1, everything else to -1.
    std::string positive_label = "1";
    /// When non-empty, rows whose label is not listed are dropped first
    /// (e.g. iris restricted to versicolor/virginica).
    std::vector<std::string> keep_labels;
    /// When set, labels are parsed as numbers and value > threshold maps to +1
    /// (e.g. wine quality "<= 5" vs "> 5"). Overrides positive_label.
    std::optional<double> label_threshold;
    /// Non-feature columns to ignore (identifiers).
    std::vector<std::string> drop_columns;
    char delimiter = ',';
};

/// Reads a header-first delimited file. Every non-label, non-dropped column
/// must parse as a finite real. Throws DataError on a missing label column, a
/// non-numeric feature cell, or fewer than two classes after mapping.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);
Dataset load_csv(std::istream& in, const CsvOptions& options);
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::string& positive_label);

/// Writes columns x0..x{n-1},label with 17 significant digits; load_csv with
/// default options reads it back exactly.
void write_csv(const Dataset& data, std::ostream& out);

struct TrainTestSplit {
    Dataset train;
    Dataset test;
};

/// Random split with round(fraction * count) test samples, per class when
/// stratified. Both parts keep the original row order.
TrainTestSplit split_train_test(const Dataset& data, double test_fraction, bool stratified,
                                std::uint64_t seed);

struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::vector<std::size_t>> indices;  // ascending within each fold
};

/// Each class is shuffled and dealt round-robin over the folds, continuing
/// from the fold where the previous class stopped, so fold sizes differ by at
/// most one and per-fold class counts by at most one.
FoldAssignment stratified_kfold(const Dataset& data, std::size_t k, std::uint64_t seed);

/// Column-wise z-score map fitted on one dataset. Population standard
/// deviation; zero-variance columns are passed through unchanged.
class Standardizer {
public:
    static Standardizer fit(const Dataset& train);

    Matrix apply(const Matrix& features) const;
    Dataset apply(const Dataset& data) const;

    const Vector& mean() const noexcept { return mean_; }
    const Vector& scale() const noexcept { return scale_; }
    /// False for columns left untouched because their variance is zero.
    const std::vector<bool>& active() const noexcept { return active_; }

private:
    Vector mean_;
    Vector scale_;
    std::vector<bool> active_;
};

struct Standardized {
    Dataset train;
    std::vector<Dataset> others;
};

Standardized standardize(const Dataset& train, std::span<const Dataset> others);

}  // namespace oksvm
