#pragma once

#include <cstddef>
#include <span>

namespace oksvm {

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Test-set measures. Zero denominators give 0 for precision, recall and F1.
/// `auc` is NaN until filled from scores.
struct MetricsRecord {
    double acc = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
    Confusion counts;
};

/// +1 is the positive class. Throws ConfigError on a length mismatch.
Confusion confusion(std::span<const int> truth, std::span<const int> predicted);

MetricsRecord basic_metrics(const Confusion& counts);

/// Mann-Whitney estimate of the ROC area: the fraction of (positive, negative)
/// pairs ranked correctly, ties counting one half. Throws DataError if either
/// class is absent.
double auc(std::span<const int> truth, std::span<const double> scores);

/// Confusion-based measures from sign(scores) (0 maps to +1) plus AUC from the
/// raw scores.
MetricsRecord evaluate_scores(std::span<const int> truth, std::span<const double> scores);

/// 100 * (f1_oksvm - f1_svm)
double f1_diff(double f1_oksvm, double f1_svm) noexcept;

/// +1 for a positive difference, -1 for a negative one, 0 for a draw.
int win_loss(double diff) noexcept;

/// 100 * mean(win_loss(diff)) over paired runs. Throws ConfigError when empty.
double wins_losses_ratio(std::span<const double> f1_diffs);

}  // namespace oksvm
