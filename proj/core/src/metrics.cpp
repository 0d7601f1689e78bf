#include "oksvm/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "oksvm/error.hpp"
#include "oksvm/solver.hpp"

namespace oksvm {

Confusion confusion(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw ConfigError("truth and prediction lengths differ");
    Confusion c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual = truth[i] == 1;
        const bool guess = predicted[i] == 1;
        if (actual && guess) ++c.tp;
        else if (!actual && guess) ++c.fp;
        else if (!actual) ++c.tn;
        else ++c.fn;
    }
    return c;
}

MetricsRecord basic_metrics(const Confusion& counts) {
    if (counts.total() == 0) throw ConfigError("metrics of an empty evaluation");
    auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    MetricsRecord m;
    m.counts = counts;
    m.acc = ratio(counts.tp + counts.tn, counts.total());
    m.precision = ratio(counts.tp, counts.tp + counts.fp);
    m.recall = ratio(counts.tp, counts.tp + counts.fn);
    const double den = m.precision + m.recall;
    m.f1 = den > 0.0 ? 2.0 * m.precision * m.recall / den : 0.0;
    m.auc = std::numeric_limits<double>::quiet_NaN();
    return m;
}

double auc(std::span<const int> truth, std::span<const double> scores) {
    if (truth.size() != scores.size()) throw ConfigError("truth and score lengths differ");
    const std::size_t n = truth.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

    // Midranks (1-based) over tied groups, then U = R_pos - n_pos (n_pos + 1) / 2.
    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t start = 0; start < n;) {
        std::size_t end = start;
        while (end < n && scores[order[end]] == scores[order[start]]) ++end;
        const double midrank = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t r = start; r < end; ++r)
            if (truth[order[r]] == 1) {
                rank_sum_pos += midrank;
                ++n_pos;
            }
        start = end;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DataError("AUC needs both classes in the truth vector");
    const double np = static_cast<double>(n_pos);
    const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

MetricsRecord evaluate_scores(std::span<const int> truth, std::span<const double> scores) {
    std::vector<int> predicted(scores.size());
    std::transform(scores.begin(), scores.end(), predicted.begin(), sign_label);
    auto m = basic_metrics(confusion(truth, predicted));
    m.auc = auc(truth, scores);
    return m;
}

double f1_diff(double f1_oksvm, double f1_svm) noexcept { return 100.0 * (f1_oksvm - f1_svm); }

int win_loss(double diff) noexcept { return diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0); }

double wins_losses_ratio(std::span<const double> f1_diffs) {
    if (f1_diffs.empty()) throw ConfigError("wins-losses ratio of an empty list");
    long sum = 0;
    for (double d : f1_diffs) sum += win_loss(d);
    return 100.0 * static_cast<double>(sum) / static_cast<double>(f1_diffs.size());
}

}  // namespace oksvm
