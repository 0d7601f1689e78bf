#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oksvm/dataset.hpp"
#include "oksvm/metrics.hpp"
#include "oksvm/optimizer.hpp"
#include "oksvm/solver.hpp"

namespace oksvm {

enum class Method { svm, oksvm };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);

/// Axes of a synthetic experiment grid.
struct GridSpec {
    std::vector<std::size_t> dims{2};
    std::vector<double> seps{0.6, 0.8, 1.0, 1.2, 1.4};
    std::vector<double> cs{0.5, 1.0, 1.5};
    std::vector<double> gammas{0.1, 0.5, 0.9, 1.3, 1.7, 2.1};
    std::size_t repetitions = 20;
    std::uint64_t base_seed = 0;
    double test_fraction = 0.5;
    std::size_t n_samples = 200;
    bool standardize = false;

    void validate() const;

    /// Full-size grid: dim 2..8 and 100 repetitions.
    static GridSpec full_scale();
};

/// C and gamma grids used for the real-data experiments.
std::vector<double> real_data_cs();
std::vector<double> real_data_gammas();

struct RunOptions {
    OksvmConfig oksvm;
    SolverConfig solver;
    std::size_t jobs = 1;
    /// Validation re-splits averaged per grid point during tuning.
    std::size_t tuning_runs = 10;
    double validation_fraction = 0.25;
    bool record_time = false;
};

/// One trained-and-evaluated model. (dataset, method, dim, sep, c, gamma0,
/// rep, fold) identifies the row within a run.
struct ResultRow {
    std::string dataset = "synthetic";
    Method method = Method::svm;
    std::size_t dim = 0;
    double sep = 0.0;
    double c = 0.0;
    double gamma0 = 0.0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    int fold = -1;
    MetricsRecord metrics;
    double final_gamma = 0.0;
    bool converged = true;
    std::string terminated_by;
    std::size_t outer_steps = 0;
    bool standardized = false;
    double wall_time = 0.0;
};

/// Dataset seed of a fixed-grid cell: mix_seed of (base, dim, bits(sep),
/// bits(c), gamma index, repetition).
std::uint64_t cell_seed(std::uint64_t base, std::size_t dim, double sep, double c, std::size_t gamma_index,
                        std::size_t rep);

/// Dataset seed of a tuned-grid repetition (no C / gamma coordinates).
std::uint64_t tuned_seed(std::uint64_t base, std::size_t dim, double sep, std::size_t rep);

/// Trains both methods with identical (C, gamma0) on the same split of each
/// generated dataset. Produces 2 * |dims| * |seps| * |cs| * |gammas| * R rows.
std::vector<ResultRow> run_fixed_grid(const GridSpec& spec, const RunOptions& options);

/// Per repetition: SVM picks (C, gamma) and OKSVM picks C by mean validation
/// F1 over options.tuning_runs validation re-splits; both are then refitted on
/// the full training part and tested. 2 * |dims| * |seps| * R rows.
std::vector<ResultRow> run_tuned_grid(const GridSpec& spec, const RunOptions& options);

struct CvSpec {
    std::string dataset_name = "dataset";
    std::vector<double> cs = real_data_cs();
    std::vector<double> gammas = real_data_gammas();
    std::size_t k = 5;
    std::uint64_t seed = 0;
    bool standardize = true;
};

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation over folds
};

struct CvMethodSummary {
    Method method = Method::svm;
    MeanStd acc, recall, precision, f1, auc;
};

struct CvReport {
    std::string dataset;
    std::size_t n_neg = 0;
    std::size_t n_pos = 0;
    std::vector<ResultRow> rows;  // one per (fold, method)
    std::vector<CvMethodSummary> summary;
};

/// Stratified k-fold evaluation. Inside each fold the hyperparameters are
/// tuned on a validation slice of the training part (SVM: C and gamma,
/// OKSVM: C), then the chosen model is refitted and tested on the held-out
/// fold.
CvReport run_real_cv(const Dataset& data, const CvSpec& spec, const RunOptions& options);

MeanStd mean_std(std::span<const double> values);

/// "0.900±0.032"
std::string format_mean_std(const MeanStd& value, int decimals = 3);

void write_cv_summary_csv(const CvReport& report, std::ostream& out);
void print_cv_table(const CvReport& report, std::ostream& out);

void write_rows_csv(std::span<const ResultRow> rows, std::ostream& out, bool with_time = false);
std::vector<ResultRow> read_rows_csv(std::istream& in);

enum class CellStat { mean, median, q1, q3 };
CellStat parse_cell_stat(std::string_view text);

/// Long-format aggregate: one line per distinct combination of `group_by`
/// axes (plus method for per-method values), sorted by those axes.
///
/// `value` is a metric (acc, precision, recall, f1, auc, final_gamma), or
/// f1_diff (100 * (mean F1 oksvm - mean F1 svm)) or wlr (wins-losses ratio of
/// paired per-repetition F1 differences). Paired values need every svm row to
/// have exactly one oksvm partner sharing the grouping axes, dataset, seed,
/// repetition and fold. Axes: dataset, dim, sep, c, gamma0, fold, method.
void emit_heatmap_csv(std::span<const ResultRow> rows, std::span<const std::string> group_by,
                      std::string_view value, std::ostream& out, CellStat stat = CellStat::mean);

/// Runs task(i) for i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task);

}  // namespace oksvm
