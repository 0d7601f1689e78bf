#include "oksvm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>
#include <variant>

#include "oksvm/error.hpp"
#include "oksvm/rng.hpp"
#include "text_format.hpp"

namespace oksvm {

std::string_view to_string(Method method) noexcept { return method == Method::svm ? "svm" : "oksvm"; }

Method parse_method(std::string_view text) {
    if (text == "svm") return Method::svm;
    if (text == "oksvm") return Method::oksvm;
    throw ConfigError("unknown method '" + std::string(text) + "' (expected svm or oksvm)");
}

void GridSpec::validate() const {
    if (dims.empty() || seps.empty() || cs.empty() || gammas.empty())
        throw ConfigError("grid axes must be nonempty");
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    for (auto d : dims)
        if (d < 1 || d > SyntheticConfig::max_dim) throw ConfigError("grid dim out of range");
    for (auto s : seps)
        if (!(s >= 0.0)) throw ConfigError("grid sep must be nonnegative");
    for (auto c : cs)
        if (!(c > 0.0)) throw ConfigError("grid C must be positive");
    for (auto g : gammas)
        if (!(g > 0.0)) throw ConfigError("grid gamma must be positive");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("test_fraction must lie in (0, 1)");
    if (n_samples < 4 || n_samples % 2 != 0) throw ConfigError("n_samples must be even and at least 4");
}

GridSpec GridSpec::full_scale() {
    GridSpec spec;
    spec.dims = {2, 3, 4, 5, 6, 7, 8};
    spec.repetitions = 100;
    return spec;
}

std::vector<double> real_data_cs() { return {0.1, 0.4, 0.7, 1.0, 1.3, 1.6, 1.9}; }
std::vector<double> real_data_gammas() { return {0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 1.5}; }

std::uint64_t cell_seed(std::uint64_t base, std::size_t dim, double sep, double c, std::size_t gamma_index,
                        std::size_t rep) {
    return mix_seed({base, dim, seed_bits(sep), seed_bits(c), gamma_index, rep});
}

std::uint64_t tuned_seed(std::uint64_t base, std::size_t dim, double sep, std::size_t rep) {
    constexpr std::uint64_t kTunedTag = 0x74756e6564ULL;  // "tuned"
    return mix_seed({base, kTunedTag, dim, seed_bits(sep), rep});
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load()) {
            const auto i = next.fetch_add(1);
            if (i >= count) break;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Fitted {
    SvmModel model;
    double final_gamma = 0.0;
    bool converged = true;
    std::string terminated_by;
    std::size_t outer_steps = 0;
};

Fitted fit(Method method, const Dataset& train, double c, double gamma0, const RunOptions& options) {
    if (method == Method::svm) {
        auto model = train_svm_baseline(train, c, gamma0, options.solver);
        const bool converged = model.converged;
        return {std::move(model), gamma0, converged, "", 0};
    }
    auto config = options.oksvm;
    config.gamma0 = gamma0;
    auto result = train_oksvm(train, c, config, options.solver);
    const double final_gamma = result.state.gamma_t;
    const std::string reason(result.state.terminated_by ? to_string(*result.state.terminated_by) : "");
    return {std::move(result.model), final_gamma, result.state.all_solves_converged, reason, result.state.t};
}

MetricsRecord score(const SvmModel& model, const Dataset& test) {
    const auto scores = decision_values(model, test.features());
    return evaluate_scores(test.labels(), scores);
}

// Fits on `train`, evaluates on `test` and fills the method-dependent fields.
ResultRow fit_and_evaluate(ResultRow row, const Dataset& train, const Dataset& test, const RunOptions& options) {
    const auto start = Clock::now();
    auto fitted = fit(row.method, train, row.c, row.gamma0, options);
    row.metrics = score(fitted.model, test);
    const auto stop = Clock::now();
    row.final_gamma = fitted.final_gamma;
    row.converged = fitted.converged;
    row.terminated_by = std::move(fitted.terminated_by);
    row.outer_steps = fitted.outer_steps;
    row.wall_time = options.record_time ? std::chrono::duration<double>(stop - start).count() : 0.0;
    return row;
}

struct Prepared {
    Dataset train;
    Dataset test;
};

Prepared maybe_standardize(TrainTestSplit split, bool enabled) {
    if (!enabled) return {std::move(split.train), std::move(split.test)};
    const auto map = Standardizer::fit(split.train);
    return {map.apply(split.train), map.apply(split.test)};
}

std::vector<double> sorted_copy(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

struct Choice {
    double c = 0.0;
    double gamma = 0.0;
};

// Grid search by mean validation F1. Candidates are visited in ascending
// (C, gamma) order and only a strictly better score replaces the incumbent,
// so ties resolve to the smallest pair.
Choice tune(Method method, const Dataset& train, std::span<const double> cs, std::span<const double> gammas,
            std::uint64_t seed, const RunOptions& options) {
    std::vector<TrainTestSplit> splits;
    splits.reserve(options.tuning_runs);
    for (std::size_t t = 0; t < options.tuning_runs; ++t)
        splits.push_back(split_train_test(train, options.validation_fraction, true, mix_seed({seed, 0x7475ULL, t})));

    Choice best;
    double best_f1 = -1.0;
    for (double c : cs) {
        for (double gamma : gammas) {
            double sum = 0.0;
            for (const auto& split : splits) {
                const auto fitted = fit(method, split.train, c, gamma, options);
                sum += score(fitted.model, split.test).f1;
            }
            const double mean = sum / static_cast<double>(splits.size());
            if (mean > best_f1) {
                best_f1 = mean;
                best = {c, gamma};
            }
        }
    }
    return best;
}

}  // namespace

std::vector<ResultRow> run_fixed_grid(const GridSpec& spec, const RunOptions& options) {
    spec.validate();
    options.oksvm.validate();
    options.solver.validate();

    struct Cell {
        std::size_t dim;
        double sep;
        double c;
        std::size_t gamma_index;
        std::size_t rep;
    };
    std::vector<Cell> cells;
    for (auto dim : spec.dims)
        for (auto sep : spec.seps)
            for (auto c : spec.cs)
                for (std::size_t g = 0; g < spec.gammas.size(); ++g)
                    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) cells.push_back({dim, sep, c, g, rep});

    std::vector<ResultRow> rows(2 * cells.size());
    parallel_for(cells.size(), options.jobs, [&](std::size_t index) {
        const auto& cell = cells[index];
        const auto seed = cell_seed(spec.base_seed, cell.dim, cell.sep, cell.c, cell.gamma_index, cell.rep);
        const auto data = generate_synthetic({spec.n_samples, cell.dim, cell.sep, seed});
        const auto prepared =
            maybe_standardize(split_train_test(data, spec.test_fraction, true, mix_seed({seed, 1})), spec.standardize);

        ResultRow base;
        base.dim = cell.dim;
        base.sep = cell.sep;
        base.c = cell.c;
        base.gamma0 = spec.gammas[cell.gamma_index];
        base.rep = cell.rep;
        base.seed = seed;
        base.standardized = spec.standardize;
        for (auto method : {Method::svm, Method::oksvm}) {
            base.method = method;
            rows[2 * index + (method == Method::svm ? 0 : 1)] =
                fit_and_evaluate(base, prepared.train, prepared.test, options);
        }
    });
    return rows;
}

std::vector<ResultRow> run_tuned_grid(const GridSpec& spec, const RunOptions& options) {
    spec.validate();
    options.oksvm.validate();
    options.solver.validate();
    if (options.tuning_runs < 1) throw ConfigError("tuning_runs must be at least 1");

    struct Cell {
        std::size_t dim;
        double sep;
        std::size_t rep;
    };
    std::vector<Cell> cells;
    for (auto dim : spec.dims)
        for (auto sep : spec.seps)
            for (std::size_t rep = 0; rep < spec.repetitions; ++rep) cells.push_back({dim, sep, rep});

    const auto cs = sorted_copy(spec.cs);
    const auto gammas = sorted_copy(spec.gammas);
    const std::vector<double> oksvm_gamma0{options.oksvm.gamma0};

    std::vector<ResultRow> rows(2 * cells.size());
    parallel_for(cells.size(), options.jobs, [&](std::size_t index) {
        const auto& cell = cells[index];
        const auto seed = tuned_seed(spec.base_seed, cell.dim, cell.sep, cell.rep);
        const auto data = generate_synthetic({spec.n_samples, cell.dim, cell.sep, seed});
        const auto prepared =
            maybe_standardize(split_train_test(data, spec.test_fraction, true, mix_seed({seed, 1})), spec.standardize);

        ResultRow base;
        base.dim = cell.dim;
        base.sep = cell.sep;
        base.rep = cell.rep;
        base.seed = seed;
        base.standardized = spec.standardize;
        for (auto method : {Method::svm, Method::oksvm}) {
            const auto choice = method == Method::svm
                                    ? tune(method, prepared.train, cs, gammas, seed, options)
                                    : tune(method, prepared.train, cs, oksvm_gamma0, seed, options);
            base.method = method;
            base.c = choice.c;
            base.gamma0 = choice.gamma;
            rows[2 * index + (method == Method::svm ? 0 : 1)] =
                fit_and_evaluate(base, prepared.train, prepared.test, options);
        }
    });
    return rows;
}

MeanStd mean_std(std::span<const double> values) {
    if (values.empty()) return {};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

std::string format_mean_std(const MeanStd& value, int decimals) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::fixed << std::setprecision(decimals) << value.mean << "±" << value.std;
    return out.str();
}

CvReport run_real_cv(const Dataset& data, const CvSpec& spec, const RunOptions& options) {
    options.oksvm.validate();
    options.solver.validate();
    if (spec.cs.empty() || spec.gammas.empty()) throw ConfigError("C and gamma grids must be nonempty");
    if (options.tuning_runs < 1) throw ConfigError("tuning_runs must be at least 1");

    const auto folds = stratified_kfold(data, spec.k, spec.seed);
    const auto cs = sorted_copy(spec.cs);
    const auto gammas = sorted_copy(spec.gammas);
    const std::vector<double> oksvm_gamma0{options.oksvm.gamma0};

    CvReport report;
    report.dataset = spec.dataset_name;
    report.n_neg = data.count(-1);
    report.n_pos = data.count(1);
    report.rows.resize(2 * spec.k);

    parallel_for(spec.k, options.jobs, [&](std::size_t f) {
        std::vector<std::size_t> train_idx;
        for (std::size_t g = 0; g < spec.k; ++g)
            if (g != f) train_idx.insert(train_idx.end(), folds.indices[g].begin(), folds.indices[g].end());
        std::sort(train_idx.begin(), train_idx.end());
        TrainTestSplit split{data.subset(train_idx), data.subset(folds.indices[f])};
        const auto prepared = maybe_standardize(std::move(split), spec.standardize);
        const auto fold_seed = mix_seed({spec.seed, 0x666f6c64ULL, f});

        ResultRow base;
        base.dataset = spec.dataset_name;
        base.dim = data.dim();
        base.fold = static_cast<int>(f);
        base.seed = spec.seed;
        base.standardized = spec.standardize;
        for (auto method : {Method::svm, Method::oksvm}) {
            const auto choice = method == Method::svm
                                    ? tune(method, prepared.train, cs, gammas, fold_seed, options)
                                    : tune(method, prepared.train, cs, oksvm_gamma0, fold_seed, options);
            base.method = method;
            base.c = choice.c;
            base.gamma0 = choice.gamma;
            report.rows[2 * f + (method == Method::svm ? 0 : 1)] =
                fit_and_evaluate(base, prepared.train, prepared.test, options);
        }
    });

    for (auto method : {Method::svm, Method::oksvm}) {
        std::vector<double> acc, rc, pr, f1, auc_values;
        for (const auto& row : report.rows) {
            if (row.method != method) continue;
            acc.push_back(row.metrics.acc);
            rc.push_back(row.metrics.recall);
            pr.push_back(row.metrics.precision);
            f1.push_back(row.metrics.f1);
            auc_values.push_back(row.metrics.auc);
        }
        report.summary.push_back({method, mean_std(acc), mean_std(rc), mean_std(pr), mean_std(f1), mean_std(auc_values)});
    }
    return report;
}

void write_cv_summary_csv(const CvReport& report, std::ostream& out) {
    out << "dataset,n_neg,n_pos,method,metric,mean,std,formatted\n";
    for (const auto& s : report.summary) {
        const std::pair<const char*, const MeanStd*> metrics[] = {
            {"acc", &s.acc}, {"rc", &s.recall}, {"pr", &s.precision}, {"f1", &s.f1}, {"auc", &s.auc}};
        for (const auto& [name, value] : metrics) {
            out << report.dataset << ',' << report.n_neg << ',' << report.n_pos << ',' << to_string(s.method) << ','
                << name << ',' << detail::format_shortest(value->mean) << ',' << detail::format_shortest(value->std)
                << ',' << format_mean_std(*value) << '\n';
        }
    }
}

void print_cv_table(const CvReport& report, std::ostream& out) {
    out << report.dataset << "  (N- = " << report.n_neg << ", N+ = " << report.n_pos << ")\n";
    out << "method  Acc          RC           PR           F1           AUC\n";
    for (const auto& s : report.summary) {
        out << std::left << std::setw(8) << to_string(s.method) << format_mean_std(s.acc) << "  "
            << format_mean_std(s.recall) << "  " << format_mean_std(s.precision) << "  " << format_mean_std(s.f1)
            << "  " << format_mean_std(s.auc) << '\n';
    }
}

// ---------------------------------------------------------------------------
// result tables

namespace {

const std::vector<std::string>& row_columns() {
    static const std::vector<std::string> columns{
        "dataset", "method", "dim", "sep", "c", "gamma0", "rep", "seed", "fold", "acc", "precision", "recall",
        "f1", "auc", "tp", "fp", "tn", "fn", "final_gamma", "converged", "terminated_by", "outer_steps",
        "standardized"};
    return columns;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

double cell_real(const std::string& text) {
    auto v = detail::parse_double(text);
    if (!v) throw DataError("result table: '" + text + "' is not a number");
    return *v;
}

std::uint64_t cell_u64(const std::string& text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw DataError("result table: '" + text + "' is not an unsigned integer");
    return v;
}

}  // namespace

void write_rows_csv(std::span<const ResultRow> rows, std::ostream& out, bool with_time) {
    using detail::format_shortest;
    const auto& columns = row_columns();
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    if (with_time) out << ",wall_time";
    out << '\n';
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        out << r.dataset << ',' << to_string(r.method) << ',' << r.dim << ',' << format_shortest(r.sep) << ','
            << format_shortest(r.c) << ',' << format_shortest(r.gamma0) << ',' << r.rep << ',' << r.seed << ','
            << r.fold << ',' << format_shortest(m.acc) << ',' << format_shortest(m.precision) << ','
            << format_shortest(m.recall) << ',' << format_shortest(m.f1) << ',' << format_shortest(m.auc) << ','
            << m.counts.tp << ',' << m.counts.fp << ',' << m.counts.tn << ',' << m.counts.fn << ','
            << format_shortest(r.final_gamma) << ',' << (r.converged ? 1 : 0) << ',' << r.terminated_by << ','
            << r.outer_steps << ',' << (r.standardized ? 1 : 0);
        if (with_time) out << ',' << format_shortest(r.wall_time);
        out << '\n';
    }
}

std::vector<ResultRow> read_rows_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("result table is empty");
    const auto header = split_csv(line);
    std::map<std::string, std::size_t> at;
    for (std::size_t i = 0; i < header.size(); ++i) at[header[i]] = i;
    for (const auto& name : row_columns())
        if (!at.count(name)) throw DataError("result table: missing column '" + name + "'");
    const bool has_time = at.count("wall_time") > 0;

    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) throw DataError("result table: ragged row");
        auto get = [&](const char* name) -> const std::string& { return cells[at.at(name)]; };
        ResultRow r;
        r.dataset = get("dataset");
        r.method = parse_method(get("method"));
        r.dim = cell_u64(get("dim"));
        r.sep = cell_real(get("sep"));
        r.c = cell_real(get("c"));
        r.gamma0 = cell_real(get("gamma0"));
        r.rep = cell_u64(get("rep"));
        r.seed = cell_u64(get("seed"));
        r.fold = static_cast<int>(cell_real(get("fold")));
        r.metrics.acc = cell_real(get("acc"));
        r.metrics.precision = cell_real(get("precision"));
        r.metrics.recall = cell_real(get("recall"));
        r.metrics.f1 = cell_real(get("f1"));
        r.metrics.auc = cell_real(get("auc"));
        r.metrics.counts = {cell_u64(get("tp")), cell_u64(get("fp")), cell_u64(get("tn")), cell_u64(get("fn"))};
        r.final_gamma = cell_real(get("final_gamma"));
        r.converged = cell_u64(get("converged")) != 0;
        r.terminated_by = get("terminated_by");
        r.outer_steps = cell_u64(get("outer_steps"));
        r.standardized = cell_u64(get("standardized")) != 0;
        if (has_time) r.wall_time = cell_real(get("wall_time"));
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// heatmap aggregation

CellStat parse_cell_stat(std::string_view text) {
    if (text == "mean") return CellStat::mean;
    if (text == "median") return CellStat::median;
    if (text == "q1") return CellStat::q1;
    if (text == "q3") return CellStat::q3;
    throw ConfigError("unknown statistic '" + std::string(text) + "' (mean, median, q1, q3)");
}

namespace {

using KeyPart = std::variant<double, std::string>;
using Key = std::vector<KeyPart>;

KeyPart axis_value(const ResultRow& r, const std::string& axis) {
    if (axis == "dataset") return r.dataset;
    if (axis == "method") return std::string(to_string(r.method));
    if (axis == "dim") return static_cast<double>(r.dim);
    if (axis == "sep") return r.sep;
    if (axis == "c") return r.c;
    if (axis == "gamma0") return r.gamma0;
    if (axis == "fold") return static_cast<double>(r.fold);
    throw ConfigError("unknown grouping axis '" + axis + "' (dataset, dim, sep, c, gamma0, fold, method)");
}

double metric_value(const ResultRow& r, std::string_view name) {
    if (name == "acc") return r.metrics.acc;
    if (name == "precision") return r.metrics.precision;
    if (name == "recall") return r.metrics.recall;
    if (name == "f1") return r.metrics.f1;
    if (name == "auc") return r.metrics.auc;
    if (name == "final_gamma") return r.final_gamma;
    throw ConfigError("unknown value '" + std::string(name) +
                      "' (acc, precision, recall, f1, auc, final_gamma, f1_diff, wlr)");
}

// Linear-interpolation quantile of a sorted sample.
double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double reduce(const std::vector<double>& v, CellStat stat) {
    switch (stat) {
        case CellStat::mean: return mean_std(v).mean;
        case CellStat::median: return quantile(v, 0.5);
        case CellStat::q1: return quantile(v, 0.25);
        case CellStat::q3: return quantile(v, 0.75);
    }
    return 0.0;
}

void write_key(const Key& key, std::ostream& out) {
    for (const auto& part : key) {
        if (const auto* d = std::get_if<double>(&part)) out << detail::format_shortest(*d) << ',';
        else out << std::get<std::string>(part) << ',';
    }
}

}  // namespace

void emit_heatmap_csv(std::span<const ResultRow> rows, std::span<const std::string> group_by, std::string_view value,
                      std::ostream& out, CellStat stat) {
    if (rows.empty()) throw DataError("no result rows to aggregate");
    const bool paired = value == "f1_diff" || value == "wlr";
    if (!paired) metric_value(rows.front(), value);  // validates the name
    if (paired && stat != CellStat::mean) throw ConfigError("paired values support only the mean statistic");

    std::vector<std::string> axes(group_by.begin(), group_by.end());
    const bool method_axis = std::find(axes.begin(), axes.end(), "method") != axes.end();
    if (paired && method_axis) throw ConfigError("paired values cannot be grouped by method");
    if (!paired && !method_axis) axes.emplace_back("method");
    for (const auto& axis : axes) axis_value(rows.front(), axis);

    auto key_of = [&](const ResultRow& r) {
        Key key;
        for (const auto& axis : axes) key.push_back(axis_value(r, axis));
        return key;
    };

    for (const auto& axis : axes) out << axis << ',';
    out << value << '\n';

    if (!paired) {
        std::map<Key, std::vector<double>> cells;
        for (const auto& r : rows) cells[key_of(r)].push_back(metric_value(r, value));
        for (const auto& [key, values] : cells) {
            write_key(key, out);
            out << detail::format_shortest(reduce(values, stat)) << '\n';
        }
        return;
    }

    using PairKey = std::tuple<std::string, std::uint64_t, std::size_t, int>;
    struct Pair {
        const ResultRow* svm = nullptr;
        const ResultRow* oksvm = nullptr;
    };
    std::map<Key, std::map<PairKey, Pair>> cells;
    for (const auto& r : rows) {
        auto& slot = cells[key_of(r)][PairKey{r.dataset, r.seed, r.rep, r.fold}];
        auto& ptr = r.method == Method::svm ? slot.svm : slot.oksvm;
        if (ptr) throw DataError("duplicate row for one paired run");
        ptr = &r;
    }
    for (const auto& [key, pairs] : cells) {
        std::vector<double> diffs;
        double sum_ok = 0.0;
        double sum_svm = 0.0;
        for (const auto& [pair_key, pair] : pairs) {
            if (!pair.svm || !pair.oksvm) throw DataError("unpaired result row under the requested grouping");
            diffs.push_back(f1_diff(pair.oksvm->metrics.f1, pair.svm->metrics.f1));
            sum_ok += pair.oksvm->metrics.f1;
            sum_svm += pair.svm->metrics.f1;
        }
        const double n = static_cast<double>(diffs.size());
        const double cell = value == "wlr" ? wins_losses_ratio(diffs) : f1_diff(sum_ok / n, sum_svm / n);
        write_key(key, out);
        out << detail::format_shortest(cell) << '\n';
    }
}

}  // namespace oksvm
