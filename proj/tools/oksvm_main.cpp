// oksvm command-line tool: dataset generation, single-model training and
// prediction, and the grid / cross-validation experiment runners.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <oksvm/dataset.hpp>
#include <oksvm/error.hpp>
#include <oksvm/harness.hpp>
#include <oksvm/model_io.hpp>
#include <oksvm/optimizer.hpp>

namespace {

using namespace oksvm;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitUnconverged = 3;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(std::string("--") + what + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw ConfigError(std::string("--") + what + " needs at least one value");
    return out;
}

std::vector<std::size_t> parse_counts(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    for (double v : parse_reals(text, what)) {
        if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw ConfigError(std::string("--") + what + " takes positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::string join(const std::vector<double>& values) {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    return out.str();
}

// Output goes to a file when a path is given, otherwise to stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_.open(path);
        if (!file_) throw DataError("cannot write '" + path + "'");
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

// key=value lines (blank lines and '#' comments ignored) become --key=value
// tokens; they are placed before the real arguments, so explicit flags win.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(number) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        for (auto& ch : key)
            if (ch == '_') ch = '-';
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

struct LoadFlags {
    std::string label_column = "label";
    std::string positive_label = "1";
    std::string keep_labels;
    std::optional<double> label_threshold;
    std::string drop_columns;
    char delimiter = ',';

    void attach(CLI::App* app) {
        app->add_option("--label-column", label_column, "Name of the label column");
        app->add_option("--positive-label", positive_label, "Label value mapped to +1");
        app->add_option("--keep-labels", keep_labels, "Comma list: drop rows with other labels first");
        app->add_option("--label-threshold", label_threshold, "Numeric labels above this map to +1");
        app->add_option("--drop-columns", drop_columns, "Comma list of non-feature columns");
        app->add_option("--delimiter", delimiter, "Field delimiter");
    }

    CsvOptions options() const {
        CsvOptions o;
        o.label_column = label_column;
        o.positive_label = positive_label;
        o.keep_labels = split_list(keep_labels);
        o.label_threshold = label_threshold;
        o.drop_columns = split_list(drop_columns);
        o.delimiter = delimiter;
        return o;
    }
};

struct OksvmFlags {
    OksvmConfig config;

    void attach(CLI::App* app) {
        app->add_option("--eta0", config.eta0, "Initial learning rate");
        app->add_option("--zeta-plus", config.zeta_plus, "Learning-rate growth factor");
        app->add_option("--zeta-minus", config.zeta_minus, "Learning-rate shrink factor");
        app->add_option("--gamma-max", config.gamma_max, "Largest admissible gamma");
        app->add_option("--epsilon", config.epsilon, "Convergence tolerance on gamma");
        app->add_option("--ws-limit", config.ws_limit, "Unchanged-dual steps before stopping");
        app->add_option("--max-outer-steps", config.max_outer_steps, "Cap on gamma steps");
        app->add_option("--stagnation-tolerance", config.stagnation_tolerance, "Relative 'unchanged' tolerance");
        app->add_flag("!--cold-start", config.warm_start, "Re-solve every gamma step from alpha = 0");
    }
};

struct SolverFlags {
    SolverConfig config;
    std::string variant = "second-order";

    void attach(CLI::App* app) {
        app->add_option("--kkt-tolerance", config.kkt_tolerance, "SMO stopping tolerance");
        app->add_option("--max-iterations", config.max_iterations, "SMO pair-update cap (0: 10 N^2)");
        app->add_option("--max-passes", config.max_passes, "Simplified SMO: clean sweeps before stopping");
        app->add_option("--support-threshold", config.support_threshold, "alpha above this is a support vector");
        app->add_option("--smo", variant, "SMO variant")->check(CLI::IsMember({"second-order", "simplified"}));
        app->add_option("--solver-seed", config.seed, "Seed of the simplified variant");
    }

    SolverConfig resolved() const {
        auto c = config;
        c.variant = variant == "simplified" ? SmoVariant::simplified : SmoVariant::second_order;
        return c;
    }
};

struct GridFlags {
    std::string dims = "2";
    std::string seps = "0.6,0.8,1.0,1.2,1.4";
    std::string cs = "0.5,1.0,1.5";
    std::string gammas = "0.1,0.5,0.9,1.3,1.7,2.1";
    std::size_t repetitions = 20;
    std::uint64_t base_seed = 0;
    double test_fraction = 0.5;
    std::size_t n_samples = 200;
    bool standardize = false;
    bool full_scale = false;

    void attach(CLI::App* app) {
        app->add_option("--dims", dims, "Comma list of dimensions");
        app->add_option("--seps", seps, "Comma list of class separations");
        app->add_option("--cs", cs, "Comma list of C values");
        app->add_option("--gammas", gammas, "Comma list of gamma values");
        app->add_option("--repetitions", repetitions, "Repetitions per cell");
        app->add_option("--base-seed", base_seed, "Base seed of all derived seeds");
        app->add_option("--test-fraction", test_fraction, "Test share of each generated dataset");
        app->add_option("--n-samples", n_samples, "Samples per generated dataset");
        app->add_flag("--standardize", standardize, "Z-score features with training statistics");
        app->add_flag("--full-scale", full_scale, "dims 2..8 and 100 repetitions");
    }

    GridSpec spec() const {
        GridSpec s;
        s.dims = parse_counts(dims, "dims");
        s.seps = parse_reals(seps, "seps");
        s.cs = parse_reals(cs, "cs");
        s.gammas = parse_reals(gammas, "gammas");
        s.repetitions = repetitions;
        s.base_seed = base_seed;
        s.test_fraction = test_fraction;
        s.n_samples = n_samples;
        s.standardize = standardize;
        if (full_scale) {
            const auto full = GridSpec::full_scale();
            s.dims = full.dims;
            s.repetitions = full.repetitions;
        }
        return s;
    }
};

bool all_converged(const std::vector<ResultRow>& rows) {
    for (const auto& r : rows)
        if (!r.converged) return false;
    return true;
}

void print_metrics(const MetricsRecord& m, std::ostream& out) {
    out << "acc=" << m.acc << "\nprecision=" << m.precision << "\nrecall=" << m.recall << "\nf1=" << m.f1
        << "\nauc=" << m.auc << "\ntp=" << m.counts.tp << "\nfp=" << m.counts.fp << "\ntn=" << m.counts.tn
        << "\nfn=" << m.counts.fn << '\n';
}

int run(int argc, char** argv) {
    // Pull --config out of argv and splice its tokens in after the subcommand.
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> from_file;
    for (std::size_t i = 0; i < args.size();) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
            continue;
        }
        const auto tokens = config_tokens(path);
        from_file.insert(from_file.end(), tokens.begin(), tokens.end());
    }

    CLI::App app{"Optimized-kernel SVM: learns the RBF gamma while training", "oksvm"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", "oksvm 0.1.0");
    app.footer("Any option may also be set as key=value in a file passed with --config FILE; "
               "command-line flags override the file.\nExit codes: 0 ok, 1 usage, 2 data, 3 unconverged (--strict).");

    bool strict = false;
    std::size_t jobs = 1;
    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--strict", strict, "Exit with code 3 if any dual solve hit its iteration cap");
    };
    auto add_jobs = [&](CLI::App* sub) { sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber); };

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic two-Gaussian dataset as CSV");
    SyntheticConfig synth;
    std::string gen_out;
    gen->add_option("--n-samples", synth.n_samples, "Sample count (even)");
    gen->add_option("--dim", synth.dim, "Feature dimension");
    gen->add_option("--sep", synth.sep, "Class separation");
    gen->add_option("--seed", synth.seed, "Random seed");
    gen->add_option("-o,--out", gen_out, "Output CSV (default stdout)");

    // train
    auto* train = app.add_subcommand("train", "Train one model and report test metrics");
    LoadFlags train_load;
    OksvmFlags train_ok;
    SolverFlags train_solver;
    std::string train_data, train_test, model_out, trace_out, train_metrics_out, train_method = "oksvm";
    double train_c = 1.0, train_gamma = 1.0, train_test_fraction = 0.2;
    std::uint64_t train_seed = 0;
    bool train_standardize = false;
    train->add_option("--data", train_data, "Training CSV")->required();
    train->add_option("--test", train_test, "Test CSV (default: hold out --test-fraction of --data)");
    train->add_option("--test-fraction", train_test_fraction, "Stratified hold-out share when --test is absent");
    train->add_option("--seed", train_seed, "Seed of the hold-out split");
    train->add_option("--method", train_method, "svm or oksvm")->check(CLI::IsMember({"svm", "oksvm"}));
    train->add_option("--c", train_c, "Regularization C");
    train->add_option("--gamma", train_gamma, "Kernel gamma (initial gamma for oksvm)");
    train->add_flag("--standardize", train_standardize, "Z-score features with training statistics");
    train->add_option("--model-out", model_out, "Write the trained model");
    train->add_option("--trace-out", trace_out, "Write the gamma trace CSV (oksvm)");
    train->add_option("--metrics-out", train_metrics_out, "Write test metrics as key=value lines");
    train_load.attach(train);
    train_ok.attach(train);
    train_solver.attach(train);
    add_common(train);

    // predict
    auto* pred = app.add_subcommand("predict", "Score a CSV with a saved model");
    LoadFlags pred_load;
    std::string pred_model, pred_data, pred_out;
    pred->add_option("--model", pred_model, "Model file from train --model-out")->required();
    pred->add_option("--data", pred_data, "CSV to score")->required();
    pred->add_option("-o,--out", pred_out, "Output CSV index,score,label (default stdout)");
    pred_load.attach(pred);

    // grid-fixed / grid-tuned
    auto* fixed = app.add_subcommand("grid-fixed", "Both methods at every fixed (C, gamma) grid point");
    GridFlags fixed_grid;
    OksvmFlags fixed_ok;
    SolverFlags fixed_solver;
    std::string fixed_out;
    bool fixed_timing = false;
    fixed_grid.attach(fixed);
    fixed_ok.attach(fixed);
    fixed_solver.attach(fixed);
    fixed->add_option("-o,--out", fixed_out, "Result rows CSV (default stdout)");
    fixed->add_flag("--timing", fixed_timing, "Add a wall_time column (output no longer reproducible)");
    add_common(fixed);
    add_jobs(fixed);

    auto* tuned = app.add_subcommand("grid-tuned", "Grid search by validation F1, then test");
    GridFlags tuned_grid;
    OksvmFlags tuned_ok;
    SolverFlags tuned_solver;
    std::string tuned_out;
    bool tuned_timing = false;
    std::size_t tuned_runs = 10;
    double tuned_validation = 0.25;
    tuned_grid.attach(tuned);
    tuned_ok.attach(tuned);
    tuned_solver.attach(tuned);
    tuned->add_option("--gamma0", tuned_ok.config.gamma0, "Initial gamma of oksvm");
    tuned->add_option("--tuning-runs", tuned_runs, "Validation re-splits per grid point");
    tuned->add_option("--validation-fraction", tuned_validation, "Validation share of the training part");
    tuned->add_option("-o,--out", tuned_out, "Result rows CSV (default stdout)");
    tuned->add_flag("--timing", tuned_timing, "Add a wall_time column (output no longer reproducible)");
    add_common(tuned);
    add_jobs(tuned);

    // cv
    auto* cv = app.add_subcommand("cv", "Stratified k-fold evaluation of both methods on a CSV dataset");
    LoadFlags cv_load;
    OksvmFlags cv_ok;
    SolverFlags cv_solver;
    std::string cv_data, cv_name, cv_out, cv_rows_out;
    std::string cv_cs = join(real_data_cs());
    std::string cv_gammas = join(real_data_gammas());
    std::size_t cv_k = 5, cv_runs = 1;
    std::uint64_t cv_seed = 0;
    bool cv_no_standardize = false;
    double cv_validation = 0.25;
    cv->add_option("--data", cv_data, "Dataset CSV")->required();
    cv->add_option("--name", cv_name, "Dataset name in the output (default: file stem)");
    cv->add_option("--cs", cv_cs, "Comma list of C values");
    cv->add_option("--gammas", cv_gammas, "Comma list of gamma values (svm)");
    cv->add_option("--gamma0", cv_ok.config.gamma0, "Initial gamma of oksvm");
    cv->add_option("--k", cv_k, "Fold count");
    cv->add_option("--seed", cv_seed, "Seed of folds and validation splits");
    cv->add_option("--tuning-runs", cv_runs, "Validation re-splits per grid point");
    cv->add_option("--validation-fraction", cv_validation, "Validation share of the training part");
    cv->add_flag("--no-standardize", cv_no_standardize, "Use raw feature scales");
    cv->add_option("-o,--out", cv_out, "Summary CSV (default: table on stdout)");
    cv->add_option("--rows-out", cv_rows_out, "Per-fold result rows CSV");
    cv_load.attach(cv);
    cv_ok.attach(cv);
    cv_solver.attach(cv);
    add_common(cv);
    add_jobs(cv);

    // heatmap
    auto* heat = app.add_subcommand("heatmap", "Aggregate result rows into long-format cells");
    std::string heat_rows, heat_group = "dim,sep", heat_value = "f1_diff", heat_stat = "mean", heat_out;
    heat->add_option("--rows", heat_rows, "Result rows CSV")->required();
    heat->add_option("--group-by", heat_group, "Comma list of axes: dataset,dim,sep,c,gamma0,fold,method");
    heat->add_option("--value", heat_value, "acc, precision, recall, f1, auc, final_gamma, f1_diff or wlr");
    heat->add_option("--stat", heat_stat, "mean, median, q1 or q3");
    heat->add_option("-o,--out", heat_out, "Output CSV (default stdout)");

    if (!from_file.empty()) {
        // The subcommand name is the first positional argument.
        std::size_t at = 0;
        while (at < args.size() && !args[at].empty() && args[at][0] == '-') ++at;
        if (at < args.size()) args.insert(args.begin() + static_cast<std::ptrdiff_t>(at) + 1, from_file.begin(), from_file.end());
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*gen) {
        const auto data = generate_synthetic(synth);
        Sink sink(gen_out);
        write_csv(data, sink.stream());
        return kExitOk;
    }

    if (*train) {
        const auto data = load_csv(train_data, train_load.options());
        Dataset fit_part = data;
        std::optional<Dataset> test_part;
        if (!train_test.empty()) {
            fit_part = data;
            test_part = load_csv(train_test, train_load.options());
        } else {
            auto split = split_train_test(data, train_test_fraction, true, train_seed);
            fit_part = std::move(split.train);
            test_part = std::move(split.test);
        }
        if (train_standardize) {
            const auto map = Standardizer::fit(fit_part);
            fit_part = map.apply(fit_part);
            test_part = map.apply(*test_part);
        }
        const auto solver = train_solver.resolved();
        SvmModel model;
        bool converged = true;
        std::optional<OptimizerState> state;
        if (train_method == "svm") {
            model = train_svm_baseline(fit_part, train_c, train_gamma, solver);
            converged = model.converged;
        } else {
            auto config = train_ok.config;
            config.gamma0 = train_gamma;
            auto result = train_oksvm(fit_part, train_c, config, solver);
            model = std::move(result.model);
            converged = result.state.all_solves_converged;
            state = std::move(result.state);
        }
        const auto metrics = evaluate_scores(test_part->labels(), decision_values(model, test_part->features()));

        std::cout << "method=" << train_method << "\ngamma=" << model.gamma << "\nc=" << model.c
                  << "\nsupport_vectors=" << model.support_indices.size() << '\n';
        if (state)
            std::cout << "terminated_by=" << to_string(*state->terminated_by) << "\nouter_steps=" << state->t << '\n';
        print_metrics(metrics, std::cout);
        if (!train_metrics_out.empty()) {
            Sink sink(train_metrics_out);
            print_metrics(metrics, sink.stream());
        }
        if (!model_out.empty()) save_model(model, std::filesystem::path(model_out));
        if (!trace_out.empty() && state) {
            Sink sink(trace_out);
            write_trace_csv(*state, sink.stream());
            std::cout << "trace=" << trace_out << '\n';
        }
        return strict && !converged ? kExitUnconverged : kExitOk;
    }

    if (*pred) {
        const auto model = load_model(std::filesystem::path(pred_model));
        const auto data = load_csv(pred_data, pred_load.options());
        const auto scores = decision_values(model, data.features());
        Sink sink(pred_out);
        auto& out = sink.stream();
        out << "index,score,label\n";
        for (std::size_t i = 0; i < scores.size(); ++i) {
            std::array<char, 40> buf{};
            auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), scores[i]);
            out << i << ',' << std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data())) << ','
                << sign_label(scores[i]) << '\n';
        }
        return kExitOk;
    }

    if (*fixed || *tuned) {
        const bool is_fixed = static_cast<bool>(*fixed);
        const auto& grid = is_fixed ? fixed_grid : tuned_grid;
        RunOptions options;
        options.oksvm = is_fixed ? fixed_ok.config : tuned_ok.config;
        options.solver = (is_fixed ? fixed_solver : tuned_solver).resolved();
        options.jobs = jobs;
        options.record_time = is_fixed ? fixed_timing : tuned_timing;
        options.tuning_runs = tuned_runs;
        options.validation_fraction = tuned_validation;
        const auto rows = is_fixed ? run_fixed_grid(grid.spec(), options) : run_tuned_grid(grid.spec(), options);
        Sink sink(is_fixed ? fixed_out : tuned_out);
        write_rows_csv(rows, sink.stream(), options.record_time);
        return strict && !all_converged(rows) ? kExitUnconverged : kExitOk;
    }

    if (*cv) {
        const auto data = load_csv(cv_data, cv_load.options());
        CvSpec spec;
        spec.dataset_name = cv_name.empty() ? std::filesystem::path(cv_data).stem().string() : cv_name;
        spec.cs = parse_reals(cv_cs, "cs");
        spec.gammas = parse_reals(cv_gammas, "gammas");
        spec.k = cv_k;
        spec.seed = cv_seed;
        spec.standardize = !cv_no_standardize;
        RunOptions options;
        options.oksvm = cv_ok.config;
        options.solver = cv_solver.resolved();
        options.jobs = jobs;
        options.tuning_runs = cv_runs;
        options.validation_fraction = cv_validation;
        const auto report = run_real_cv(data, spec, options);
        if (cv_out.empty()) {
            print_cv_table(report, std::cout);
        } else {
            Sink sink(cv_out);
            write_cv_summary_csv(report, sink.stream());
        }
        if (!cv_rows_out.empty()) {
            Sink sink(cv_rows_out);
            write_rows_csv(report.rows, sink.stream());
        }
        return strict && !all_converged(report.rows) ? kExitUnconverged : kExitOk;
    }

    if (*heat) {
        std::ifstream in(heat_rows);
        if (!in) throw DataError("cannot open '" + heat_rows + "'");
        const auto rows = read_rows_csv(in);
        const auto axes = split_list(heat_group);
        Sink sink(heat_out);
        emit_heatmap_csv(rows, axes, heat_value, sink.stream(), parse_cell_stat(heat_stat));
        return kExitOk;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const oksvm::ConfigError& e) {
        std::cerr << "oksvm: " << e.what() << '\n';
        return kExitUsage;
    } catch (const oksvm::DataError& e) {
        std::cerr << "oksvm: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "oksvm: " << e.what() << '\n';
        return kExitData;
    }
}
