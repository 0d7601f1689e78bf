#include "oksvm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <string_view>

#include <boost/random/normal_distribution.hpp>

#include "oksvm/error.hpp"
#include "oksvm/rng.hpp"
#include "text_format.hpp"

namespace oksvm {

Dataset::Dataset(Matrix features, std::vector<int> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
    if (static_cast<std::size_t>(features_.rows()) != labels_.size())
        throw DataError("feature rows (" + std::to_string(features_.rows()) +
                        ") do not match label count (" + std::to_string(labels_.size()) + ")");
    if (labels_.size() < 2) throw DataError("a dataset needs at least two samples");
    if (features_.cols() < 1) throw DataError("a dataset needs at least one feature");
    for (int y : labels_)
        if (y != 1 && y != -1) throw DataError("labels must be -1 or +1, got " + std::to_string(y));
}

std::size_t Dataset::count(int label) const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Matrix rows(static_cast<Eigen::Index>(indices.size()), features_.cols());
    std::vector<int> y(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto i = indices[r];
        if (i >= size()) throw ConfigError("subset index out of range");
        rows.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(i));
        y[r] = labels_[i];
    }
    return Dataset(std::move(rows), std::move(y));
}

bool operator==(const Dataset& a, const Dataset& b) {
    return a.labels_ == b.labels_ && a.features_.rows() == b.features_.rows() &&
           a.features_.cols() == b.features_.cols() && a.features_ == b.features_;
}

// ---------------------------------------------------------------------------
// synthetic data

void SyntheticConfig::validate() const {
    if (n_samples < 2 || n_samples % 2 != 0)
        throw ConfigError("n_samples must be even and at least 2 (balanced classes)");
    if (dim < 1 || dim > max_dim)
        throw ConfigError("dim must lie in [1, " + std::to_string(max_dim) + "]");
    if (!(sep >= 0.0) || !std::isfinite(sep)) throw ConfigError("sep must be a finite nonnegative real");
}

Dataset generate_synthetic(const SyntheticConfig& config) {
    config.validate();
    auto engine = make_engine(config.seed);
    boost::random::normal_distribution<double> normal(0.0, 1.0);

    const auto n = static_cast<Eigen::Index>(config.n_samples);
    const auto d = static_cast<Eigen::Index>(config.dim);
    const double offset = config.sep / std::sqrt(static_cast<double>(config.dim));

    Matrix x(n, d);
    std::vector<int> y(config.n_samples);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int label = i < n / 2 ? 1 : -1;
        y[static_cast<std::size_t>(i)] = label;
        for (Eigen::Index c = 0; c < d; ++c) x(i, c) = label * offset + normal(engine);
    }

    std::vector<std::size_t> order(config.n_samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(std::span(order), engine);
    return Dataset(std::move(x), std::move(y)).subset(order);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_line(std::string_view line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        cells.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

Dataset load_csv(std::istream& in, const CsvOptions& options) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (is_blank(line)) continue;
        header = split_line(line, options.delimiter);
        break;
    }
    if (header.empty()) throw DataError("empty CSV input: no header row");

    const auto label_it = std::find(header.begin(), header.end(), options.label_column);
    if (label_it == header.end()) throw DataError("missing label column '" + options.label_column + "'");
    const auto label_col = static_cast<std::size_t>(label_it - header.begin());

    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == label_col) continue;
        if (std::find(options.drop_columns.begin(), options.drop_columns.end(), header[c]) !=
            options.drop_columns.end())
            continue;
        feature_cols.push_back(c);
    }
    for (const auto& dropped : options.drop_columns)
        if (std::find(header.begin(), header.end(), dropped) == header.end())
            throw DataError("missing column '" + dropped + "' listed for dropping");
    if (feature_cols.empty()) throw DataError("no feature columns");

    std::vector<double> values;
    std::vector<int> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        auto cells = split_line(line, options.delimiter);
        if (cells.size() != header.size())
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " cells, found " +
                            std::to_string(cells.size()));
        const auto& raw_label = cells[label_col];
        if (!options.keep_labels.empty() &&
            std::find(options.keep_labels.begin(), options.keep_labels.end(), raw_label) ==
                options.keep_labels.end())
            continue;

        int label = -1;
        if (options.label_threshold) {
            auto parsed = detail::parse_double(raw_label);
            if (!parsed)
                throw DataError("line " + std::to_string(line_no) + ": label '" + raw_label +
                                "' is not numeric");
            label = *parsed > *options.label_threshold ? 1 : -1;
        } else {
            label = raw_label == options.positive_label ? 1 : -1;
        }
        for (auto c : feature_cols) {
            auto parsed = detail::parse_double(cells[c]);
            if (!parsed || !std::isfinite(*parsed))
                throw DataError("line " + std::to_string(line_no) + ": non-numeric feature cell '" +
                                cells[c] + "' in column '" + header[c] + "'");
            values.push_back(*parsed);
        }
        labels.push_back(label);
    }

    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
    if (!has_pos || !has_neg) throw DataError("fewer than two distinct labels after mapping");

    const auto rows = static_cast<Eigen::Index>(labels.size());
    const auto cols = static_cast<Eigen::Index>(feature_cols.size());
    Matrix x = Eigen::Map<const Matrix>(values.data(), rows, cols);
    return Dataset(std::move(x), std::move(labels));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return load_csv(in, options);
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::string& positive_label) {
    CsvOptions options;
    options.label_column = label_column;
    options.positive_label = positive_label;
    return load_csv(path, options);
}

void write_csv(const Dataset& data, std::ostream& out) {
    for (std::size_t c = 0; c < data.dim(); ++c) out << 'x' << c << ',';
    out << "label\n";
    const auto& x = data.features();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) out << detail::format_double(x(i, c)) << ',';
        out << data.labels()[static_cast<std::size_t>(i)] << '\n';
    }
}

// ---------------------------------------------------------------------------
// splits

namespace {

std::vector<std::size_t> indices_of(const Dataset& data, int label) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (data.labels()[i] == label) out.push_back(i);
    return out;
}

std::size_t rounded_share(std::size_t count, double fraction) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(count) * fraction));
}

}  // namespace

TrainTestSplit split_train_test(const Dataset& data, double test_fraction, bool stratified,
                                std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("test_fraction must lie in (0, 1)");
    auto engine = make_engine(seed);
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;

    if (stratified) {
        for (int label : {1, -1}) {
            auto members = indices_of(data, label);
            if (members.size() < 2)
                throw DataError("stratified split needs at least two samples per class");
            const auto n_test = rounded_share(members.size(), test_fraction);
            if (n_test == 0 || n_test >= members.size())
                throw DataError("test fraction leaves a class empty in one partition");
            shuffle(std::span(members), engine);
            test_idx.insert(test_idx.end(), members.begin(), members.begin() + static_cast<long>(n_test));
            train_idx.insert(train_idx.end(), members.begin() + static_cast<long>(n_test), members.end());
        }
    } else {
        std::vector<std::size_t> all(data.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        const auto n_test = rounded_share(all.size(), test_fraction);
        if (n_test < 2 || all.size() - n_test < 2)
            throw DataError("test fraction leaves fewer than two samples in one partition");
        shuffle(std::span(all), engine);
        test_idx.assign(all.begin(), all.begin() + static_cast<long>(n_test));
        train_idx.assign(all.begin() + static_cast<long>(n_test), all.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {data.subset(train_idx), data.subset(test_idx)};
}

FoldAssignment stratified_kfold(const Dataset& data, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k-fold needs k >= 2");
    auto engine = make_engine(seed);
    FoldAssignment folds{k, std::vector<std::vector<std::size_t>>(k)};
    std::size_t next = 0;
    for (int label : {-1, 1}) {
        auto members = indices_of(data, label);
        if (members.size() < k)
            throw DataError("class " + std::to_string(label) + " has " + std::to_string(members.size()) +
                            " samples, fewer than k=" + std::to_string(k));
        shuffle(std::span(members), engine);
        for (auto i : members) {
            folds.indices[next].push_back(i);
            next = (next + 1) % k;
        }
    }
    for (auto& fold : folds.indices) std::sort(fold.begin(), fold.end());
    return folds;
}

// ---------------------------------------------------------------------------
// standardization

Standardizer Standardizer::fit(const Dataset& train) {
    const auto& x = train.features();
    Standardizer s;
    s.mean_ = x.colwise().mean().transpose();
    s.scale_ = Vector::Ones(x.cols());
    s.active_.assign(static_cast<std::size_t>(x.cols()), false);
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double var = (x.col(c).array() - s.mean_(c)).square().mean();
        if (var > 0.0) {
            s.scale_(c) = std::sqrt(var);
            s.active_[static_cast<std::size_t>(c)] = true;
        }
    }
    return s;
}

Matrix Standardizer::apply(const Matrix& features) const {
    if (features.cols() != mean_.size()) throw ConfigError("standardizer dimension mismatch");
    Matrix out = features;
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        if (!active_[static_cast<std::size_t>(c)]) continue;
        out.col(c) = (out.col(c).array() - mean_(c)) / scale_(c);
    }
    return out;
}

Dataset Standardizer::apply(const Dataset& data) const { return Dataset(apply(data.features()), data.labels()); }

Standardized standardize(const Dataset& train, std::span<const Dataset> others) {
    const auto map = Standardizer::fit(train);
    std::vector<Dataset> mapped;
    mapped.reserve(others.size());
    for (const auto& d : others) mapped.push_back(map.apply(d));
    return {map.apply(train), std::move(mapped)};
}

}  // namespace oksvm
