#include "oksvm/model_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "oksvm/error.hpp"
#include "text_format.hpp"

namespace oksvm {

namespace {

constexpr std::string_view kMagic = "oksvm-model 1";

std::string next_line(std::istream& in, std::string_view what) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("model file truncated: expected " + std::string(what));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double to_real(const std::string& text) {
    auto v = detail::parse_double(text);
    if (!v) throw DataError("model file: '" + text + "' is not a number");
    return *v;
}

std::size_t to_count(const std::string& text) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw DataError("model file: '" + text + "' is not a count");
    return v;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

void save_model(const SvmModel& model, std::ostream& out) {
    using detail::format_double;
    out << kMagic << '\n'
        << "gamma=" << format_double(model.gamma) << '\n'
        << "c=" << format_double(model.c) << '\n'
        << "bias=" << format_double(model.bias) << '\n'
        << "bias_fallback=" << (model.bias_fallback ? 1 : 0) << '\n'
        << "converged=" << (model.converged ? 1 : 0) << '\n'
        << "iterations=" << model.iterations << '\n'
        << "dual_value=" << format_double(model.dual_value) << '\n'
        << "n_train=" << model.alphas.size() << '\n'
        << "dim=" << model.dim() << '\n'
        << "n_support=" << model.support_indices.size() << '\n';
    out << "[alphas]\n";
    for (double a : model.alphas) out << format_double(a) << '\n';
    out << "[support_vectors]\n";
    out << "index,label";
    for (std::size_t c = 0; c < model.dim(); ++c) out << ",x" << c;
    out << '\n';
    for (std::size_t m = 0; m < model.support_indices.size(); ++m) {
        out << model.support_indices[m] << ',' << model.support_labels[m];
        for (Eigen::Index c = 0; c < model.support_vectors.cols(); ++c)
            out << ',' << format_double(model.support_vectors(static_cast<Eigen::Index>(m), c));
        out << '\n';
    }
}

void save_model(const SvmModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    save_model(model, out);
}

SvmModel load_model(std::istream& in) {
    if (next_line(in, "header") != kMagic) throw DataError("not an oksvm model file");

    std::map<std::string, std::string> fields;
    std::string line;
    while ((line = next_line(in, "[alphas]")) != "[alphas]") {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError("model file: malformed line '" + line + "'");
        fields[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto field = [&](const char* key) -> const std::string& {
        auto it = fields.find(key);
        if (it == fields.end()) throw DataError(std::string("model file: missing key '") + key + "'");
        return it->second;
    };

    SvmModel model;
    model.gamma = to_real(field("gamma"));
    model.c = to_real(field("c"));
    model.bias = to_real(field("bias"));
    model.bias_fallback = to_count(field("bias_fallback")) != 0;
    model.converged = to_count(field("converged")) != 0;
    model.iterations = to_count(field("iterations"));
    model.dual_value = to_real(field("dual_value"));
    const auto n_train = to_count(field("n_train"));
    const auto dim = to_count(field("dim"));
    const auto n_support = to_count(field("n_support"));

    model.alphas.reserve(n_train);
    for (std::size_t i = 0; i < n_train; ++i) model.alphas.push_back(to_real(next_line(in, "alpha")));
    if (next_line(in, "[support_vectors]") != "[support_vectors]")
        throw DataError("model file: expected [support_vectors]");
    next_line(in, "support vector header");

    model.support_vectors.resize(static_cast<Eigen::Index>(n_support), static_cast<Eigen::Index>(dim));
    for (std::size_t m = 0; m < n_support; ++m) {
        const auto cells = split_commas(next_line(in, "support vector"));
        if (cells.size() != dim + 2) throw DataError("model file: support vector row has the wrong width");
        const auto index = to_count(cells[0]);
        if (index >= n_train) throw DataError("model file: support index out of range");
        const int label = static_cast<int>(to_real(cells[1]));
        if (label != 1 && label != -1) throw DataError("model file: label must be -1 or +1");
        model.support_indices.push_back(index);
        model.support_labels.push_back(label);
        for (std::size_t c = 0; c < dim; ++c)
            model.support_vectors(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) = to_real(cells[c + 2]);
    }
    return model;
}

SvmModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return load_model(in);
}

}  // namespace oksvm
