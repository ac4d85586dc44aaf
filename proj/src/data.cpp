#include "graces/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "graces/errors.hpp"
#include "graces/rng.hpp"

namespace graces {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_real(std::string_view field) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value))
        return std::nullopt;
    return value;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t floor_share(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

// Splits `total` across classes in proportion to their sizes, rounding by
// largest remainder (ties to the lower class index).
std::vector<std::size_t> apportion(std::size_t total, const std::vector<std::size_t>& class_sizes,
                                   std::size_t n) {
    const std::size_t classes = class_sizes.size();
    std::vector<std::size_t> out(classes);
    std::vector<double> remainder(classes);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        const double quota = static_cast<double>(total) * static_cast<double>(class_sizes[c]) /
                             static_cast<double>(n);
        out[c] = static_cast<std::size_t>(std::floor(quota + 1e-9));
        remainder[c] = quota - static_cast<double>(out[c]);
        assigned += out[c];
    }
    std::vector<std::size_t> order(classes);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < total; i = (i + 1) % classes) {
        out[order[i]] += 1;
        ++assigned;
    }
    return out;
}

}  // namespace

void Dataset::validate() const {
    if (y.size() != x.rows()) throw InvalidArgument("dataset: label count does not match rows");
    for (int v : y)
        if (v != 0 && v != 1) throw InvalidArgument("dataset: labels must be 0 or 1");
    if (!feature_names.empty() && feature_names.size() != x.cols())
        throw InvalidArgument("dataset: feature name count does not match columns");
    if (truth) {
        std::set<std::size_t> seen;
        for (std::size_t i : *truth) {
            if (i >= x.cols()) throw InvalidArgument("dataset: truth index out of range");
            if (!seen.insert(i).second) throw InvalidArgument("dataset: duplicate truth index");
        }
    }
}

Dataset make_classification(const ClassificationSpec& spec) {
    const std::size_t n = spec.samples;
    const std::size_t p = spec.features;
    const std::size_t q = spec.informative;
    if (q < 1 || q > p) throw InvalidArgument("make_classification: need 1 <= q <= p");
    if (n == 0 || n % 2 != 0) throw InvalidArgument("make_classification: n must be even and positive");
    if (!(spec.class_sep > 0.0)) throw InvalidArgument("make_classification: class_sep must be positive");

    Rng rng(spec.seed);
    std::vector<double> vertex(q);
    for (double& v : vertex) v = rng.bernoulli(0.5) ? spec.class_sep : -spec.class_sep;

    DenseMatrix raw(n, p);
    Labels labels(n);
    for (std::size_t j = 0; j < n; ++j) {
        const int label = j < n / 2 ? 0 : 1;
        labels[j] = label;
        const double sign = label == 0 ? 1.0 : -1.0;
        for (std::size_t c = 0; c < q; ++c) raw(j, c) = sign * vertex[c] + rng.standard_normal();
        for (std::size_t c = q; c < p; ++c) raw(j, c) = rng.standard_normal();
    }

    std::vector<std::size_t> row_order(n);
    std::iota(row_order.begin(), row_order.end(), std::size_t{0});
    rng.shuffle(row_order);
    // column_position[c] is where original column c lands
    std::vector<std::size_t> column_position(p);
    std::iota(column_position.begin(), column_position.end(), std::size_t{0});
    rng.shuffle(column_position);

    Dataset out;
    out.x = DenseMatrix(n, p);
    out.y.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = row_order[j];
        out.y[j] = labels[src];
        for (std::size_t c = 0; c < p; ++c) out.x(j, column_position[c]) = raw(src, c);
    }
    std::vector<std::size_t> truth(column_position.begin(), column_position.begin() + static_cast<std::ptrdiff_t>(q));
    std::sort(truth.begin(), truth.end());
    out.truth = std::move(truth);
    return out;
}

Dataset parse_delimited(const std::string& text, const DelimitedOptions& options) {
    std::vector<std::vector<std::string_view>> rows;
    std::vector<std::size_t> line_numbers;
    std::vector<std::string_view> header;

    std::size_t line_no = 0;
    std::size_t start = 0;
    const std::string_view all(text);
    while (start <= all.size()) {
        auto end = all.find('\n', start);
        if (end == std::string_view::npos) end = all.size();
        const std::string_view line = all.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (trim(line).empty()) {
            if (end == all.size()) break;
            continue;
        }
        auto fields = split_fields(line, options.delimiter);
        if (options.has_header && header.empty() && rows.empty()) {
            header = std::move(fields);
            continue;
        }
        const std::size_t expected = !header.empty() ? header.size() : (rows.empty() ? fields.size() : rows.front().size());
        if (fields.size() != expected) {
            throw ParseError("expected " + std::to_string(expected) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        rows.push_back(std::move(fields));
        line_numbers.push_back(line_no);
        if (end == all.size()) break;
    }
    if (rows.empty()) throw ParseError("no data rows");

    const std::size_t width = rows.front().size();
    std::size_t label_col = options.label_index;
    if (options.label_name) {
        if (header.empty()) throw ParseError("label column given by name but the file has no header");
        const auto it = std::find(header.begin(), header.end(), *options.label_name);
        if (it == header.end()) throw ParseError("label column '" + *options.label_name + "' not found", 1);
        label_col = static_cast<std::size_t>(it - header.begin());
    }
    if (label_col >= width) throw ParseError("label column index out of range", line_numbers.front());
    if (width < 2) throw ParseError("need a label column and at least one feature", line_numbers.front());

    const std::size_t n = rows.size();
    const std::size_t p = width - 1;
    Dataset out;
    out.x = DenseMatrix(n, p);
    std::vector<std::string> raw_labels(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t c_out = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (c == label_col) {
                raw_labels[j] = std::string(rows[j][c]);
                if (raw_labels[j].empty()) throw ParseError("missing label", line_numbers[j], c + 1);
                continue;
            }
            const auto value = parse_real(rows[j][c]);
            if (!value) {
                throw ParseError("non-numeric feature value '" + std::string(rows[j][c]) + "'",
                                 line_numbers[j], c + 1);
            }
            out.x(j, c_out++) = *value;
        }
    }

    std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
    if (distinct.size() > 2) {
        throw ParseError("label column has " + std::to_string(distinct.size()) +
                         " distinct values, expected 2");
    }
    std::vector<std::string> classes(distinct.begin(), distinct.end());
    const bool numeric = std::all_of(classes.begin(), classes.end(),
                                     [](const std::string& s) { return parse_real(s).has_value(); });
    if (numeric) {
        std::sort(classes.begin(), classes.end(), [](const std::string& a, const std::string& b) {
            return *parse_real(a) < *parse_real(b);
        });
        // a lone class keeps its natural 0/1 value
        if (classes.size() == 1 && *parse_real(classes[0]) == 1.0) classes.insert(classes.begin(), "0");
    }
    out.y.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.y[j] = static_cast<int>(std::find(classes.begin(), classes.end(), raw_labels[j]) - classes.begin());
    }
    out.class_names = std::move(classes);

    if (!header.empty()) {
        for (std::size_t c = 0; c < width; ++c)
            if (c != label_col) out.feature_names.emplace_back(header[c]);
    }
    return out;
}

Dataset load_delimited(const std::filesystem::path& path, const DelimitedOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_delimited(buffer.str(), options);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string format_delimited(const Dataset& dataset, char delimiter) {
    dataset.validate();
    std::string out = "label";
    for (std::size_t c = 0; c < dataset.features(); ++c) {
        out += delimiter;
        out += dataset.feature_names.empty() ? "f" + std::to_string(c) : dataset.feature_names[c];
    }
    out += '\n';
    for (std::size_t j = 0; j < dataset.samples(); ++j) {
        const int label = dataset.y[j];
        out += static_cast<std::size_t>(label) < dataset.class_names.size()
                   ? dataset.class_names[static_cast<std::size_t>(label)]
                   : std::to_string(label);
        for (double v : dataset.x.row(j)) {
            out += delimiter;
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

void save_delimited(const Dataset& dataset, const std::filesystem::path& path, char delimiter) {
    const std::string text = format_delimited(dataset, delimiter);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

void SplitSpec::validate() const {
    if (!(train_fraction > 0.0 && val_fraction > 0.0 && test_fraction > 0.0))
        throw InvalidArgument("split fractions must be positive");
    if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
        throw InvalidArgument("split fractions must sum to 1");
}

SplitIndices split_indices(std::span<const int> y, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = y.size();
    const std::size_t n_train = floor_share(spec.train_fraction, n);
    const std::size_t n_val = floor_share(spec.val_fraction, n);
    if (n_train == 0 || n_val == 0 || n_train + n_val >= n)
        throw InvalidArgument("split: too few samples for the requested fractions");

    Rng rng(spec.seed);
    SplitIndices out;
    if (!spec.stratified) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order);
        out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                       order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
        out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
    } else {
        std::vector<std::vector<std::size_t>> by_class(2);
        for (std::size_t j = 0; j < n; ++j) {
            if (y[j] != 0 && y[j] != 1) throw InvalidArgument("split: labels must be 0 or 1");
            by_class[static_cast<std::size_t>(y[j])].push_back(j);
        }
        const std::vector<std::size_t> sizes{by_class[0].size(), by_class[1].size()};
        const auto train_share = apportion(n_train, sizes, n);
        const auto val_share = apportion(n_val, sizes, n);
        for (std::size_t c = 0; c < 2; ++c) {
            auto& members = by_class[c];
            if (train_share[c] == 0 || val_share[c] == 0 || train_share[c] + val_share[c] >= members.size())
                throw InvalidArgument("split: stratification infeasible, class " + std::to_string(c) +
                                      " cannot reach every partition");
            rng.shuffle(members);
            const auto a = static_cast<std::ptrdiff_t>(train_share[c]);
            const auto b = a + static_cast<std::ptrdiff_t>(val_share[c]);
            out.train.insert(out.train.end(), members.begin(), members.begin() + a);
            out.val.insert(out.val.end(), members.begin() + a, members.begin() + b);
            out.test.insert(out.test.end(), members.begin() + b, members.end());
        }
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

Dataset subset_rows(const Dataset& dataset, std::span<const std::size_t> rows) {
    Dataset out;
    out.x = DenseMatrix(rows.size(), dataset.features());
    out.y.resize(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const auto src = dataset.x.row(rows[j]);
        std::copy(src.begin(), src.end(), out.x.row(j).begin());
        out.y[j] = dataset.y[rows[j]];
    }
    out.feature_names = dataset.feature_names;
    out.class_names = dataset.class_names;
    out.truth = dataset.truth;
    return out;
}

DatasetSplit split(const Dataset& dataset, const SplitSpec& spec) {
    DatasetSplit out;
    out.indices = split_indices(dataset.y, spec);
    out.train = subset_rows(dataset, out.indices.train);
    out.val = subset_rows(dataset, out.indices.val);
    out.test = subset_rows(dataset, out.indices.test);
    return out;
}

DenseMatrix select_columns(const DenseMatrix& x, std::span<const std::size_t> columns) {
    DenseMatrix out(x.rows(), columns.size());
    for (std::size_t j = 0; j < x.rows(); ++j)
        for (std::size_t k = 0; k < columns.size(); ++k) out(j, k) = x(j, columns[k]);
    return out;
}

}  // namespace graces
