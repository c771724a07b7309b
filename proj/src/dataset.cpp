#include "qkb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "qkb/errors.hpp"
#include "qkb/rng.hpp"

namespace qkb::data {

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string &s, double &out) {
    const std::string t = trim(s);
    if (t.empty())
        return false;
    const char *begin = t.data();
    const char *end = t.data() + t.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

} // namespace

Dataset load_dataset(const std::string &path, const std::string &label_column,
                     const std::string &positive_class) {
    std::ifstream is(path);
    if (!is)
        throw IngestError("load_dataset: cannot open '" + path + "'");

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (trim(line).empty())
            continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty())
        throw IngestError("load_dataset: '" + path + "' is empty");
    const std::size_t n_cols = rows[0].size();
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].size() != n_cols)
            throw IngestError("load_dataset: row " + std::to_string(r + 1) + " has " +
                              std::to_string(rows[r].size()) + " fields, expected " +
                              std::to_string(n_cols));

    // header auto-detection: first row counts as a header when any of its
    // fields is non-numeric
    bool has_header = false;
    for (const std::string &f : rows[0]) {
        double v;
        if (!parse_double(f, v)) {
            has_header = true;
            break;
        }
    }

    std::vector<std::string> names(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c)
        names[c] = has_header ? trim(rows[0][c]) : "c" + std::to_string(c);

    // resolve the label column by name, then by index
    std::size_t label_idx = n_cols;
    for (std::size_t c = 0; c < n_cols; ++c)
        if (names[c] == label_column)
            label_idx = c;
    if (label_idx == n_cols) {
        double v;
        if (parse_double(label_column, v) && v >= 0 && v < static_cast<double>(n_cols))
            label_idx = static_cast<std::size_t>(v);
        else
            throw IngestError("load_dataset: label column '" + label_column + "' not found");
    }

    const std::size_t first_data = has_header ? 1 : 0;
    const std::size_t n_rows = rows.size() - first_data;
    if (n_rows == 0)
        throw IngestError("load_dataset: '" + path + "' has a header but no data rows");

    Dataset ds;
    ds.label_name = names[label_idx];
    for (std::size_t c = 0; c < n_cols; ++c)
        if (c != label_idx)
            ds.feature_names.push_back(names[c]);
    ds.features = Matrix(n_rows, n_cols - 1);
    ds.labels.resize(n_rows);

    std::set<std::string> classes;
    std::vector<std::string> raw_labels(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        const auto &fields = rows[first_data + r];
        std::size_t out_c = 0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (c == label_idx) {
                raw_labels[r] = trim(fields[c]);
                classes.insert(raw_labels[r]);
                continue;
            }
            double v;
            if (trim(fields[c]).empty())
                throw IngestError("load_dataset: missing value at row " +
                                  std::to_string(first_data + r + 1) + ", column '" + names[c] +
                                  "'");
            if (!parse_double(fields[c], v))
                throw IngestError("load_dataset: non-numeric feature '" + trim(fields[c]) +
                                  "' at row " + std::to_string(first_data + r + 1) +
                                  ", column '" + names[c] + "'");
            ds.features.at(r, out_c++) = v;
        }
    }

    if (classes.size() != 2)
        throw IngestError("load_dataset: expected exactly 2 classes, found " +
                          std::to_string(classes.size()));
    if (!classes.count(positive_class))
        throw IngestError("load_dataset: positive class '" + positive_class +
                          "' not present in the label column");
    for (std::size_t r = 0; r < n_rows; ++r)
        ds.labels[r] = raw_labels[r] == positive_class ? 1 : -1;
    return ds;
}

std::vector<Split> make_splits(std::size_t n_rows, const std::vector<int> &labels, int n_splits,
                               double train_fraction, std::uint64_t master_seed) {
    if (n_splits < 1)
        throw ArgumentError("make_splits: n_splits must be >= 1");
    if (!labels.empty() && labels.size() != n_rows)
        throw ArgumentError("make_splits: label count does not match n_rows");
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw ArgumentError("make_splits: train_fraction must lie in (0,1)");
    const std::size_t n_train =
        static_cast<std::size_t>(train_fraction * static_cast<double>(n_rows));
    if (n_train == 0 || n_train == n_rows)
        throw ArgumentError("make_splits: split leaves an empty train or test side");

    std::vector<Split> splits(n_splits);
    for (int s = 0; s < n_splits; ++s) {
        rng::Engine eng(rng::derive_seed(master_seed, static_cast<std::uint64_t>(s)));
        std::vector<std::size_t> perm(n_rows);
        for (std::size_t i = 0; i < n_rows; ++i)
            perm[i] = i;
        for (std::size_t i = n_rows - 1; i > 0; --i) {
            const std::size_t j = eng.uniform_below(i + 1);
            std::swap(perm[i], perm[j]);
        }
        splits[s].train.assign(perm.begin(), perm.begin() + n_train);
        splits[s].test.assign(perm.begin() + n_train, perm.end());
    }
    return splits;
}

} // namespace qkb::data
