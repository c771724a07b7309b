#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkb/matrix.hpp"

namespace qkb::data {

struct Dataset {
    Matrix features;
    std::vector<int> labels; // +-1
    std::vector<std::string> feature_names;
    std::string label_name;
};

/// Loads a CSV with an optional header (auto-detected when the first row is
/// non-numeric). The label column may be given by name or by 0-based index;
/// rows whose label equals `positive_class` map to +1, the (single) other
/// class maps to -1. Missing or non-numeric feature values raise IngestError
/// naming the row and column.
Dataset load_dataset(const std::string &path, const std::string &label_column,
                     const std::string &positive_class);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// n_splits independent shuffled splits. The master seed derives one child
/// seed per split (counter-based), each child seeds a Fisher-Yates shuffle;
/// train size = floor(train_fraction * n_rows). Unstratified.
std::vector<Split> make_splits(std::size_t n_rows, const std::vector<int> &labels, int n_splits,
                               double train_fraction, std::uint64_t master_seed);

} // namespace qkb::data
