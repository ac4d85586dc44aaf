#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "graces/network.hpp"
#include "graces/numerics.hpp"

namespace graces {

struct Dataset {
    DenseMatrix x;  // n x p
    Labels y;       // 0/1 per row
    std::vector<std::string> feature_names;  // empty or length p
    // Original label strings for classes 0 and 1; empty when labels were numeric 0/1.
    std::vector<std::string> class_names;
    std::optional<std::vector<std::size_t>> truth;  // informative feature indices

    std::size_t samples() const noexcept { return x.rows(); }
    std::size_t features() const noexcept { return x.cols(); }

    // Throws InvalidArgument when an invariant is broken.
    void validate() const;
};

struct ClassificationSpec {
    std::size_t samples = 60;
    std::size_t features = 500;
    std::size_t informative = 10;
    double class_sep = 1.0;
    std::uint64_t seed = 0;
};

// Two balanced Gaussian clusters centred on opposite vertices of the
// informative hypercube {-class_sep, +class_sep}^q, padded with standard
// normal noise features; rows shuffled and columns permuted.
Dataset make_classification(const ClassificationSpec& spec);

struct DelimitedOptions {
    bool has_header = true;
    char delimiter = ',';
    // Label column by header name; takes precedence over label_index when set.
    std::optional<std::string> label_name;
    std::size_t label_index = 0;
};

Dataset load_delimited(const std::filesystem::path& path, const DelimitedOptions& options = {});
Dataset parse_delimited(const std::string& text, const DelimitedOptions& options = {});

// Writes label first, then features, at 17 significant digits.
void save_delimited(const Dataset& dataset, const std::filesystem::path& path, char delimiter = ',');
std::string format_delimited(const Dataset& dataset, char delimiter = ',');

struct SplitSpec {
    double train_fraction = 0.7;
    double val_fraction = 0.2;
    double test_fraction = 0.1;
    std::uint64_t seed = 0;
    bool stratified = true;

    void validate() const;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

struct DatasetSplit {
    Dataset train;
    Dataset val;
    Dataset test;
    SplitIndices indices;
};

// Seeded shuffle into train/validation/test. Training and validation hold
// floor(fraction * n) samples, test takes the rest. Stratified mode splits
// every class separately (largest-remainder rounding) so the totals are
// unchanged; each class must then reach every partition.
SplitIndices split_indices(std::span<const int> y, const SplitSpec& spec);
DatasetSplit split(const Dataset& dataset, const SplitSpec& spec);

Dataset subset_rows(const Dataset& dataset, std::span<const std::size_t> rows);
DenseMatrix select_columns(const DenseMatrix& x, std::span<const std::size_t> columns);

}  // namespace graces
