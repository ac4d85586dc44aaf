#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graces/data.hpp"
#include "graces/eval.hpp"
#include "graces/selector.hpp"

namespace graces {

using Json = nlohmann::ordered_json;

struct DatasetSource {
    std::string name;
    std::optional<ClassificationSpec> synthetic;
    std::filesystem::path path;  // used when synthetic is empty
    DelimitedOptions options;
};

enum class MethodKind { graces, f_test, external };

struct MethodSpec {
    MethodKind kind = MethodKind::graces;
    std::string name;
    GracesConfig config;                // graces only
    std::optional<GracesGrid> grid;     // graces only
    // external only: ranking file per dataset name; key "*" applies to all
    std::map<std::string, std::filesystem::path> rankings;
};

struct BenchmarkConfig {
    std::uint64_t seed = 0;
    std::size_t replicates = 20;
    std::size_t k_min = 1;
    std::size_t k_max = 10;
    SplitSpec split;  // seed field is ignored; each replicate derives its own
    SvmConfig svm;
    std::size_t threads = 1;
    std::vector<DatasetSource> datasets;
    std::vector<MethodSpec> methods;

    void validate() const;
};

struct ReplicateRecord {
    std::string dataset;
    std::string method;
    std::size_t replicate = 0;
    std::uint64_t split_seed = 0;
    std::vector<std::size_t> ranking;  // first k_max features, best first
    // Indexed by k - k_min; empty optional marks an incomplete cell.
    std::vector<std::optional<double>> auroc;
    std::vector<std::optional<double>> correction_rate;
    std::optional<GracesConfig> chosen_config;  // grid-searched graces runs
    std::string error;
    double seconds = 0.0;
};

struct Aggregate {
    std::string dataset;
    std::string method;
    std::size_t k = 0;
    std::size_t count = 0;
    double mean_auroc = 0.0;
    double stderr_auroc = 0.0;
    std::optional<double> mean_correction_rate;
};

struct MethodSummary {
    std::string dataset;
    std::string method;
    std::size_t count = 0;  // completed (replicate, k) cells
    double mean_auroc = 0.0;
    std::optional<double> mean_correction_rate;
};

struct Comparison {
    std::string dataset;
    std::string method;     // the graces method
    std::string baseline;
    PairedTTest test;
};

struct BenchmarkReport {
    Json config_echo;
    std::vector<ReplicateRecord> records;  // ordered by (dataset, method, replicate)
    std::vector<Aggregate> aggregates;
    std::vector<MethodSummary> summaries;
    std::vector<Comparison> comparisons;

    std::size_t completed_cells() const;
};

// Relative dataset and ranking paths are resolved against base_dir.
BenchmarkConfig benchmark_config_from_json(const Json& json, const std::filesystem::path& base_dir = {});
Json benchmark_config_to_json(const BenchmarkConfig& config);

Json graces_config_to_json(const GracesConfig& config);
// Fields missing from `json` keep the value in `base`. Unknown keys are rejected.
GracesConfig graces_config_from_json(const Json& json, const GracesConfig& base = {});

// One feature index per line, best first. Blank lines and '#' comments are
// skipped; only the first whitespace-separated field of a line is read.
std::vector<std::size_t> load_ranking(const std::filesystem::path& path);

// Splits, selects on training data, then scores top-k SVMs on the test split
// for every k in [k_min, k_max].
BenchmarkReport run_benchmark(const BenchmarkConfig& config, bool record_timings = false);

Json report_to_json(const BenchmarkReport& report, bool include_timings = false);
std::string report_to_csv(const BenchmarkReport& report, bool include_timings = false);

}  // namespace graces
