#include "graces/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "graces/benchmark.hpp"
#include "graces/data.hpp"
#include "graces/errors.hpp"
#include "graces/selector.hpp"
#include "graces/stats.hpp"

namespace graces::cli {

namespace {

struct InputOptions {
    std::string path;
    std::string label_column = "0";
    bool no_header = false;
    std::string delimiter = ",";

    DelimitedOptions delimited() const {
        DelimitedOptions o;
        o.has_header = !no_header;
        if (delimiter == "\\t" || delimiter == "tab") o.delimiter = '\t';
        else if (delimiter.size() == 1) o.delimiter = delimiter[0];
        else throw InvalidArgument("--delimiter must be a single character");
        const bool numeric = !label_column.empty() &&
                             label_column.find_first_not_of("0123456789") == std::string::npos;
        if (numeric) o.label_index = std::stoul(label_column);
        else o.label_name = label_column;
        return o;
    }

    Json echo() const {
        return Json{{"input", path}, {"label_column", label_column}, {"has_header", !no_header},
                    {"delimiter", delimiter}};
    }
};

void add_input_options(CLI::App& cmd, InputOptions& in) {
    cmd.add_option("--input,-i", in.path, "Delimited dataset (label + features)")->required();
    cmd.add_option("--label-column", in.label_column, "Label column, by header name or 0-based index");
    cmd.add_flag("--no-header", in.no_header, "First row is data, not a header");
    cmd.add_option("--delimiter", in.delimiter, "Field delimiter (single character, or \\t)");
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path);
    file << text;
    if (!file) throw IoError("write failed for " + path);
}

int cmd_select(const InputOptions& input, const GracesConfig& config, const std::string& output,
               std::ostream& out) {
    const Dataset data = load_delimited(input.path, input.delimited());
    const SelectionResult result = select_features(data.x, data.y, config);

    Json doc;
    doc["command"] = "select";
    doc["config"] = graces_config_to_json(config);
    doc["config"].update(input.echo());
    doc["selected"] = result.features;
    if (!data.feature_names.empty()) {
        Json names = Json::array();
        for (std::size_t i : result.features) names.push_back(data.feature_names[i]);
        doc["names"] = std::move(names);
    }
    Json trace = Json::array();
    for (std::size_t t = 0; t < result.state.chosen.size(); ++t) {
        trace.push_back(Json{{"iteration", t},
                             {"chosen", result.state.chosen[t]},
                             {"final_loss", result.state.final_loss[t]},
                             {"scores", result.state.score_trace[t]}});
    }
    doc["trace"] = std::move(trace);
    emit(doc.dump(2) + "\n", output, out);
    return kSuccess;
}

int cmd_synth(const ClassificationSpec& spec, const std::string& output, std::ostream& out) {
    const Dataset data = make_classification(spec);
    save_delimited(data, output);

    std::string truth;
    for (std::size_t i : *data.truth) truth += std::to_string(i) + "\n";
    emit(truth, output + ".truth", out);

    const Json meta{{"command", "synth"},
                    {"config", Json{{"n", spec.samples},
                                    {"p", spec.features},
                                    {"q", spec.informative},
                                    {"class_sep", spec.class_sep},
                                    {"seed", spec.seed},
                                    {"output", output}}},
                    {"truth", *data.truth}};
    emit(meta.dump(2) + "\n", output + ".meta.json", out);
    return kSuccess;
}

int cmd_score(const InputOptions& input, const std::string& method, const std::string& output,
              std::ostream& out) {
    if (method != "f_test") throw InvalidArgument("unknown scoring method '" + method + "' (supported: f_test)");
    const Dataset data = load_delimited(input.path, input.delimited());
    const std::vector<double> scores = anova_f_scores(data.x, data.y);
    const auto order = rank_descending(scores);

    Json config{{"command", "score"}, {"method", method}};
    config.update(input.echo());
    std::string text = "# " + config.dump() + "\n";
    for (std::size_t i : order) {
        text += std::to_string(i) + "\t" + format_real(scores[i]);
        if (!data.feature_names.empty()) text += "\t" + data.feature_names[i];
        text += "\n";
    }
    emit(text, output, out);
    return kSuccess;
}

int cmd_benchmark(const std::string& config_path, const std::string& output, const std::string& format,
                  bool timings, std::size_t threads, std::ostream& out) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open benchmark config " + config_path);
    Json json;
    try {
        json = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(config_path + ": " + e.what());
    }
    BenchmarkConfig config =
        benchmark_config_from_json(json, std::filesystem::path(config_path).parent_path());
    if (threads > 0) config.threads = threads;
    const BenchmarkReport report = run_benchmark(config, timings);

    if (format == "csv") emit(report_to_csv(report, timings), output, out);
    else emit(report_to_json(report, timings).dump(2) + "\n", output, out);

    if (report.completed_cells() == 0) {
        bool load_failure = false;
        for (const auto& r : report.records)
            if (r.ranking.empty() && !r.error.empty()) load_failure = true;
        if (load_failure) throw IoError("benchmark: no cell completed (datasets failed to load or split)");
        throw std::runtime_error("benchmark: no cell completed");
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph-convolutional feature selection for high-dimensional, low-sample-size data", "graces"};
    app.require_subcommand(1);

    InputOptions select_input;
    GracesConfig config;
    std::string select_output;
    auto* select = app.add_subcommand("select", "Select K features with GRACES");
    add_input_options(*select, select_input);
    select->add_option("--k", config.k, "Number of features to select")->check(CLI::PositiveNumber);
    select->add_option("--delta", config.delta, "Cosine similarity threshold for graph edges");
    select->add_option("--h1", config.h1, "First hidden dimension");
    select->add_option("--h2", config.h2, "Second hidden dimension");
    select->add_option("--lr", config.learning_rate, "Learning rate");
    select->add_option("--m", config.dropout_count, "Number of dropout models");
    select->add_option("--sigma2", config.sigma2, "Variance of the GCN weight noise");
    select->add_option("--alpha", config.alpha, "Weight of the gradient score against the F-score");
    select->add_option("--epochs", config.epochs, "Gradient descent epochs per iteration");
    select->add_option("--dropout-prob", config.dropout_prob, "Probability of dropping a hidden unit");
    select->add_option("--seed", config.seed, "Random seed");
    select->add_flag("--standardize", config.standardize, "Z-score features before selection");
    select->add_flag("--rescale-dropout", config.rescale_dropout, "Scale kept units by 1/(1-p)");
    select->add_flag("--warm-start", config.warm_start, "Reuse the previous iteration's weights");
    select->add_option("--threads", config.threads, "Worker threads for the dropout ensemble");
    select->add_option("--output,-o", select_output, "Output file (default: stdout)");

    ClassificationSpec synth_spec;
    synth_spec.class_sep = 1.0;
    std::string synth_output;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with known informative features");
    synth->add_option("--n", synth_spec.samples, "Number of samples (even)");
    synth->add_option("--p", synth_spec.features, "Number of features");
    synth->add_option("--q", synth_spec.informative, "Number of informative features");
    synth->add_option("--class-sep", synth_spec.class_sep, "Half-width of the informative hypercube");
    synth->add_option("--seed", synth_spec.seed, "Random seed");
    synth->add_option("--output,-o", synth_output, "Output dataset path")->required();

    std::string bench_config, bench_output, bench_format = "json";
    bool bench_timings = false;
    std::size_t bench_threads = 0;
    auto* bench = app.add_subcommand("benchmark", "Run a replicate benchmark described by a JSON config");
    bench->add_option("--config,-c", bench_config, "Benchmark configuration file")->required();
    bench->add_option("--output,-o", bench_output, "Report file (default: stdout)");
    bench->add_option("--format", bench_format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    bench->add_flag("--timings", bench_timings, "Record wall-clock seconds per replicate");
    bench->add_option("--threads", bench_threads, "Worker threads for the dropout ensemble");

    InputOptions score_input;
    std::string score_method = "f_test", score_output;
    auto* score = app.add_subcommand("score", "Rank all features by a univariate score");
    add_input_options(*score, score_input);
    score->add_option("--method", score_method, "Scoring method (f_test)");
    score->add_option("--output,-o", score_output, "Output file (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "graces: " << e.what() << "\n";
        return kValidationError;
    }

    try {
        if (*select) return cmd_select(select_input, config, select_output, out);
        if (*synth) return cmd_synth(synth_spec, synth_output, out);
        if (*bench) return cmd_benchmark(bench_config, bench_output, bench_format, bench_timings, bench_threads, out);
        if (*score) return cmd_score(score_input, score_method, score_output, out);
    } catch (const InvalidArgument& e) {
        err << "graces: " << e.what() << "\n";
        return kValidationError;
    } catch (const Exhausted& e) {
        err << "graces: " << e.what() << "\n";
        return kValidationError;
    } catch (const ParseError& e) {
        err << "graces: " << e.what() << "\n";
        return kIoError;
    } catch (const IoError& e) {
        err << "graces: " << e.what() << "\n";
        return kIoError;
    } catch (const TrainingDiverged& e) {
        err << "graces: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "graces: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kValidationError;
}

}  // namespace graces::cli
