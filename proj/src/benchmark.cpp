#include "graces/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "graces/errors.hpp"
#include "graces/rng.hpp"
#include "graces/stats.hpp"

namespace graces {

namespace {

const std::set<std::string> kConfigKeys{"k",       "delta",   "h1",           "h2",
                                        "lr",      "m",       "sigma2",       "alpha",
                                        "epochs",  "dropout_prob", "seed",    "standardize",
                                        "rescale_dropout", "warm_start", "threads"};

void reject_unknown(const Json& json, const std::set<std::string>& allowed, const std::string& where) {
    if (!json.is_object()) throw InvalidArgument(where + ": expected an object");
    for (const auto& [key, value] : json.items())
        if (!allowed.count(key)) throw InvalidArgument(where + ": unknown key '" + key + "'");
}

template <typename T>
std::vector<T> list_of(const Json& json, const std::string& key) {
    if (!json.contains(key)) return {};
    const Json& v = json.at(key);
    if (!v.is_array() || v.empty()) throw InvalidArgument("grid: '" + key + "' must be a nonempty array");
    return v.get<std::vector<T>>();
}

GracesGrid grid_from_json(const Json& json) {
    reject_unknown(json, {"delta", "h1", "h2", "lr", "m", "sigma2", "alpha", "epochs", "dropout_prob"}, "grid");
    GracesGrid grid;
    grid.delta = list_of<double>(json, "delta");
    grid.h1 = list_of<std::size_t>(json, "h1");
    grid.h2 = list_of<std::size_t>(json, "h2");
    grid.learning_rate = list_of<double>(json, "lr");
    grid.dropout_count = list_of<std::size_t>(json, "m");
    grid.sigma2 = list_of<double>(json, "sigma2");
    grid.alpha = list_of<double>(json, "alpha");
    grid.epochs = list_of<std::size_t>(json, "epochs");
    grid.dropout_prob = list_of<double>(json, "dropout_prob");
    return grid;
}

Json grid_to_json(const GracesGrid& grid) {
    Json out = Json::object();
    auto put = [&out](const char* key, const auto& values) {
        if (!values.empty()) out[key] = values;
    };
    put("delta", grid.delta);
    put("h1", grid.h1);
    put("h2", grid.h2);
    put("lr", grid.learning_rate);
    put("m", grid.dropout_count);
    put("sigma2", grid.sigma2);
    put("alpha", grid.alpha);
    put("epochs", grid.epochs);
    put("dropout_prob", grid.dropout_prob);
    return out;
}

std::string kind_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::graces: return "graces";
        case MethodKind::f_test: return "f_test";
        case MethodKind::external: return "external";
    }
    return "?";
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

struct LoadedDataset {
    std::optional<Dataset> data;
    std::string error;
};

LoadedDataset load_source(const DatasetSource& source) {
    LoadedDataset out;
    try {
        out.data = source.synthetic ? make_classification(*source.synthetic)
                                    : load_delimited(source.path, source.options);
        out.data->validate();
    } catch (const std::exception& e) {
        out.error = e.what();
        out.data.reset();
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string csv_number(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

}  // namespace

Json graces_config_to_json(const GracesConfig& c) {
    return Json{{"k", c.k},
                {"delta", c.delta},
                {"h1", c.h1},
                {"h2", c.h2},
                {"lr", c.learning_rate},
                {"m", c.dropout_count},
                {"sigma2", c.sigma2},
                {"alpha", c.alpha},
                {"epochs", c.epochs},
                {"dropout_prob", c.dropout_prob},
                {"seed", c.seed},
                {"standardize", c.standardize},
                {"rescale_dropout", c.rescale_dropout},
                {"warm_start", c.warm_start},
                {"threads", c.threads}};
}

GracesConfig graces_config_from_json(const Json& json, const GracesConfig& base) {
    reject_unknown(json, kConfigKeys, "graces config");
    GracesConfig c = base;
    try {
        if (json.contains("k")) c.k = json["k"].get<std::size_t>();
        if (json.contains("delta")) c.delta = json["delta"].get<double>();
        if (json.contains("h1")) c.h1 = json["h1"].get<std::size_t>();
        if (json.contains("h2")) c.h2 = json["h2"].get<std::size_t>();
        if (json.contains("lr")) c.learning_rate = json["lr"].get<double>();
        if (json.contains("m")) c.dropout_count = json["m"].get<std::size_t>();
        if (json.contains("sigma2")) c.sigma2 = json["sigma2"].get<double>();
        if (json.contains("alpha")) c.alpha = json["alpha"].get<double>();
        if (json.contains("epochs")) c.epochs = json["epochs"].get<std::size_t>();
        if (json.contains("dropout_prob")) c.dropout_prob = json["dropout_prob"].get<double>();
        if (json.contains("seed")) c.seed = json["seed"].get<std::uint64_t>();
        if (json.contains("standardize")) c.standardize = json["standardize"].get<bool>();
        if (json.contains("rescale_dropout")) c.rescale_dropout = json["rescale_dropout"].get<bool>();
        if (json.contains("warm_start")) c.warm_start = json["warm_start"].get<bool>();
        if (json.contains("threads")) c.threads = json["threads"].get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("graces config: ") + e.what());
    }
    return c;
}

void BenchmarkConfig::validate() const {
    if (replicates == 0) throw InvalidArgument("benchmark: replicates must be at least 1");
    if (k_min < 1 || k_max < k_min) throw InvalidArgument("benchmark: need 1 <= k_min <= k_max");
    split.validate();
    if (svm.c <= 0.0 || svm.epochs == 0) throw InvalidArgument("benchmark: invalid SVM settings");
    if (datasets.empty()) throw InvalidArgument("benchmark: no datasets");
    if (methods.empty()) throw InvalidArgument("benchmark: no methods");
    std::set<std::string> names;
    for (const auto& d : datasets)
        if (!names.insert(d.name).second) throw InvalidArgument("benchmark: duplicate dataset name '" + d.name + "'");
    names.clear();
    for (const auto& m : methods) {
        if (!names.insert(m.name).second) throw InvalidArgument("benchmark: duplicate method name '" + m.name + "'");
        if (m.kind == MethodKind::graces) {
            GracesConfig probe = m.config;
            probe.k = k_max;
            probe.validate();
        }
        if (m.kind == MethodKind::external && m.rankings.empty())
            throw InvalidArgument("benchmark: external method '" + m.name + "' has no ranking file");
    }
}

BenchmarkConfig benchmark_config_from_json(const Json& json, const std::filesystem::path& base_dir) {
    reject_unknown(json, {"seed", "replicates", "k_min", "k_max", "split", "svm", "threads", "datasets", "methods"},
                   "benchmark config");
    BenchmarkConfig config;
    try {
        config.seed = json.value("seed", std::uint64_t{0});
        config.replicates = json.value("replicates", std::size_t{20});
        config.k_min = json.value("k_min", std::size_t{1});
        config.k_max = json.value("k_max", std::size_t{10});
        config.threads = json.value("threads", std::size_t{1});
        if (json.contains("split")) {
            const Json& s = json["split"];
            reject_unknown(s, {"train", "val", "test", "stratified"}, "split");
            config.split.train_fraction = s.value("train", config.split.train_fraction);
            config.split.val_fraction = s.value("val", config.split.val_fraction);
            config.split.test_fraction = s.value("test", config.split.test_fraction);
            config.split.stratified = s.value("stratified", config.split.stratified);
        }
        if (json.contains("svm")) {
            const Json& s = json["svm"];
            reject_unknown(s, {"c", "epochs"}, "svm");
            config.svm.c = s.value("c", config.svm.c);
            config.svm.epochs = s.value("epochs", config.svm.epochs);
        }
        for (const Json& d : json.value("datasets", Json::array())) {
            reject_unknown(d, {"name", "synthetic", "path", "has_header", "label_column", "delimiter"}, "dataset");
            DatasetSource source;
            source.name = d.at("name").get<std::string>();
            if (d.contains("synthetic")) {
                const Json& s = d["synthetic"];
                reject_unknown(s, {"n", "p", "q", "class_sep", "seed"}, "synthetic");
                ClassificationSpec spec;
                spec.samples = s.value("n", spec.samples);
                spec.features = s.value("p", spec.features);
                spec.informative = s.value("q", spec.informative);
                spec.class_sep = s.value("class_sep", spec.class_sep);
                spec.seed = s.value("seed", spec.seed);
                source.synthetic = spec;
            } else {
                source.path = resolve(base_dir, d.at("path").get<std::string>());
                source.options.has_header = d.value("has_header", true);
                if (d.contains("label_column")) {
                    if (d["label_column"].is_string()) source.options.label_name = d["label_column"].get<std::string>();
                    else source.options.label_index = d["label_column"].get<std::size_t>();
                }
                const std::string delim = d.value("delimiter", std::string(","));
                if (delim.size() != 1) throw InvalidArgument("dataset: delimiter must be one character");
                source.options.delimiter = delim == "\\t" ? '\t' : delim[0];
            }
            config.datasets.push_back(std::move(source));
        }
        for (const Json& m : json.value("methods", Json::array())) {
            reject_unknown(m, {"type", "name", "config", "grid", "ranking"}, "method");
            MethodSpec method;
            const std::string type = m.at("type").get<std::string>();
            if (type == "graces") method.kind = MethodKind::graces;
            else if (type == "f_test") method.kind = MethodKind::f_test;
            else if (type == "external") method.kind = MethodKind::external;
            else throw InvalidArgument("method: unknown type '" + type + "'");
            method.name = m.value("name", type);
            if (m.contains("config")) {
                if (method.kind != MethodKind::graces) throw InvalidArgument("method: only graces takes a config");
                method.config = graces_config_from_json(m["config"]);
            }
            if (m.contains("grid")) {
                if (method.kind != MethodKind::graces) throw InvalidArgument("method: only graces takes a grid");
                method.grid = grid_from_json(m["grid"]);
            }
            if (m.contains("ranking")) {
                const Json& r = m["ranking"];
                if (r.is_string()) {
                    method.rankings["*"] = resolve(base_dir, r.get<std::string>());
                } else {
                    for (const auto& [name, file] : r.items())
                        method.rankings[name] = resolve(base_dir, file.get<std::string>());
                }
            }
            config.methods.push_back(std::move(method));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("benchmark config: ") + e.what());
    }
    config.validate();
    return config;
}

Json benchmark_config_to_json(const BenchmarkConfig& config) {
    Json out;
    out["seed"] = config.seed;
    out["replicates"] = config.replicates;
    out["k_min"] = config.k_min;
    out["k_max"] = config.k_max;
    out["threads"] = config.threads;
    out["split"] = Json{{"train", config.split.train_fraction},
                        {"val", config.split.val_fraction},
                        {"test", config.split.test_fraction},
                        {"stratified", config.split.stratified}};
    out["svm"] = Json{{"c", config.svm.c}, {"epochs", config.svm.epochs}};
    out["datasets"] = Json::array();
    for (const auto& d : config.datasets) {
        Json j{{"name", d.name}};
        if (d.synthetic) {
            j["synthetic"] = Json{{"n", d.synthetic->samples},
                                  {"p", d.synthetic->features},
                                  {"q", d.synthetic->informative},
                                  {"class_sep", d.synthetic->class_sep},
                                  {"seed", d.synthetic->seed}};
        } else {
            j["path"] = d.path.string();
            j["has_header"] = d.options.has_header;
            if (d.options.label_name) j["label_column"] = *d.options.label_name;
            else j["label_column"] = d.options.label_index;
            j["delimiter"] = d.options.delimiter == '\t' ? std::string("\\t") : std::string(1, d.options.delimiter);
        }
        out["datasets"].push_back(std::move(j));
    }
    out["methods"] = Json::array();
    for (const auto& m : config.methods) {
        Json j{{"type", kind_name(m.kind)}, {"name", m.name}};
        if (m.kind == MethodKind::graces) {
            j["config"] = graces_config_to_json(m.config);
            if (m.grid) j["grid"] = grid_to_json(*m.grid);
        }
        if (m.kind == MethodKind::external) {
            Json r = Json::object();
            for (const auto& [name, path] : m.rankings) r[name] = path.string();
            j["ranking"] = std::move(r);
        }
        out["methods"].push_back(std::move(j));
    }
    return out;
}

std::vector<std::size_t> load_ranking(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ranking file " + path.string());
    std::vector<std::size_t> out;
    std::set<std::size_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first) || first[0] == '#') continue;
        std::size_t consumed = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(first, &consumed);
        } catch (const std::exception&) {
            consumed = 0;
        }
        if (consumed != first.size() || first[0] == '-')
            throw ParseError(path.string() + ": feature index expected", line_no, 1);
        if (!seen.insert(value).second)
            throw ParseError(path.string() + ": duplicate feature index " + first, line_no, 1);
        out.push_back(static_cast<std::size_t>(value));
    }
    return out;
}

std::size_t BenchmarkReport::completed_cells() const {
    std::size_t total = 0;
    for (const auto& r : records)
        for (const auto& a : r.auroc)
            if (a) ++total;
    return total;
}

BenchmarkReport run_benchmark(const BenchmarkConfig& config, bool record_timings) {
    config.validate();
    BenchmarkReport report;
    report.config_echo = benchmark_config_to_json(config);
    const std::size_t k_count = config.k_max - config.k_min + 1;

    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        const DatasetSource& source = config.datasets[d];
        const LoadedDataset loaded = load_source(source);

        std::vector<std::vector<std::size_t>> external(config.methods.size());
        std::vector<std::string> external_error(config.methods.size());
        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
            const MethodSpec& method = config.methods[mi];
            if (method.kind != MethodKind::external) continue;
            auto it = method.rankings.find(source.name);
            if (it == method.rankings.end()) it = method.rankings.find("*");
            if (it == method.rankings.end()) {
                external_error[mi] = "no ranking file for dataset '" + source.name + "'";
                continue;
            }
            try {
                external[mi] = load_ranking(it->second);
            } catch (const std::exception& e) {
                external_error[mi] = e.what();
            }
        }

        std::vector<std::vector<ReplicateRecord>> rows(config.methods.size());
        for (std::size_t r = 0; r < config.replicates; ++r) {
            const std::uint64_t split_seed = derive_seed(config.seed, "split", d, r);
            std::optional<DatasetSplit> parts;
            std::string split_error = loaded.error;
            if (loaded.data) {
                try {
                    SplitSpec spec = config.split;
                    spec.seed = split_seed;
                    parts = split(*loaded.data, spec);
                    if (config.k_max > loaded.data->features())
                        throw InvalidArgument("k_max exceeds feature count");
                } catch (const std::exception& e) {
                    split_error = e.what();
                    parts.reset();
                }
            }

            for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
                const MethodSpec& method = config.methods[mi];
                ReplicateRecord record;
                record.dataset = source.name;
                record.method = method.name;
                record.replicate = r;
                record.split_seed = split_seed;
                record.auroc.assign(k_count, std::nullopt);
                if (!parts) {
                    record.error = split_error;
                    rows[mi].push_back(std::move(record));
                    continue;
                }
                const auto started = std::chrono::steady_clock::now();
                try {
                    const Dataset& train = parts->train;
                    switch (method.kind) {
                        case MethodKind::graces: {
                            GracesConfig cfg = method.config;
                            cfg.k = config.k_max;
                            cfg.seed = derive_seed(config.seed, "graces", d, r);
                            if (config.threads > cfg.threads) cfg.threads = config.threads;
                            if (method.grid) {
                                const auto searched = grid_search(train, parts->val, *method.grid, cfg,
                                                                  config.k_max, config.svm);
                                cfg = searched.best;
                                record.chosen_config = cfg;
                            }
                            record.ranking = select_features(train.x, train.y, cfg).features;
                            break;
                        }
                        case MethodKind::f_test: {
                            auto order = rank_descending(anova_f_scores(train.x, train.y));
                            order.resize(config.k_max);
                            record.ranking = std::move(order);
                            break;
                        }
                        case MethodKind::external: {
                            if (!external_error[mi].empty()) throw InvalidArgument(external_error[mi]);
                            if (external[mi].size() < config.k_max)
                                throw InvalidArgument("ranking file lists fewer than k_max features");
                            record.ranking.assign(external[mi].begin(),
                                                  external[mi].begin() + static_cast<std::ptrdiff_t>(config.k_max));
                            break;
                        }
                    }
                    SvmConfig svm = config.svm;
                    svm.seed = derive_seed(config.seed, "svm", d, r);
                    const auto& truth = loaded.data->truth;
                    if (truth) record.correction_rate.assign(k_count, std::nullopt);
                    for (std::size_t i = 0; i < k_count; ++i) {
                        const std::size_t k = config.k_min + i;
                        try {
                            record.auroc[i] = ranking_auroc(train, parts->test, record.ranking, k, svm);
                        } catch (const std::exception& e) {
                            if (record.error.empty()) record.error = "k=" + std::to_string(k) + ": " + e.what();
                        }
                        if (truth)
                            record.correction_rate[i] =
                                correction_rate(std::span(record.ranking).subspan(0, k), *truth);
                    }
                } catch (const std::exception& e) {
                    record.error = e.what();
                }
                record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
                if (!record_timings) record.seconds = 0.0;
                rows[mi].push_back(std::move(record));
            }
        }

        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
            const auto& method_rows = rows[mi];
            std::vector<double> all_auroc, all_rate;
            for (std::size_t i = 0; i < k_count; ++i) {
                std::vector<double> values, rates;
                for (const auto& rec : method_rows) {
                    if (rec.auroc[i]) values.push_back(*rec.auroc[i]);
                    if (!rec.correction_rate.empty() && rec.correction_rate[i]) rates.push_back(*rec.correction_rate[i]);
                }
                all_auroc.insert(all_auroc.end(), values.begin(), values.end());
                all_rate.insert(all_rate.end(), rates.begin(), rates.end());
                Aggregate agg{source.name, config.methods[mi].name, config.k_min + i, values.size(),
                              mean_of(values), stderr_of(values), std::nullopt};
                if (!rates.empty()) agg.mean_correction_rate = mean_of(rates);
                report.aggregates.push_back(std::move(agg));
            }
            MethodSummary summary{source.name, config.methods[mi].name, all_auroc.size(), mean_of(all_auroc),
                                  std::nullopt};
            if (!all_rate.empty()) summary.mean_correction_rate = mean_of(all_rate);
            report.summaries.push_back(std::move(summary));
        }

        // Paired comparisons of every graces method against every other method
        // over the (replicate, k) cells both completed.
        for (std::size_t a = 0; a < config.methods.size(); ++a) {
            if (config.methods[a].kind != MethodKind::graces) continue;
            for (std::size_t b = 0; b < config.methods.size(); ++b) {
                if (a == b) continue;
                std::vector<double> xs, ys;
                for (std::size_t r = 0; r < config.replicates; ++r)
                    for (std::size_t i = 0; i < k_count; ++i)
                        if (rows[a][r].auroc[i] && rows[b][r].auroc[i]) {
                            xs.push_back(*rows[a][r].auroc[i]);
                            ys.push_back(*rows[b][r].auroc[i]);
                        }
                if (xs.size() < 2) continue;
                report.comparisons.push_back(
                    {source.name, config.methods[a].name, config.methods[b].name, paired_t_test(xs, ys)});
            }
        }

        for (auto& method_rows : rows)
            for (auto& rec : method_rows) report.records.push_back(std::move(rec));
    }
    return report;
}

Json report_to_json(const BenchmarkReport& report, bool include_timings) {
    Json out;
    out["config"] = report.config_echo;
    out["records"] = Json::array();
    for (const auto& r : report.records) {
        Json j{{"dataset", r.dataset}, {"method", r.method}, {"replicate", r.replicate}, {"split_seed", r.split_seed},
               {"ranking", r.ranking}};
        Json per_k = Json::array();
        for (std::size_t i = 0; i < r.auroc.size(); ++i) {
            Json cell{{"k", report.config_echo["k_min"].get<std::size_t>() + i}, {"auroc", optional_number(r.auroc[i])}};
            if (!r.correction_rate.empty()) cell["correction_rate"] = optional_number(r.correction_rate[i]);
            per_k.push_back(std::move(cell));
        }
        j["per_k"] = std::move(per_k);
        if (r.chosen_config) j["chosen_config"] = graces_config_to_json(*r.chosen_config);
        j["complete"] = r.error.empty();
        if (!r.error.empty()) j["error"] = r.error;
        if (include_timings) j["seconds"] = r.seconds;
        out["records"].push_back(std::move(j));
    }
    out["aggregates"] = Json::array();
    for (const auto& a : report.aggregates) {
        Json j{{"dataset", a.dataset}, {"method", a.method}, {"k", a.k}, {"count", a.count},
               {"mean_auroc", a.mean_auroc}, {"stderr_auroc", a.stderr_auroc}};
        if (a.mean_correction_rate) j["mean_correction_rate"] = *a.mean_correction_rate;
        out["aggregates"].push_back(std::move(j));
    }
    out["summaries"] = Json::array();
    for (const auto& s : report.summaries) {
        Json j{{"dataset", s.dataset}, {"method", s.method}, {"count", s.count}, {"mean_auroc", s.mean_auroc}};
        if (s.mean_correction_rate) j["mean_correction_rate"] = *s.mean_correction_rate;
        out["summaries"].push_back(std::move(j));
    }
    out["comparisons"] = Json::array();
    for (const auto& c : report.comparisons) {
        out["comparisons"].push_back(Json{{"dataset", c.dataset},
                                          {"method", c.method},
                                          {"baseline", c.baseline},
                                          {"pairs", c.test.count},
                                          {"mean_difference", c.test.mean_difference},
                                          {"t_statistic", std::isfinite(c.test.t_statistic) ? Json(c.test.t_statistic) : Json(nullptr)},
                                          {"p_value", c.test.p_value}});
    }
    return out;
}

std::string report_to_csv(const BenchmarkReport& report, bool include_timings) {
    std::ostringstream out;
    out << "# config: " << report.config_echo.dump() << '\n';
    out << "kind,dataset,method,replicate,k,auroc,correction_rate,stderr_auroc,count,error";
    if (include_timings) out << ",seconds";
    out << '\n';
    const std::size_t k_min = report.config_echo["k_min"].get<std::size_t>();
    for (const auto& r : report.records) {
        for (std::size_t i = 0; i < r.auroc.size(); ++i) {
            out << "replicate," << csv_quote(r.dataset) << ',' << csv_quote(r.method) << ',' << r.replicate << ','
                << k_min + i << ',' << csv_number(r.auroc[i]) << ','
                << (r.correction_rate.empty() ? "" : csv_number(r.correction_rate[i])) << ",,,"
                << csv_quote(r.error);
            if (include_timings) out << ',' << csv_number(r.seconds);
            out << '\n';
        }
    }
    for (const auto& a : report.aggregates) {
        out << "aggregate," << csv_quote(a.dataset) << ',' << csv_quote(a.method) << ",," << a.k << ','
            << csv_number(a.mean_auroc) << ',' << csv_number(a.mean_correction_rate) << ','
            << csv_number(a.stderr_auroc) << ',' << a.count << ',';
        if (include_timings) out << ',';
        out << '\n';
    }
    return out.str();
}

}  // namespace graces
