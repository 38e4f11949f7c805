#ifndef RISKWARN_PIPELINE_HPP
#define RISKWARN_PIPELINE_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riskwarn/bpnet.hpp"
#include "riskwarn/dataprep.hpp"
#include "riskwarn/log.hpp"
#include "riskwarn/logit.hpp"
#include "riskwarn/rng.hpp"
#include "riskwarn/serialize.hpp"
#include "riskwarn/timeseries.hpp"
#include "riskwarn/warning.hpp"

namespace riskwarn::pipeline {

using serialize::json;

/// Error tagged with the pipeline stage that raised it; the CLI surfaces it
/// as `ERROR <stage>: <message>`.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error(message), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

namespace detail_stage {

template <typename F>
auto run(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace detail_stage

// ============================================================================
// Configuration
// ============================================================================

struct PipelineConfig {
    std::string input_csv;
    std::string model_dir = "models";
    std::string output_dir = "out";
    std::uint64_t seed = 0;

    bool clean_enabled = true;
    dataprep::CleanPolicy clean_policy;

    dataprep::SplitSpec split;

    int bp_hidden = 0;  // 0 selects the default width for the data dimension
    bool bp_allow_any_width = false;
    bpnet::Activation bp_hidden_activation = bpnet::Activation::sigmoid();
    bpnet::Activation bp_output_activation = bpnet::Activation::sigmoid();
    bpnet::TrainConfig bp_train;

    logit::FitConfig logit_fit;
    double classify_threshold = 0.5;

    warning::GradeConfig grade;
};

inline PipelineConfig default_config() {
    PipelineConfig cfg;
    cfg.split.mode = dataprep::SplitMode::ByCount;
    cfg.split.test_normal = 18;
    cfg.split.test_st = 5;
    cfg.bp_train.learning_rate = 0.5;
    cfg.bp_train.max_epochs = 2000;
    cfg.bp_train.target_mse = 0.01;
    cfg.bp_train.init_scale = 0.5;
    cfg.bp_train.batch_mode = bpnet::BatchMode::PerSample;
    cfg.logit_fit.learning_rate = 1.0;
    cfg.logit_fit.max_iters = 5000;
    cfg.logit_fit.tol = 1e-6;
    cfg.logit_fit.l2 = 0.0;
    return cfg;
}

inline json config_to_json(const PipelineConfig& cfg) {
    return json{
        {"format_version", serialize::kFormatVersion},
        {"input_csv", cfg.input_csv},
        {"model_dir", cfg.model_dir},
        {"output_dir", cfg.output_dir},
        {"seed", cfg.seed},
        {"clean", json{{"enabled", cfg.clean_enabled}, {"zscore_cutoff", cfg.clean_policy.zscore_cutoff}}},
        {"split", cfg.split.mode == dataprep::SplitMode::ByCount
                      ? json{{"mode", "by_count"},
                             {"test_normal", cfg.split.test_normal},
                             {"test_st", cfg.split.test_st}}
                      : json{{"mode", "by_fraction"}, {"test_fraction", cfg.split.test_fraction}}},
        {"bpnet", json{{"hidden", cfg.bp_hidden},
                       {"allow_any_width", cfg.bp_allow_any_width},
                       {"hidden_activation", serialize::to_json(cfg.bp_hidden_activation)},
                       {"output_activation", serialize::to_json(cfg.bp_output_activation)},
                       {"learning_rate", cfg.bp_train.learning_rate},
                       {"max_epochs", cfg.bp_train.max_epochs},
                       {"target_mse", cfg.bp_train.target_mse},
                       {"init_scale", cfg.bp_train.init_scale},
                       {"batch_mode",
                        cfg.bp_train.batch_mode == bpnet::BatchMode::FullBatch ? "full_batch"
                                                                               : "per_sample"}}},
        {"logit", json{{"learning_rate", cfg.logit_fit.learning_rate},
                       {"max_iters", cfg.logit_fit.max_iters},
                       {"tol", cfg.logit_fit.tol},
                       {"l2", cfg.logit_fit.l2},
                       {"threshold", cfg.classify_threshold}}},
        {"grade", json{{"watch", cfg.grade.watch}, {"alert", cfg.grade.alert}}}};
}

inline PipelineConfig config_from_json(const json& j) {
    serialize::detail_json::check_version(j);
    PipelineConfig cfg = default_config();

    cfg.input_csv = serialize::detail_json::text(j, "input_csv");
    if (j.contains("model_dir")) cfg.model_dir = serialize::detail_json::text(j, "model_dir");
    if (j.contains("output_dir")) cfg.output_dir = serialize::detail_json::text(j, "output_dir");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("clean")) {
        const json& c = j.at("clean");
        if (c.contains("enabled")) cfg.clean_enabled = c.at("enabled").get<bool>();
        if (c.contains("zscore_cutoff")) {
            cfg.clean_policy.zscore_cutoff = serialize::detail_json::number(c, "zscore_cutoff");
        }
    }
    if (j.contains("split")) {
        const json& s = j.at("split");
        const std::string mode = serialize::detail_json::text(s, "mode");
        if (mode == "by_count") {
            cfg.split.mode = dataprep::SplitMode::ByCount;
            cfg.split.test_normal = serialize::detail_json::integer(s, "test_normal");
            cfg.split.test_st = serialize::detail_json::integer(s, "test_st");
        } else if (mode == "by_fraction") {
            cfg.split.mode = dataprep::SplitMode::ByFraction;
            cfg.split.test_fraction = serialize::detail_json::number(s, "test_fraction");
        } else {
            throw std::runtime_error("config: split.mode must be 'by_count' or 'by_fraction'");
        }
    }
    if (j.contains("bpnet")) {
        const json& b = j.at("bpnet");
        if (b.contains("hidden")) cfg.bp_hidden = serialize::detail_json::integer(b, "hidden");
        if (b.contains("allow_any_width")) cfg.bp_allow_any_width = b.at("allow_any_width").get<bool>();
        if (b.contains("hidden_activation")) {
            cfg.bp_hidden_activation = serialize::activation_from_json(b, "hidden_activation");
        }
        if (b.contains("output_activation")) {
            cfg.bp_output_activation = serialize::activation_from_json(b, "output_activation");
        }
        if (b.contains("learning_rate")) cfg.bp_train.learning_rate = serialize::detail_json::number(b, "learning_rate");
        if (b.contains("max_epochs")) cfg.bp_train.max_epochs = serialize::detail_json::integer(b, "max_epochs");
        if (b.contains("target_mse")) cfg.bp_train.target_mse = serialize::detail_json::number(b, "target_mse");
        if (b.contains("init_scale")) cfg.bp_train.init_scale = serialize::detail_json::number(b, "init_scale");
        if (b.contains("batch_mode")) {
            const std::string m = serialize::detail_json::text(b, "batch_mode");
            if (m == "full_batch") {
                cfg.bp_train.batch_mode = bpnet::BatchMode::FullBatch;
            } else if (m == "per_sample") {
                cfg.bp_train.batch_mode = bpnet::BatchMode::PerSample;
            } else {
                throw std::runtime_error("config: bpnet.batch_mode must be 'full_batch' or 'per_sample'");
            }
        }
    }
    if (j.contains("logit")) {
        const json& l = j.at("logit");
        if (l.contains("learning_rate")) cfg.logit_fit.learning_rate = serialize::detail_json::number(l, "learning_rate");
        if (l.contains("max_iters")) cfg.logit_fit.max_iters = serialize::detail_json::integer(l, "max_iters");
        if (l.contains("tol")) cfg.logit_fit.tol = serialize::detail_json::number(l, "tol");
        if (l.contains("l2")) cfg.logit_fit.l2 = serialize::detail_json::number(l, "l2");
        if (l.contains("threshold")) cfg.classify_threshold = serialize::detail_json::number(l, "threshold");
    }
    if (j.contains("grade")) {
        const json& g = j.at("grade");
        if (g.contains("watch")) cfg.grade.watch = serialize::detail_json::number(g, "watch");
        if (g.contains("alert")) cfg.grade.alert = serialize::detail_json::number(g, "alert");
    }
    cfg.grade.validate();
    return cfg;
}

inline PipelineConfig load_config(const std::string& path) {
    return detail_stage::run("config", [&] {
        return config_from_json(serialize::read_json_file(path));
    });
}

// ============================================================================
// simulate
// ============================================================================

struct CreditSimParams {
    int dim = 6;
    int n_normal = -1;  // -1 derives counts from n at the 121:14 ratio
    int n_st = -1;
    double mean_normal = 0.3;
    double mean_st = 0.7;
    double sigma = 0.1;  // shared per-feature standard deviation
};

/// Two spherical Gaussian clusters, labeled NORMAL and ST, emitted in a
/// seed-shuffled row order.
inline dataprep::Dataset simulate_credit(const CreditSimParams& params, int n, std::uint64_t seed) {
    if (params.dim < 1) throw std::invalid_argument("simulate: dim must be >= 1");
    if (!(params.sigma > 0.0)) throw std::invalid_argument("simulate: sigma must be positive");

    int n_st = params.n_st;
    int n_normal = params.n_normal;
    if (n_st < 0 && n_normal < 0) {
        if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
        n_st = static_cast<int>(std::llround(static_cast<double>(n) * 14.0 / 135.0));
        n_normal = n - n_st;
    } else if (n_st >= 0 && n_normal >= 0) {
        // explicit per-class counts win over n
    } else {
        throw std::invalid_argument("simulate: give both class counts or neither");
    }
    if (n_normal < 1 || n_st < 1) {
        throw std::invalid_argument("simulate: both classes need at least one sample");
    }

    dataprep::Dataset data;
    for (int f = 1; f <= params.dim; ++f) data.feature_names.push_back("x" + std::to_string(f));

    Rng rng(seed);
    char idbuf[32];
    for (int k = 0; k < n_normal; ++k) {
        std::snprintf(idbuf, sizeof(idbuf), "N%04d", k + 1);
        dataprep::Sample s;
        s.id = idbuf;
        s.label = dataprep::Label::Normal;
        for (int f = 0; f < params.dim; ++f) s.features.push_back(rng.normal(params.mean_normal, params.sigma));
        data.samples.push_back(std::move(s));
    }
    for (int k = 0; k < n_st; ++k) {
        std::snprintf(idbuf, sizeof(idbuf), "S%04d", k + 1);
        dataprep::Sample s;
        s.id = idbuf;
        s.label = dataprep::Label::St;
        for (int f = 0; f < params.dim; ++f) s.features.push_back(rng.normal(params.mean_st, params.sigma));
        data.samples.push_back(std::move(s));
    }
    rng.shuffle(data.samples);
    return data;
}

inline void cmd_simulate_credit(const CreditSimParams& params, int n, std::uint64_t seed,
                                const std::string& out_path) {
    detail_stage::run("simulate", [&] {
        const dataprep::Dataset data = simulate_credit(params, n, seed);
        dataprep::save_csv_file(data, out_path);
        log::info("simulate: wrote " + std::to_string(data.size()) + " samples (" +
                  std::to_string(data.count(dataprep::Label::Normal)) + " NORMAL, " +
                  std::to_string(data.count(dataprep::Label::St)) + " ST) to " + out_path);
    });
}

inline void cmd_simulate_arma(const timeseries::ArmaModel& model, std::size_t n,
                              std::size_t burn_in, std::uint64_t seed,
                              const std::string& out_path) {
    detail_stage::run("simulate", [&] {
        const timeseries::TimeSeries series = timeseries::arma_simulate(model, n, burn_in, seed);
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        timeseries::save_series_csv(series, out);
        log::info("simulate: wrote " + std::to_string(series.size()) + " values to " + out_path);
    });
}

inline void cmd_simulate_arch(const timeseries::ArchModel& model, std::size_t n,
                              std::uint64_t seed, const std::string& out_path) {
    detail_stage::run("simulate", [&] {
        const timeseries::TimeSeries series = timeseries::arch_simulate(model, n, seed);
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        timeseries::save_series_csv(series, out);
        log::info("simulate: wrote " + std::to_string(series.size()) + " values to " + out_path);
    });
}

// ============================================================================
// train
// ============================================================================

struct TrainArtifacts {
    bpnet::TrainResult bp;
    logit::FitResult lr;
    dataprep::NormalizationSpec normalizer;
    dataprep::Split split;
    dataprep::CleanReport clean_report;
};

namespace detail_pipe {

/// load -> clean -> split, shared by train and evaluate so both sides see
/// the same partition for a given config.
inline std::pair<dataprep::Split, dataprep::CleanReport> prepare(const PipelineConfig& cfg) {
    dataprep::Dataset data = detail_stage::run("load", [&] {
        return dataprep::load_csv_file(cfg.input_csv);
    });
    log::info("load: " + std::to_string(data.size()) + " samples, " +
              std::to_string(data.dim()) + " features from " + cfg.input_csv);

    dataprep::CleanReport report;
    if (cfg.clean_enabled) {
        auto cleaned = detail_stage::run("clean", [&] {
            return dataprep::clean(data, cfg.clean_policy);
        });
        data = std::move(cleaned.first);
        report = std::move(cleaned.second);
        log::info("clean: removed " + std::to_string(report.removed.size()) + " samples");
        for (const auto& flag : report.flags) log::debug("clean: " + flag);
    }

    dataprep::SplitSpec split_spec = cfg.split;
    split_spec.seed = mix_seed(cfg.seed, 1);
    dataprep::Split split = detail_stage::run("split", [&] {
        return dataprep::stratified_split(data, split_spec);
    });
    log::info("split: train " + std::to_string(split.train.size()) + " / test " +
              std::to_string(split.test.size()));
    return {std::move(split), std::move(report)};
}

inline void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + path + "': " + ec.message());
}

}  // namespace detail_pipe

inline TrainArtifacts run_training(const PipelineConfig& cfg) {
    auto [split, clean_report] = detail_pipe::prepare(cfg);

    TrainArtifacts artifacts;
    artifacts.split = std::move(split);
    artifacts.clean_report = std::move(clean_report);

    artifacts.normalizer = detail_stage::run("normalize", [&] {
        return dataprep::fit_normalizer(artifacts.split.train);
    });
    const dataprep::Dataset train_norm = detail_stage::run("normalize", [&] {
        return dataprep::apply_normalizer(artifacts.normalizer, artifacts.split.train);
    });

    artifacts.bp = detail_stage::run("train-bpnet", [&] {
        const int n = static_cast<int>(train_norm.dim());
        const int r = cfg.bp_hidden > 0 ? cfg.bp_hidden : bpnet::default_hidden_width(n);
        bpnet::TrainConfig tc = cfg.bp_train;
        tc.seed = mix_seed(cfg.seed, 2);
        bpnet::Network net = bpnet::init_network(n, r, cfg.bp_hidden_activation,
                                                 cfg.bp_output_activation, tc.init_scale,
                                                 tc.seed, cfg.bp_allow_any_width);
        return bpnet::train(std::move(net), train_norm, tc);
    });
    {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", artifacts.bp.history.final_mse());
        log::info("train-bpnet: " + std::to_string(artifacts.bp.history.epochs_run()) +
                  " epochs, final mse " + buf);
    }

    artifacts.lr = detail_stage::run("train-logit", [&] {
        logit::FitResult r = logit::fit_logit(train_norm, cfg.logit_fit);
        r.model.threshold = cfg.classify_threshold;
        return r;
    });
    log::info("train-logit: " + std::to_string(artifacts.lr.iterations) + " iterations" +
              (artifacts.lr.converged ? " (converged)" : ""));
    return artifacts;
}

inline json summary_json(const PipelineConfig& cfg, const TrainArtifacts& a) {
    const auto& split = a.split;
    return json{
        {"format_version", serialize::kFormatVersion},
        {"seed", cfg.seed},
        {"clean", json{{"removed", a.clean_report.removed.size()}}},
        {"split", json{{"train_total", split.train.size()},
                       {"train_normal", split.train.count(dataprep::Label::Normal)},
                       {"train_st", split.train.count(dataprep::Label::St)},
                       {"test_total", split.test.size()},
                       {"test_normal", split.test.count(dataprep::Label::Normal)},
                       {"test_st", split.test.count(dataprep::Label::St)}}},
        {"bpnet", json{{"final_mse", a.bp.history.final_mse()},
                       {"epochs", a.bp.history.epochs_run()},
                       {"status", a.bp.history.status == bpnet::TrainStatus::TargetReached
                                      ? "target_reached"
                                      : "max_epochs"}}},
        {"logit", json{{"iterations", a.lr.iterations},
                       {"converged", a.lr.converged},
                       {"final_objective", a.lr.objective_trace.back()}}}};
}

/// load -> clean -> split -> normalize -> fit both models -> persist.
inline TrainArtifacts cmd_train(const PipelineConfig& cfg) {
    TrainArtifacts artifacts = run_training(cfg);

    detail_stage::run("persist", [&] {
        detail_pipe::ensure_dir(cfg.model_dir);
        detail_pipe::ensure_dir(cfg.output_dir);

        serialize::write_json_file(cfg.model_dir + "/bpnet.json", serialize::to_json(artifacts.bp.net));
        serialize::write_json_file(cfg.model_dir + "/logit.json", serialize::to_json(artifacts.lr.model));

        json names = json::array();
        for (const auto& n : artifacts.split.train.feature_names) names.push_back(n);
        serialize::write_json_file(
            cfg.model_dir + "/pipeline.json",
            json{{"format_version", serialize::kFormatVersion},
                 {"feature_names", std::move(names)},
                 {"normalizer", serialize::to_json(artifacts.normalizer)},
                 {"grade", json{{"watch", cfg.grade.watch}, {"alert", cfg.grade.alert}}},
                 {"threshold", cfg.classify_threshold}});

        std::ofstream hist(cfg.output_dir + "/history.csv");
        if (!hist) throw std::runtime_error("cannot write '" + cfg.output_dir + "/history.csv'");
        bpnet::save_history_csv(artifacts.bp.history, hist);

        serialize::write_json_file(cfg.output_dir + "/summary.json", summary_json(cfg, artifacts));
    });
    return artifacts;
}

// ============================================================================
// evaluate
// ============================================================================

struct StoredPipeline {
    std::vector<std::string> feature_names;
    dataprep::NormalizationSpec normalizer;
    warning::GradeConfig grade;
    double threshold = 0.5;
};

inline StoredPipeline load_stored_pipeline(const std::string& model_dir) {
    const json j = serialize::read_json_file(model_dir + "/pipeline.json");
    serialize::detail_json::check_version(j);
    StoredPipeline sp;
    const json& names = serialize::detail_json::require(j, "feature_names");
    if (!names.is_array()) throw std::runtime_error("schema: field 'feature_names' must be an array");
    for (const auto& n : names) sp.feature_names.push_back(n.get<std::string>());
    sp.normalizer = serialize::normalizer_from_json(serialize::detail_json::require(j, "normalizer"));
    const json& g = serialize::detail_json::require(j, "grade");
    sp.grade.watch = serialize::detail_json::number(g, "watch");
    sp.grade.alert = serialize::detail_json::number(g, "alert");
    sp.threshold = serialize::detail_json::number(j, "threshold");
    return sp;
}

enum class ModelKind { BpNet, Logit };

struct LoadedModel {
    ModelKind kind;
    std::optional<bpnet::Network> bp;
    std::optional<logit::LogitModel> lr;

    double probability(const std::vector<double>& x) const {
        return kind == ModelKind::BpNet ? bpnet::predict(*bp, x) : logit::predict_proba(*lr, x);
    }
};

/// Model files are told apart by their schema: a network carries W1, a
/// logistic model carries coeffs.
inline LoadedModel load_model_file(const std::string& path) {
    const json j = serialize::read_json_file(path);
    LoadedModel m{ModelKind::BpNet, std::nullopt, std::nullopt};
    if (j.contains("W1")) {
        m.kind = ModelKind::BpNet;
        m.bp = serialize::network_from_json(j);
    } else if (j.contains("coeffs")) {
        m.kind = ModelKind::Logit;
        m.lr = serialize::logit_from_json(j);
    } else {
        throw std::runtime_error("schema: missing field 'W1' or 'coeffs'; not a model file");
    }
    return m;
}

/// Rebuilds the held-out test set from the config seed, scores it with the
/// stored model, and writes flat metrics JSON.
inline warning::EvalMetrics cmd_evaluate(const PipelineConfig& cfg, const std::string& model_path) {
    const LoadedModel model = detail_stage::run("load-model", [&] {
        return load_model_file(model_path);
    });
    const StoredPipeline stored = detail_stage::run("load-model", [&] {
        return load_stored_pipeline(cfg.model_dir);
    });

    auto [split, clean_report] = detail_pipe::prepare(cfg);
    (void)clean_report;

    const dataprep::Dataset test_norm = detail_stage::run("normalize", [&] {
        return dataprep::apply_normalizer(stored.normalizer, split.test);
    });

    const double threshold =
        model.kind == ModelKind::Logit ? model.lr->threshold : stored.threshold;
    const warning::EvalMetrics metrics = detail_stage::run("evaluate", [&] {
        return warning::evaluate(
            test_norm, [&model](const std::vector<double>& x) { return model.probability(x); },
            threshold);
    });

    detail_stage::run("persist", [&] {
        detail_pipe::ensure_dir(cfg.output_dir);
        const std::string name =
            model.kind == ModelKind::BpNet ? "metrics_bpnet.json" : "metrics_logit.json";
        serialize::write_json_file(cfg.output_dir + "/" + name, serialize::to_json(metrics));
    });
    return metrics;
}

// ============================================================================
// assess
// ============================================================================

inline void save_warnings_csv(const std::vector<warning::WarningReport>& reports,
                              std::ostream& out) {
    out << "id,p_bpnet,p_logit,consensus,grade\n";
    char buf[64];
    auto cell = [&buf](const std::optional<double>& v) -> std::string {
        if (!v) return "";
        std::snprintf(buf, sizeof(buf), "%.17g", *v);
        return buf;
    };
    for (const auto& r : reports) {
        out << r.id << ',' << cell(r.p_bpnet) << ',' << cell(r.p_logit) << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", r.consensus);
        out << buf << ',' << warning::grade_name(r.grade) << '\n';
    }
}

/// Normalizes incoming samples with the stored spec and emits the sorted
/// warning reports as both CSV and JSON.
inline std::vector<warning::WarningReport> cmd_assess(const PipelineConfig& cfg,
                                                      const std::string& input_csv) {
    const StoredPipeline stored = detail_stage::run("load-model", [&] {
        return load_stored_pipeline(cfg.model_dir);
    });

    warning::ModelSet models;
    detail_stage::run("load-model", [&] {
        namespace fs = std::filesystem;
        const std::string bp_path = cfg.model_dir + "/bpnet.json";
        const std::string lr_path = cfg.model_dir + "/logit.json";
        if (fs::exists(bp_path)) models.bp = serialize::network_from_json(serialize::read_json_file(bp_path));
        if (fs::exists(lr_path)) models.lr = serialize::logit_from_json(serialize::read_json_file(lr_path));
        if (!models.any()) {
            throw std::runtime_error("no trained model found in '" + cfg.model_dir + "'");
        }
    });

    const dataprep::Dataset incoming = detail_stage::run("load", [&] {
        return dataprep::load_scoring_csv_file(input_csv);
    });
    const dataprep::Dataset normalized = detail_stage::run("normalize", [&] {
        return dataprep::apply_normalizer(stored.normalizer, incoming);
    });

    const std::vector<warning::WarningReport> reports = detail_stage::run("assess", [&] {
        return warning::warn_batch(normalized, models, stored.grade);
    });

    detail_stage::run("persist", [&] {
        detail_pipe::ensure_dir(cfg.output_dir);
        std::ofstream csv(cfg.output_dir + "/warnings.csv");
        if (!csv) throw std::runtime_error("cannot write '" + cfg.output_dir + "/warnings.csv'");
        save_warnings_csv(reports, csv);
        serialize::write_json_file(cfg.output_dir + "/warnings.json", serialize::to_json(reports));
    });
    log::info("assess: " + std::to_string(reports.size()) + " reports written to " + cfg.output_dir);
    return reports;
}

}  // namespace riskwarn::pipeline

#endif  // RISKWARN_PIPELINE_HPP
