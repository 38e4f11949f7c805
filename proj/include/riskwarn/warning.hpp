#ifndef RISKWARN_WARNING_HPP
#define RISKWARN_WARNING_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riskwarn/bpnet.hpp"
#include "riskwarn/dataprep.hpp"
#include "riskwarn/logit.hpp"

namespace riskwarn::warning {

// ============================================================================
// Risk grading
// ============================================================================

enum class Grade { Normal, Watch, Alert };

inline const char* grade_name(Grade g) {
    switch (g) {
        case Grade::Normal: return "NORMAL";
        case Grade::Watch: return "WATCH";
        case Grade::Alert: return "ALERT";
    }
    return "?";
}

struct GradeConfig {
    double watch = 0.3;
    double alert = 0.5;

    void validate() const {
        if (!(0.0 < watch && watch < alert && alert < 1.0)) {
            throw std::invalid_argument("grade: thresholds must satisfy 0 < watch < alert < 1");
        }
    }
};

inline Grade grade_probability(double p, const GradeConfig& config) {
    if (p >= config.alert) return Grade::Alert;
    if (p >= config.watch) return Grade::Watch;
    return Grade::Normal;
}

/// The fitted models feeding the decision layer; at least one must be set.
struct ModelSet {
    std::optional<bpnet::Network> bp;
    std::optional<logit::LogitModel> lr;

    bool any() const { return bp.has_value() || lr.has_value(); }
};

struct WarningReport {
    std::string id;
    std::optional<double> p_bpnet;
    std::optional<double> p_logit;
    double consensus = 0.0;
    Grade grade = Grade::Normal;
    std::string rationale;
};

namespace detail_warn {

inline std::string format_prob(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", p);
    return buf;
}

}  // namespace detail_warn

/// Scores one normalized sample with every available model; the consensus
/// is the arithmetic mean of the model probabilities.
inline WarningReport assess(const dataprep::Sample& sample, const ModelSet& models,
                            const GradeConfig& config) {
    config.validate();
    if (!models.any()) throw std::invalid_argument("assess: no models supplied");

    WarningReport report;
    report.id = sample.id;

    double sum = 0.0;
    int count = 0;
    if (models.bp) {
        report.p_bpnet = bpnet::predict(*models.bp, sample.features);
        sum += *report.p_bpnet;
        ++count;
    }
    if (models.lr) {
        report.p_logit = logit::predict_proba(*models.lr, sample.features);
        sum += *report.p_logit;
        ++count;
    }
    report.consensus = sum / static_cast<double>(count);
    report.grade = grade_probability(report.consensus, config);

    const std::string p = detail_warn::format_prob(report.consensus);
    switch (report.grade) {
        case Grade::Alert:
            report.rationale = "consensus " + p + " >= alert " + detail_warn::format_prob(config.alert);
            break;
        case Grade::Watch:
            report.rationale = "consensus " + p + " >= watch " + detail_warn::format_prob(config.watch);
            break;
        case Grade::Normal:
            report.rationale = "consensus " + p + " < watch " + detail_warn::format_prob(config.watch);
            break;
    }
    return report;
}

/// One report per sample, sorted by consensus descending; ties break on id
/// ascending so the output is stable.
inline std::vector<WarningReport> warn_batch(const dataprep::Dataset& data,
                                             const ModelSet& models,
                                             const GradeConfig& config) {
    std::vector<WarningReport> reports;
    reports.reserve(data.size());
    for (const auto& sample : data.samples) {
        reports.push_back(assess(sample, models, config));
    }
    std::sort(reports.begin(), reports.end(), [](const WarningReport& a, const WarningReport& b) {
        if (a.consensus != b.consensus) return a.consensus > b.consensus;
        return a.id < b.id;
    });
    return reports;
}

// ============================================================================
// Evaluation metrics
// ============================================================================

/// Confusion counts with ST as the positive class, plus the derived rates.
/// Rates with an empty denominator are reported as zero.
struct EvalMetrics {
    int tp = 0;
    int fp = 0;
    int tn = 0;
    int fn = 0;
    double accuracy = 0.0;
    double type_i_error = 0.0;   // FP / (FP + TN)
    double type_ii_error = 0.0;  // FN / (FN + TP)

    int total() const { return tp + fp + tn + fn; }
};

using ProbabilityFn = std::function<double(const std::vector<double>&)>;

inline EvalMetrics evaluate(const dataprep::Dataset& test, const ProbabilityFn& prob,
                            double threshold) {
    if (test.empty()) throw std::invalid_argument("evaluate: empty test set");

    EvalMetrics m;
    for (const auto& sample : test.samples) {
        const bool predicted_st = prob(sample.features) >= threshold;
        const bool actual_st = sample.label == dataprep::Label::St;
        if (predicted_st && actual_st) ++m.tp;
        else if (predicted_st && !actual_st) ++m.fp;
        else if (!predicted_st && actual_st) ++m.fn;
        else ++m.tn;
    }
    m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
    m.type_i_error = (m.fp + m.tn) > 0
                         ? static_cast<double>(m.fp) / static_cast<double>(m.fp + m.tn)
                         : 0.0;
    m.type_ii_error = (m.fn + m.tp) > 0
                          ? static_cast<double>(m.fn) / static_cast<double>(m.fn + m.tp)
                          : 0.0;
    return m;
}

inline EvalMetrics evaluate(const dataprep::Dataset& test, const bpnet::Network& net,
                            double threshold) {
    return evaluate(test, [&net](const std::vector<double>& x) { return bpnet::predict(net, x); },
                    threshold);
}

inline EvalMetrics evaluate(const dataprep::Dataset& test, const logit::LogitModel& model,
                            double threshold) {
    return evaluate(test,
                    [&model](const std::vector<double>& x) { return logit::predict_proba(model, x); },
                    threshold);
}

}  // namespace riskwarn::warning

#endif  // RISKWARN_WARNING_HPP
