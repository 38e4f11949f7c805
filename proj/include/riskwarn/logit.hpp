#ifndef RISKWARN_LOGIT_HPP
#define RISKWARN_LOGIT_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riskwarn/dataprep.hpp"

namespace riskwarn::logit {

// ============================================================================
// Model
// ============================================================================

/// Numerically stable logistic function: only exponentiates a non-positive
/// magnitude, so it never overflows.
inline double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

enum class Classification { Default, NonDefault };

/// Intercept c0 plus one coefficient per explanatory variable. Probabilities
/// at or above `threshold` classify as Default.
struct LogitModel {
    double c0 = 0.0;
    std::vector<double> coeffs;
    double threshold = 0.5;

    std::size_t dim() const { return coeffs.size(); }

    void validate() const {
        if (!std::isfinite(c0)) throw std::invalid_argument("logit: non-finite intercept");
        for (double v : coeffs) {
            if (!std::isfinite(v)) throw std::invalid_argument("logit: non-finite coefficient");
        }
        if (!(threshold > 0.0 && threshold < 1.0)) {
            throw std::invalid_argument("logit: threshold must lie in (0,1)");
        }
    }
};

inline double linear_predictor(const LogitModel& model, std::span<const double> x) {
    if (x.size() != model.dim()) {
        throw std::invalid_argument("logit: feature vector has dimension " +
                                    std::to_string(x.size()) + ", model expects " +
                                    std::to_string(model.dim()));
    }
    double eta = model.c0;
    for (std::size_t i = 0; i < x.size(); ++i) eta += model.coeffs[i] * x[i];
    return eta;
}

inline double predict_proba(const LogitModel& model, std::span<const double> x) {
    return sigmoid(linear_predictor(model, x));
}

/// Ties at the threshold flag as Default; flagging the borderline case is
/// the conservative call for a risk screen.
inline Classification classify(const LogitModel& model, std::span<const double> x) {
    return predict_proba(model, x) >= model.threshold ? Classification::Default
                                                      : Classification::NonDefault;
}

// ============================================================================
// Fitting
// ============================================================================

struct FitConfig {
    double learning_rate = 1.0;
    int max_iters = 5000;
    double tol = 1e-6;   // on the gradient max-norm
    double l2 = 0.0;     // penalty on coefficients, not the intercept
};

struct FitResult {
    LogitModel model;
    std::vector<double> objective_trace;  // per accepted iteration
    bool converged = false;
    int iterations = 0;
};

namespace detail_logit {

/// Mean penalized Bernoulli log-likelihood and its gradient. Parameter
/// layout: [c0, coeffs...]. Labels are 0/1.
inline double objective_and_gradient(const std::vector<std::vector<double>>& x,
                                     const std::vector<int>& y,
                                     const std::vector<double>& params, double l2,
                                     std::vector<double>* grad_out) {
    const std::size_t n = x.size();
    const std::size_t m = params.size() - 1;
    double ll = 0.0;
    if (grad_out) grad_out->assign(params.size(), 0.0);

    for (std::size_t t = 0; t < n; ++t) {
        double eta = params[0];
        for (std::size_t f = 0; f < m; ++f) eta += params[f + 1] * x[t][f];
        // y*eta - log(1 + e^eta), with the softplus split to avoid overflow
        const double softplus =
            eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
        ll += static_cast<double>(y[t]) * eta - softplus;
        if (grad_out) {
            const double err = static_cast<double>(y[t]) - sigmoid(eta);
            (*grad_out)[0] += err;
            for (std::size_t f = 0; f < m; ++f) (*grad_out)[f + 1] += err * x[t][f];
        }
    }
    ll /= static_cast<double>(n);
    if (grad_out) {
        for (double& g : *grad_out) g /= static_cast<double>(n);
    }
    if (l2 > 0.0) {
        for (std::size_t f = 1; f < params.size(); ++f) {
            ll -= 0.5 * l2 * params[f] * params[f];
            if (grad_out) (*grad_out)[f] -= l2 * params[f];
        }
    }
    return ll;
}

}  // namespace detail_logit

/// Maximizes the (optionally L2-penalized) Bernoulli log-likelihood by
/// full-batch gradient ascent. Steps that would lower the objective are
/// rejected and the step size halved, so the recorded trace is
/// non-decreasing. ST samples are the positive (Default) class.
inline FitResult fit_logit(const dataprep::Dataset& data, const FitConfig& config) {
    if (!(config.learning_rate > 0.0)) throw std::invalid_argument("fit_logit: learning rate must be positive");
    if (config.max_iters < 1) throw std::invalid_argument("fit_logit: max_iters must be >= 1");
    if (config.l2 < 0.0) throw std::invalid_argument("fit_logit: l2 must be >= 0");

    const std::size_t n_pos = data.count(dataprep::Label::St);
    const std::size_t n_neg = data.size() - n_pos;
    if (n_pos < 2 || n_neg < 2) {
        throw std::invalid_argument("fit_logit: need at least 2 samples per class");
    }

    const std::size_t m = data.dim();
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    x.reserve(data.size());
    y.reserve(data.size());
    for (const auto& s : data.samples) {
        for (double v : s.features) {
            if (!std::isfinite(v)) throw std::invalid_argument("fit_logit: non-finite feature");
        }
        x.push_back(s.features);
        y.push_back(s.label == dataprep::Label::St ? 1 : 0);
    }

    std::vector<double> params(m + 1, 0.0);
    std::vector<double> grad;
    double obj = detail_logit::objective_and_gradient(x, y, params, config.l2, &grad);

    FitResult result;
    result.objective_trace.push_back(obj);

    double step = config.learning_rate;
    for (int iter = 0; iter < config.max_iters; ++iter) {
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::fabs(g));
        if (gmax < config.tol) {
            result.converged = true;
            break;
        }

        std::vector<double> trial(params.size());
        bool accepted = false;
        while (step > 1e-16) {
            for (std::size_t i = 0; i < params.size(); ++i) trial[i] = params[i] + step * grad[i];
            std::vector<double> trial_grad;
            const double trial_obj =
                detail_logit::objective_and_gradient(x, y, trial, config.l2, &trial_grad);
            if (!std::isfinite(trial_obj)) {
                throw std::runtime_error("fit_logit: objective diverged to a non-finite value");
            }
            if (trial_obj >= obj) {
                params = std::move(trial);
                grad = std::move(trial_grad);
                obj = trial_obj;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++result.iterations;
        if (!accepted) {
            result.converged = true;  // no ascent step improves the objective
            break;
        }
        result.objective_trace.push_back(obj);
    }

    result.model.c0 = params[0];
    result.model.coeffs.assign(params.begin() + 1, params.end());
    result.model.validate();
    return result;
}

// ============================================================================
// Multicollinearity diagnostic
// ============================================================================

struct CorrelationEntry {
    double value = 0.0;
    bool defined = false;
};

struct MulticollinearityReport {
    std::vector<std::string> feature_names;
    std::vector<std::vector<CorrelationEntry>> corr;  // m x m, unit diagonal
    std::vector<std::pair<std::size_t, std::size_t>> flagged;  // |rho| > threshold
    std::vector<std::size_t> zero_variance;
    double threshold = 0.9;
};

/// Pairwise Pearson correlations with flags for |rho| above the threshold.
/// Zero-variance features are reported separately; their off-diagonal
/// entries stay undefined rather than propagating NaN.
inline MulticollinearityReport multicollinearity_report(const dataprep::Dataset& data,
                                                        double threshold = 0.9) {
    if (data.size() < 3) throw std::invalid_argument("multicollinearity: need at least 3 samples");
    const std::size_t m = data.dim();
    if (m < 2) throw std::invalid_argument("multicollinearity: need at least 2 features");

    const std::size_t n = data.size();
    std::vector<double> mean(m, 0.0), sd(m, 0.0);
    for (std::size_t f = 0; f < m; ++f) {
        double s = 0.0;
        for (const auto& smp : data.samples) s += smp.features[f];
        mean[f] = s / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& smp : data.samples) {
            const double d = smp.features[f] - mean[f];
            ss += d * d;
        }
        sd[f] = std::sqrt(ss);
    }

    MulticollinearityReport report;
    report.threshold = threshold;
    report.feature_names = data.feature_names;
    report.corr.assign(m, std::vector<CorrelationEntry>(m));
    for (std::size_t f = 0; f < m; ++f) {
        report.corr[f][f] = {1.0, true};
        if (sd[f] == 0.0) report.zero_variance.push_back(f);
    }

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (sd[i] == 0.0 || sd[j] == 0.0) continue;  // undefined, reported via zero_variance
            double cross = 0.0;
            for (const auto& smp : data.samples) {
                cross += (smp.features[i] - mean[i]) * (smp.features[j] - mean[j]);
            }
            const double rho = cross / (sd[i] * sd[j]);
            report.corr[i][j] = {rho, true};
            report.corr[j][i] = {rho, true};
            if (std::fabs(rho) > threshold) report.flagged.emplace_back(i, j);
        }
    }
    return report;
}

}  // namespace riskwarn::logit

#endif  // RISKWARN_LOGIT_HPP
