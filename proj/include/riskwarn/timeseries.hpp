#ifndef RISKWARN_TIMESERIES_HPP
#define RISKWARN_TIMESERIES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riskwarn/detail/linalg.hpp"
#include "riskwarn/rng.hpp"

namespace riskwarn::timeseries {

// ============================================================================
// Types
// ============================================================================

/// Ordered real-valued observations. `origin` is the index of the first
/// observation when the series is a window into a longer record.
struct TimeSeries {
    std::vector<double> values;
    std::optional<std::int64_t> origin;

    TimeSeries() = default;
    TimeSeries(std::initializer_list<double> v) : values(v) {}
    explicit TimeSeries(std::vector<double> v) : values(std::move(v)) {}

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    double back() const { return values.back(); }

    bool all_finite() const {
        for (double v : values) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }
};

/// True iff 1 - a1*z - ... - ap*z^p has all roots strictly outside the unit
/// circle. Uses the Levinson step-down recursion: the polynomial is stable
/// exactly when every reflection coefficient has magnitude below one.
inline bool ar_polynomial_stationary(const std::vector<double>& coeffs) {
    std::vector<double> a = coeffs;
    for (std::size_t m = a.size(); m >= 1; --m) {
        const double k = a[m - 1];
        if (std::fabs(k) >= 1.0) return false;
        if (m == 1) break;
        const double denom = 1.0 - k * k;
        std::vector<double> next(m - 1);
        for (std::size_t j = 0; j < m - 1; ++j) {
            next[j] = (a[j] + k * a[m - 2 - j]) / denom;
        }
        a = std::move(next);
    }
    return true;
}

/// ARMA(p,q): x_t = c + sum_i phi_i x_{t-i} + eps_t + sum_j theta_j eps_{t-j}.
struct ArmaModel {
    int p = 0;
    int q = 0;
    double c = 0.0;
    std::vector<double> phi;
    std::vector<double> theta;
    double sigma2 = 1.0;

    bool stationary() const { return ar_polynomial_stationary(phi); }

    /// 1 + theta_1 z + ... + theta_q z^q has all roots outside the unit circle.
    bool invertible() const {
        std::vector<double> negated(theta.size());
        for (std::size_t j = 0; j < theta.size(); ++j) negated[j] = -theta[j];
        return ar_polynomial_stationary(negated);
    }

    void validate() const {
        if (p < 0 || q < 0) throw std::invalid_argument("arma: negative order");
        if (static_cast<int>(phi.size()) != p) throw std::invalid_argument("arma: phi size != p");
        if (static_cast<int>(theta.size()) != q) throw std::invalid_argument("arma: theta size != q");
        if (!(sigma2 > 0.0) && sigma2 != 0.0) throw std::invalid_argument("arma: sigma2 must be >= 0");
        for (double v : phi) {
            if (!std::isfinite(v)) throw std::invalid_argument("arma: non-finite phi");
        }
        for (double v : theta) {
            if (!std::isfinite(v)) throw std::invalid_argument("arma: non-finite theta");
        }
        if (!std::isfinite(c)) throw std::invalid_argument("arma: non-finite intercept");
    }
};

/// ARCH(p) with mean equation y_t = b*x_t + eps_t and conditional variance
/// sigma_t^2 = a0 + sum_i a_i eps_{t-i}^2.
struct ArchModel {
    double b = 0.0;
    double a0 = 1.0;
    std::vector<double> a;

    int order() const { return static_cast<int>(a.size()); }

    double lag_sum() const {
        double s = 0.0;
        for (double v : a) s += v;
        return s;
    }

    void validate() const {
        if (!(a0 > 0.0)) throw std::invalid_argument("arch: a0 must be positive");
        for (double v : a) {
            if (v < 0.0 || !std::isfinite(v)) {
                throw std::invalid_argument("arch: lag coefficients must be >= 0");
            }
        }
        if (!std::isfinite(b)) throw std::invalid_argument("arch: non-finite b");
    }
};

// ============================================================================
// Differencing
// ============================================================================

/// d-th order difference; length shrinks by d. difference(s, 0) == s.
inline TimeSeries difference(const TimeSeries& series, int d) {
    if (d < 0) throw std::invalid_argument("difference: negative order");
    if (series.size() <= static_cast<std::size_t>(d)) {
        throw std::invalid_argument("difference: series too short for order " + std::to_string(d));
    }
    std::vector<double> v = series.values;
    for (int round = 0; round < d; ++round) {
        std::vector<double> next(v.size() - 1);
        for (std::size_t i = 0; i + 1 < v.size(); ++i) next[i] = v[i + 1] - v[i];
        v = std::move(next);
    }
    TimeSeries out(std::move(v));
    if (series.origin) out.origin = *series.origin + d;
    return out;
}

// ============================================================================
// ARMA simulation / estimation / forecasting
// ============================================================================

inline TimeSeries arma_simulate(const ArmaModel& model, std::size_t n,
                                std::size_t burn_in, std::uint64_t seed) {
    model.validate();
    if (n == 0) throw std::invalid_argument("arma_simulate: n must be >= 1");
    if (!model.stationary()) {
        throw std::invalid_argument("arma_simulate: non-stationary AR polynomial");
    }

    Rng rng(seed);
    const double sd = std::sqrt(model.sigma2);
    std::vector<double> xlag(model.p, 0.0);   // xlag[0] = x_{t-1}
    std::vector<double> elag(model.q, 0.0);

    std::vector<double> out;
    out.reserve(n);
    const std::size_t total = burn_in + n;
    for (std::size_t t = 0; t < total; ++t) {
        const double e = sd * rng.normal();
        double x = model.c + e;
        for (int i = 0; i < model.p; ++i) x += model.phi[i] * xlag[i];
        for (int j = 0; j < model.q; ++j) x += model.theta[j] * elag[j];
        if (model.p > 0) {
            for (int i = model.p - 1; i > 0; --i) xlag[i] = xlag[i - 1];
            xlag[0] = x;
        }
        if (model.q > 0) {
            for (int j = model.q - 1; j > 0; --j) elag[j] = elag[j - 1];
            elag[0] = e;
        }
        if (t >= burn_in) out.push_back(x);
    }
    return TimeSeries(std::move(out));
}

/// One-step innovations under the model, conditioning on the first p
/// observations; entries before index p are zero by convention.
inline std::vector<double> arma_residuals(const ArmaModel& model, const TimeSeries& series) {
    model.validate();
    const std::size_t n = series.size();
    if (n < static_cast<std::size_t>(model.p)) {
        throw std::invalid_argument("arma_residuals: series shorter than AR order");
    }
    std::vector<double> eps(n, 0.0);
    for (std::size_t t = static_cast<std::size_t>(model.p); t < n; ++t) {
        double pred = model.c;
        for (int i = 1; i <= model.p; ++i) pred += model.phi[i - 1] * series[t - i];
        for (int j = 1; j <= model.q; ++j) {
            if (t >= static_cast<std::size_t>(j)) pred += model.theta[j - 1] * eps[t - j];
        }
        eps[t] = series[t] - pred;
    }
    return eps;
}

namespace detail_arma {

/// Mean conditional sum of squares over t = p..n-1, with pre-sample
/// innovations fixed at zero.
inline double css_objective(const std::vector<double>& x, int p, int q,
                            double c, const std::vector<double>& phi,
                            const std::vector<double>& theta) {
    const std::size_t n = x.size();
    std::vector<double> eps(n, 0.0);
    double ss = 0.0;
    for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) {
        double pred = c;
        for (int i = 1; i <= p; ++i) pred += phi[i - 1] * x[t - i];
        for (int j = 1; j <= q; ++j) {
            if (t >= static_cast<std::size_t>(j)) pred += theta[j - 1] * eps[t - j];
        }
        eps[t] = x[t] - pred;
        ss += eps[t] * eps[t];
    }
    return ss / static_cast<double>(n - static_cast<std::size_t>(p));
}

/// Analytic gradient of the mean CSS objective. The innovation derivatives
/// follow the same recursion as the innovations themselves.
inline std::vector<double> css_gradient(const std::vector<double>& x, int p, int q,
                                        double c, const std::vector<double>& phi,
                                        const std::vector<double>& theta) {
    const std::size_t n = x.size();
    const int k = 1 + p + q;  // parameter order: c, phi..., theta...
    std::vector<double> eps(n, 0.0);
    std::vector<std::vector<double>> deps(static_cast<std::size_t>(k),
                                          std::vector<double>(n, 0.0));
    std::vector<double> grad(static_cast<std::size_t>(k), 0.0);

    for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) {
        double pred = c;
        for (int i = 1; i <= p; ++i) pred += phi[i - 1] * x[t - i];
        for (int j = 1; j <= q; ++j) {
            if (t >= static_cast<std::size_t>(j)) pred += theta[j - 1] * eps[t - j];
        }
        eps[t] = x[t] - pred;

        for (int w = 0; w < k; ++w) {
            double d;
            if (w == 0) {
                d = -1.0;
            } else if (w <= p) {
                d = -x[t - static_cast<std::size_t>(w)];
            } else {
                const int j = w - p;  // theta_j, 1-based
                d = (t >= static_cast<std::size_t>(j)) ? -eps[t - j] : 0.0;
            }
            for (int j = 1; j <= q; ++j) {
                if (t >= static_cast<std::size_t>(j)) {
                    d -= theta[j - 1] * deps[w][t - j];
                }
            }
            deps[w][t] = d;
            grad[w] += 2.0 * eps[t] * d;
        }
    }
    const double scale = 1.0 / static_cast<double>(n - static_cast<std::size_t>(p));
    for (double& g : grad) g *= scale;
    return grad;
}

}  // namespace detail_arma

/// Fits ARMA(p,q) by conditional least squares. Pure AR (q = 0) reduces to
/// ordinary least squares on the lagged design; MA terms are estimated by
/// gradient descent with backtracking on the CSS objective.
inline ArmaModel arma_fit(const TimeSeries& series, int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("arma_fit: negative order");
    const std::size_t min_len = 10 * static_cast<std::size_t>(p + q + 1);
    if (series.size() < min_len) {
        throw std::invalid_argument("arma_fit: series too short for requested orders");
    }
    if (!series.all_finite()) throw std::invalid_argument("arma_fit: non-finite values");

    const std::vector<double>& x = series.values;
    const std::size_t n = x.size();

    ArmaModel model;
    model.p = p;
    model.q = q;
    model.phi.assign(static_cast<std::size_t>(p), 0.0);
    model.theta.assign(static_cast<std::size_t>(q), 0.0);

    // AR part (or plain mean) by OLS; also the starting point when q > 0.
    if (p == 0) {
        model.c = detail::mean(x);
    } else {
        std::vector<std::vector<double>> design;
        std::vector<double> y;
        design.reserve(n - static_cast<std::size_t>(p));
        for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) {
            std::vector<double> row(static_cast<std::size_t>(p) + 1, 1.0);
            for (int i = 1; i <= p; ++i) row[static_cast<std::size_t>(i)] = x[t - i];
            design.push_back(std::move(row));
            y.push_back(x[t]);
        }
        std::vector<double> beta = detail::ols(design, y);
        model.c = beta[0];
        for (int i = 0; i < p; ++i) model.phi[static_cast<std::size_t>(i)] = beta[static_cast<std::size_t>(i) + 1];
    }

    if (q > 0) {
        // Gradient descent with backtracking; steps into a non-stationary or
        // non-invertible region are rejected outright.
        const int max_iters = 10000;
        const double tol = 1e-8;

        std::vector<double> params(static_cast<std::size_t>(1 + p + q), 0.0);
        params[0] = model.c;
        for (int i = 0; i < p; ++i) params[static_cast<std::size_t>(1 + i)] = model.phi[static_cast<std::size_t>(i)];

        auto unpack = [&](const std::vector<double>& w, double& c,
                          std::vector<double>& phi, std::vector<double>& theta) {
            c = w[0];
            phi.assign(w.begin() + 1, w.begin() + 1 + p);
            theta.assign(w.begin() + 1 + p, w.end());
        };
        auto admissible = [&](const std::vector<double>& w) {
            double c;
            std::vector<double> phi, theta;
            unpack(w, c, phi, theta);
            if (!ar_polynomial_stationary(phi)) return false;
            std::vector<double> neg(theta.size());
            for (std::size_t j = 0; j < theta.size(); ++j) neg[j] = -theta[j];
            return ar_polynomial_stationary(neg);
        };
        auto objective = [&](const std::vector<double>& w) {
            double c;
            std::vector<double> phi, theta;
            unpack(w, c, phi, theta);
            return detail_arma::css_objective(x, p, q, c, phi, theta);
        };

        if (!admissible(params)) {
            // OLS start can be non-stationary on awkward samples; fall back
            // to a shrunken AR part.
            for (int i = 0; i < p; ++i) params[static_cast<std::size_t>(1 + i)] *= 0.5;
            if (!admissible(params)) {
                std::fill(params.begin() + 1, params.end(), 0.0);
            }
        }

        double f = objective(params);
        double step = 0.1;
        bool converged = false;
        for (int iter = 0; iter < max_iters; ++iter) {
            double c;
            std::vector<double> phi, theta;
            unpack(params, c, phi, theta);
            std::vector<double> g = detail_arma::css_gradient(x, p, q, c, phi, theta);

            std::vector<double> trial(params.size());
            bool accepted = false;
            while (step > 1e-16) {
                for (std::size_t i = 0; i < params.size(); ++i) trial[i] = params[i] - step * g[i];
                if (admissible(trial)) {
                    const double ft = objective(trial);
                    if (ft <= f) {
                        const double improvement = f - ft;
                        params = trial;
                        f = ft;
                        step *= 1.5;
                        accepted = true;
                        if (improvement < tol) converged = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if (!accepted) converged = true;  // no admissible descent step left
            if (converged) break;
        }
        if (!converged) {
            throw std::runtime_error("arma_fit: optimizer did not converge within iteration cap");
        }

        unpack(params, model.c, model.phi, model.theta);
    }

    if (!model.stationary()) {
        throw std::runtime_error("arma_fit: fitted AR polynomial is non-stationary");
    }

    const std::vector<double> eps = arma_residuals(model, series);
    double ss = 0.0;
    for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) ss += eps[t] * eps[t];
    model.sigma2 = ss / static_cast<double>(n - static_cast<std::size_t>(p));
    return model;
}

/// Iterated conditional-expectation forecasts; future innovations enter as
/// zero, past ones are taken from `residuals`.
inline std::vector<double> arma_forecast(const ArmaModel& model, const TimeSeries& history,
                                         const TimeSeries& residuals, int h) {
    model.validate();
    if (h < 1) throw std::invalid_argument("arma_forecast: horizon must be >= 1");
    if (history.size() < static_cast<std::size_t>(model.p)) {
        throw std::invalid_argument("arma_forecast: insufficient history for AR order");
    }
    if (residuals.size() < static_cast<std::size_t>(model.q)) {
        throw std::invalid_argument("arma_forecast: insufficient residuals for MA order");
    }

    const long nh = static_cast<long>(history.size());
    const long ne = static_cast<long>(residuals.size());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(h));

    for (int k = 1; k <= h; ++k) {
        double v = model.c;
        for (int i = 1; i <= model.p; ++i) {
            const long idx = k - i;  // steps ahead of the last observation
            const double past = (idx >= 1)
                                    ? out[static_cast<std::size_t>(idx - 1)]
                                    : history[static_cast<std::size_t>(nh - 1 + idx)];
            v += model.phi[static_cast<std::size_t>(i - 1)] * past;
        }
        for (int j = 1; j <= model.q; ++j) {
            const long idx = k - j;
            if (idx < 1) {  // future innovations have conditional mean zero
                v += model.theta[static_cast<std::size_t>(j - 1)] *
                     residuals[static_cast<std::size_t>(ne - 1 + idx)];
            }
        }
        out.push_back(v);
    }
    return out;
}

// ============================================================================
// ARCH estimation / evaluation / simulation
// ============================================================================

/// sigma_t^2 = a0 + sum_i a_i * eps_{t-i}^2, with history given oldest first.
inline double arch_variance(const ArchModel& model, const TimeSeries& residual_history) {
    model.validate();
    const int p = model.order();
    if (residual_history.size() < static_cast<std::size_t>(p)) {
        throw std::invalid_argument("arch_variance: insufficient residual history");
    }
    double s2 = model.a0;
    const std::size_t n = residual_history.size();
    for (int i = 1; i <= p; ++i) {
        const double e = residual_history[n - static_cast<std::size_t>(i)];
        s2 += model.a[static_cast<std::size_t>(i - 1)] * e * e;
    }
    return s2;
}

namespace detail_arch {

inline ArchModel fit_from_residuals(const std::vector<double>& eps, int p, double b) {
    const std::size_t n = eps.size();
    if (p < 1) throw std::invalid_argument("arch_fit: order must be >= 1");
    if (n < 10 * static_cast<std::size_t>(p + 1)) {
        throw std::invalid_argument("arch_fit: series too short for requested order");
    }
    bool any_nonzero = false;
    for (double e : eps) {
        if (!std::isfinite(e)) throw std::invalid_argument("arch_fit: non-finite residual");
        if (e != 0.0) any_nonzero = true;
    }
    if (!any_nonzero) throw std::invalid_argument("arch_fit: all residuals are zero");

    std::vector<std::vector<double>> design;
    std::vector<double> y;
    design.reserve(n - static_cast<std::size_t>(p));
    for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) {
        std::vector<double> row(static_cast<std::size_t>(p) + 1, 1.0);
        for (int i = 1; i <= p; ++i) {
            const double e = eps[t - static_cast<std::size_t>(i)];
            row[static_cast<std::size_t>(i)] = e * e;
        }
        design.push_back(std::move(row));
        y.push_back(eps[t] * eps[t]);
    }
    std::vector<double> beta = detail::ols(design, y);

    ArchModel model;
    model.b = b;
    model.a0 = std::max(beta[0], 1e-8);
    model.a.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        model.a[static_cast<std::size_t>(i)] = std::max(beta[static_cast<std::size_t>(i) + 1], 0.0);
    }
    return model;
}

}  // namespace detail_arch

/// OLS of squared residuals on their own lags, clipped to the positivity
/// constraints. The mean-equation coefficient stays at zero.
inline ArchModel arch_fit(const TimeSeries& residuals, int p) {
    return detail_arch::fit_from_residuals(residuals.values, p, 0.0);
}

/// Variant with an exogenous regressor: first fits y = b*x by least squares
/// through the origin, then fits the variance equation on the residuals.
inline ArchModel arch_fit(const TimeSeries& y, const TimeSeries& x_exog, int p) {
    if (y.size() != x_exog.size()) {
        throw std::invalid_argument("arch_fit: regressor length mismatch");
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        sxy += x_exog[t] * y[t];
        sxx += x_exog[t] * x_exog[t];
    }
    if (sxx < 1e-12) throw std::invalid_argument("arch_fit: degenerate exogenous regressor");
    const double b = sxy / sxx;
    std::vector<double> eps(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) eps[t] = y[t] - b * x_exog[t];
    return detail_arch::fit_from_residuals(eps, p, b);
}

/// eps_t = z_t * sigma_t with z_t ~ N(0,1); pre-sample state is zero, so the
/// first variance is a0.
inline TimeSeries arch_simulate(const ArchModel& model, std::size_t n, std::uint64_t seed) {
    model.validate();
    if (n == 0) throw std::invalid_argument("arch_simulate: n must be >= 1");
    if (model.lag_sum() >= 1.0) {
        throw std::invalid_argument("arch_simulate: lag coefficients sum to >= 1");
    }

    Rng rng(seed);
    const int p = model.order();
    std::vector<double> elag(static_cast<std::size_t>(p), 0.0);  // elag[0] = eps_{t-1}
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        double s2 = model.a0;
        for (int i = 0; i < p; ++i) s2 += model.a[static_cast<std::size_t>(i)] * elag[static_cast<std::size_t>(i)] * elag[static_cast<std::size_t>(i)];
        const double e = std::sqrt(s2) * rng.normal();
        for (int i = p - 1; i > 0; --i) elag[static_cast<std::size_t>(i)] = elag[static_cast<std::size_t>(i - 1)];
        if (p > 0) elag[0] = e;
        out.push_back(e);
    }
    return TimeSeries(std::move(out));
}

// ============================================================================
// CSV I/O (single column, header "value")
// ============================================================================

inline void save_series_csv(const TimeSeries& series, std::ostream& out) {
    out << "value\n";
    char buf[64];
    for (double v : series.values) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << '\n';
    }
}

inline TimeSeries load_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("series csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "value") throw std::runtime_error("series csv: expected header 'value'");

    TimeSeries series;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || *end != '\0' || !std::isfinite(v)) {
            throw std::runtime_error("series csv: bad value at row " + std::to_string(row));
        }
        series.values.push_back(v);
    }
    return series;
}

}  // namespace riskwarn::timeseries

#endif  // RISKWARN_TIMESERIES_HPP
