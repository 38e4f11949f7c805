#ifndef RISKWARN_DETAIL_LINALG_HPP
#define RISKWARN_DETAIL_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace riskwarn::detail {

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// A is row-major k x k. Intended for the small normal-equation systems
/// that back the least-squares estimators.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                        std::vector<double> b) {
    const std::size_t k = b.size();
    if (a.size() != k) throw std::invalid_argument("solve_linear: shape mismatch");

    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < k; ++row) {
            if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
        }
        if (std::fabs(a[pivot][col]) < 1e-12) {
            throw std::runtime_error("solve_linear: singular system");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);

        for (std::size_t row = col + 1; row < k; ++row) {
            const double f = a[row][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < k; ++j) a[row][j] -= f * a[col][j];
            b[row] -= f * b[col];
        }
    }

    std::vector<double> x(k, 0.0);
    for (std::size_t i = k; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < k; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

/// Ordinary least squares via the normal equations. Rows of `design` are
/// observations, `y` the responses; returns the coefficient vector.
inline std::vector<double> ols(const std::vector<std::vector<double>>& design,
                               const std::vector<double>& y) {
    if (design.size() != y.size() || design.empty()) {
        throw std::invalid_argument("ols: shape mismatch");
    }
    const std::size_t n = design.size();
    const std::size_t k = design[0].size();

    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const auto& row = design[t];
        for (std::size_t i = 0; i < k; ++i) {
            xty[i] += row[i] * y[t];
            for (std::size_t j = i; j < k; ++j) xtx[i][j] += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) xtx[i][j] = xtx[j][i];
    }
    return solve_linear(std::move(xtx), std::move(xty));
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace riskwarn::detail

#endif  // RISKWARN_DETAIL_LINALG_HPP
