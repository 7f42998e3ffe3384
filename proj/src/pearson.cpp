#include "causal/error.hpp"
#include "causal/measures.hpp"

#include <algorithm>
#include <cmath>

namespace causal
{

double pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        fail(Errc::LengthMismatch, "pearson needs equal lengths");
    }
    const std::size_t n = x.size();
    if (n < 2) {
        fail(Errc::TooShort, "pearson needs at least two samples");
    }

    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        fail(Errc::ConstantSeries, "correlation undefined for a constant series");
    }
    // sqrt of the product keeps corr(x, x) at exactly 1; the split form only
    // guards against the product leaving the normal range.
    double denom = std::sqrt(sxx * syy);
    if (!std::isnormal(denom)) {
        denom = std::sqrt(sxx) * std::sqrt(syy);
    }
    return std::clamp(sxy / denom, -1.0, 1.0);
}

double correlation_distance(double rho)
{
    if (!(rho >= -1.0 && rho <= 1.0)) {
        fail(Errc::OutOfRange, "correlation must lie in [-1, 1]");
    }
    return std::sqrt(2.0 * (1.0 - rho));
}

} // namespace causal
