#include "causal/decomposition.hpp"

#include "causal/error.hpp"
#include "causal/measures.hpp"

#include <algorithm>
#include <utility>

namespace causal
{

namespace
{

void check_aligned(const MeasureSeries &a, const MeasureSeries &b)
{
    const auto ea = a.window_ends();
    const auto eb = b.window_ends();
    if (!std::equal(ea.begin(), ea.end(), eb.begin(), eb.end())) {
        fail(Errc::MisalignedWindows, "measure series do not share window ends");
    }
}

MeasureSeries slice(const MeasureSeries &m, std::size_t begin, std::size_t count)
{
    const auto v = m.values().subspan(begin, count);
    const auto e = m.window_ends().subspan(begin, count);
    return MeasureSeries({v.begin(), v.end()}, {e.begin(), e.end()});
}

} // namespace

double nested_correlation(const MeasureSeries &a, const MeasureSeries &b)
{
    check_aligned(a, b);
    return pearson(a.values(), b.values());
}

double linear_fraction(const MeasureSeries &psi, const MeasureSeries &psi_surrogate)
{
    const double r = nested_correlation(psi, psi_surrogate);
    return r * r;
}

double nonlinear_fraction(const MeasureSeries &psi, const MeasureSeries &psi_surrogate)
{
    return 1.0 - linear_fraction(psi, psi_surrogate);
}

double fallacy(const MeasureSeries &psi, const MeasureSeries &rho)
{
    const double r = nested_correlation(psi, rho);
    return r * r;
}

DecompositionReport decompose(std::string measure_name, std::string asset_a, std::string asset_b,
                              const MeasureSeries &psi, const MeasureSeries &psi_surrogate,
                              const MeasureSeries &rho)
{
    DecompositionReport out;
    out.measure_name = std::move(measure_name);
    out.asset_a = std::move(asset_a);
    out.asset_b = std::move(asset_b);
    out.linear_fraction = linear_fraction(psi, psi_surrogate);
    out.nonlinear_fraction = 1.0 - out.linear_fraction;
    out.fallacy = fallacy(psi, rho);
    out.fallacy_linear = fallacy(psi_surrogate, rho);
    return out;
}

std::vector<WindowedReport> rolling_decompose(const std::string &measure_name,
                                              const std::string &asset_a,
                                              const std::string &asset_b,
                                              const MeasureSeries &psi,
                                              const MeasureSeries &psi_surrogate,
                                              const MeasureSeries &rho,
                                              const RollingConfig &second_level)
{
    check_aligned(psi, psi_surrogate);
    check_aligned(psi, rho);
    second_level.validate(psi.size());
    std::vector<WindowedReport> out;
    const std::size_t count = window_count(psi.size(), second_level);
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t begin = w * second_level.stride;
        const std::size_t len = second_level.window_len;
        try {
            out.push_back({psi.window_ends()[begin + len - 1],
                           decompose(measure_name, asset_a, asset_b, slice(psi, begin, len),
                                     slice(psi_surrogate, begin, len), slice(rho, begin, len))});
        } catch (const Error &e) {
            throw e.with_context("second-level window " + std::to_string(w));
        }
    }
    return out;
}

} // namespace causal
