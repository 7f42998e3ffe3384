#include "causal/timeseries.hpp"

#include "causal/error.hpp"
#include "causal/parallel.hpp"

#include <cmath>

namespace causal
{

TimeSeries::TimeSeries(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label))
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            fail(Errc::NonFinite, "sample " + std::to_string(i) + " is not finite");
        }
    }
}

void RollingConfig::validate(std::size_t series_len) const
{
    if (window_len == 0) {
        fail(Errc::InvalidArgument, "window length must be positive");
    }
    if (stride == 0) {
        fail(Errc::InvalidArgument, "stride must be positive");
    }
    if (window_len > series_len) {
        fail(Errc::WindowTooLarge, "window length " + std::to_string(window_len) +
                                       " exceeds series length " + std::to_string(series_len));
    }
}

std::size_t window_count(std::size_t series_len, const RollingConfig &cfg) noexcept
{
    if (cfg.window_len == 0 || cfg.stride == 0 || cfg.window_len > series_len) {
        return 0;
    }
    return (series_len - cfg.window_len) / cfg.stride + 1;
}

MeasureSeries::MeasureSeries(std::vector<double> values, std::vector<std::size_t> window_ends)
    : values_(std::move(values)), window_ends_(std::move(window_ends))
{
    if (values_.size() != window_ends_.size()) {
        fail(Errc::LengthMismatch, "measure values and window ends differ in length");
    }
    for (std::size_t i = 1; i < window_ends_.size(); ++i) {
        if (window_ends_[i] <= window_ends_[i - 1]) {
            fail(Errc::InvalidArgument, "window ends must be strictly increasing");
        }
    }
}

TimeSeries log_returns(const TimeSeries &prices)
{
    if (prices.size() < 2) {
        fail(Errc::TooShort, "need at least two prices");
    }
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (prices[i] <= 0.0) {
            fail(Errc::NonPositivePrice, "price at index " + std::to_string(i) + " is not positive");
        }
    }
    std::vector<double> out(prices.size() - 1);
    for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
        out[t] = std::log(prices[t + 1]) - std::log(prices[t]);
    }
    return TimeSeries(std::move(out), prices.label());
}

std::vector<std::span<const double>> rolling_windows(std::span<const double> series,
                                                     const RollingConfig &cfg)
{
    cfg.validate(series.size());
    const std::size_t count = window_count(series.size(), cfg);
    std::vector<std::span<const double>> windows;
    windows.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        windows.push_back(series.subspan(w * cfg.stride, cfg.window_len));
    }
    return windows;
}

MeasureSeries rolling_apply(std::span<const double> x, std::span<const double> y,
                            const RollingConfig &cfg, const BivariateMeasure &measure,
                            std::size_t threads)
{
    if (x.size() != y.size()) {
        fail(Errc::LengthMismatch, "series lengths differ (" + std::to_string(x.size()) +
                                       " vs " + std::to_string(y.size()) + ")");
    }
    const auto wx = rolling_windows(x, cfg);
    const auto wy = rolling_windows(y, cfg);

    std::vector<double> values(wx.size());
    std::vector<std::size_t> ends(wx.size());
    detail::parallel_for(wx.size(), threads, [&](std::size_t w) {
        ends[w] = w * cfg.stride + cfg.window_len - 1;
        try {
            values[w] = measure(wx[w], wy[w]);
        } catch (const Error &e) {
            throw e.with_context("window " + std::to_string(w));
        }
    });
    return MeasureSeries(std::move(values), std::move(ends));
}

} // namespace causal
