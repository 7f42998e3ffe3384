#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace causal
{

/// Ordered, finite, real-valued samples with an optional label.
///
/// Immutable after construction; converts implicitly to a read-only span so
/// every numerical routine can take views instead of copies.
class TimeSeries
{
public:
    TimeSeries() = default;

    /// Throws Errc::NonFinite if any value is NaN or infinite.
    explicit TimeSeries(std::vector<double> values, std::string label = {});

    std::span<const double> values() const noexcept { return values_; }
    operator std::span<const double>() const noexcept { return values_; }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    const std::string &label() const noexcept { return label_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

private:
    std::vector<double> values_;
    std::string label_;
};

/// Rolling window layout: window w (0-based) covers samples
/// [w * stride, w * stride + window_len - 1].
struct RollingConfig
{
    std::size_t window_len = 1000;
    std::size_t stride = 20;

    /// Throws InvalidArgument for a zero length/stride and WindowTooLarge when
    /// the window does not fit into `series_len` samples.
    void validate(std::size_t series_len) const;
};

/// floor((series_len - window_len) / stride) + 1, or 0 if the window does not fit.
std::size_t window_count(std::size_t series_len, const RollingConfig &cfg) noexcept;

/// One value per rolling window. `window_ends` holds the 0-based index of the
/// last sample of each window.
class MeasureSeries
{
public:
    MeasureSeries() = default;
    MeasureSeries(std::vector<double> values, std::vector<std::size_t> window_ends);

    std::span<const double> values() const noexcept { return values_; }
    std::span<const std::size_t> window_ends() const noexcept { return window_ends_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

private:
    std::vector<double> values_;
    std::vector<std::size_t> window_ends_;
};

using BivariateMeasure =
    std::function<double(std::span<const double>, std::span<const double>)>;

/// log(p[t+1]) - log(p[t]).
TimeSeries log_returns(const TimeSeries &prices);

std::vector<std::span<const double>> rolling_windows(std::span<const double> series,
                                                     const RollingConfig &cfg);

/// Evaluates `measure` on every aligned window pair. Windows may be evaluated
/// on several threads; output order is always window order. Measure errors
/// are rethrown with the window index attached.
MeasureSeries rolling_apply(std::span<const double> x, std::span<const double> y,
                            const RollingConfig &cfg, const BivariateMeasure &measure,
                            std::size_t threads = 1);

} // namespace causal
