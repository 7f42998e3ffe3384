#include "causal/error.hpp"
#include "causal/measures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace causal
{

namespace
{

std::atomic<std::uint64_t> te_range_violations{0};

} // namespace

void HistogramConfig::validate() const
{
    if (bins_per_dim < 2) {
        fail(Errc::InvalidArgument, "histograms need at least two bins per dimension");
    }
    if (range == RangePolicy::fixed && !(upper > lower)) {
        fail(Errc::InvalidArgument, "fixed histogram bounds need upper > lower");
    }
}

std::vector<std::uint32_t> discretize(std::span<const double> x, const HistogramConfig &cfg)
{
    cfg.validate();
    std::vector<std::uint32_t> out(x.size(), 0);
    if (x.empty()) {
        return out;
    }

    double lo = cfg.lower;
    double hi = cfg.upper;
    if (cfg.range == RangePolicy::per_window) {
        const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
        lo = *mn;
        hi = *mx;
    }
    const double width = hi - lo;
    if (!(width > 0.0)) {
        return out;
    }
    const auto top = static_cast<double>(cfg.bins_per_dim - 1);
    const double scale = static_cast<double>(cfg.bins_per_dim) / width;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double b = std::clamp(std::floor((x[i] - lo) * scale), 0.0, top);
        out[i] = static_cast<std::uint32_t>(b);
    }
    return out;
}

double symbol_entropy(std::span<const std::span<const std::uint32_t>> columns)
{
    if (columns.empty() || columns.front().empty()) {
        fail(Errc::InvalidArgument, "entropy needs at least one sample of dimension >= 1");
    }
    const std::size_t n = columns.front().size();
    for (const auto &col : columns) {
        if (col.size() != n) {
            fail(Errc::LengthMismatch, "entropy columns differ in length");
        }
    }

    // Mixed-radix cell code per sample; cells are then counted by sorting.
    std::vector<std::uint64_t> codes(n, 0);
    std::uint64_t stride = 1;
    for (const auto &col : columns) {
        const std::uint64_t radix = static_cast<std::uint64_t>(*std::max_element(col.begin(), col.end())) + 1;
        for (std::size_t i = 0; i < n; ++i) {
            codes[i] += stride * col[i];
        }
        if (stride > std::numeric_limits<std::uint64_t>::max() / radix) {
            fail(Errc::InvalidArgument, "joint histogram has too many cells");
        }
        stride *= radix;
    }
    std::sort(codes.begin(), codes.end());

    // H = log n - (1/n) sum c log c
    double acc = 0.0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && codes[i] == codes[i - 1]) {
            ++run;
            continue;
        }
        const auto c = static_cast<double>(run);
        acc += c * std::log(c);
        run = 1;
    }
    const auto total = static_cast<double>(n);
    return std::max(0.0, std::log(total) - acc / total);
}

double entropy(std::span<const std::span<const double>> columns, const HistogramConfig &cfg)
{
    std::vector<std::vector<std::uint32_t>> binned;
    binned.reserve(columns.size());
    for (const auto &col : columns) {
        binned.push_back(discretize(col, cfg));
    }
    std::vector<std::span<const std::uint32_t>> views(binned.begin(), binned.end());
    return symbol_entropy(views);
}

double transfer_entropy(std::span<const double> x, std::span<const double> y,
                        const HistogramConfig &cfg)
{
    if (x.size() != y.size()) {
        fail(Errc::LengthMismatch, "transfer entropy needs equal lengths");
    }
    const std::size_t n = x.size();
    if (n < 3) {
        fail(Errc::TooShort, "transfer entropy needs at least three samples");
    }

    const auto xs = discretize(x, cfg);
    const auto ys = discretize(y, cfg);
    const std::span<const std::uint32_t> xsv(xs);
    const std::span<const std::uint32_t> ysv(ys);
    const auto y_next = ysv.subspan(1);
    const auto y_now = ysv.first(n - 1);
    const auto x_next = xsv.subspan(1);
    const auto x_now = xsv.first(n - 1);

    using Cols = std::span<const std::uint32_t>;
    const Cols yy[] = {y_next, y_now};
    const Cols yx[] = {y_now, x_now};
    const Cols yyx[] = {y_next, y_now, x_now};
    const Cols ym[] = {y_now};
    const Cols xx[] = {x_next, x_now};

    const double h_yy = symbol_entropy(yy);
    const double h_xx = symbol_entropy(xx);
    if (h_yy == 0.0 || h_xx == 0.0) {
        fail(Errc::DegenerateDenominator, "joint entropy of a constant series is zero");
    }
    const double numerator = h_yy + symbol_entropy(yx) - symbol_entropy(yyx) - symbol_entropy(ym);
    const double value = numerator / std::sqrt(h_yy * h_xx);
    if (value < 0.0 || value > 1.0) {
        te_range_violations.fetch_add(1, std::memory_order_relaxed);
    }
    return value;
}

std::uint64_t transfer_entropy_range_violations() noexcept
{
    return te_range_violations.load(std::memory_order_relaxed);
}

void reset_transfer_entropy_range_violations() noexcept
{
    te_range_violations.store(0, std::memory_order_relaxed);
}

double mutual_information(std::span<const double> x, std::size_t lag, const HistogramConfig &cfg)
{
    if (lag == 0 || lag >= x.size()) {
        fail(Errc::InvalidArgument, "lag must lie in [1, length)");
    }
    const auto symbols = discretize(x, cfg);
    const std::span<const std::uint32_t> s(symbols);
    const auto now = s.subspan(lag);
    const auto past = s.first(s.size() - lag);

    using Cols = std::span<const std::uint32_t>;
    const Cols a[] = {now};
    const Cols b[] = {past};
    const Cols ab[] = {now, past};
    return std::max(0.0, symbol_entropy(a) + symbol_entropy(b) - symbol_entropy(ab));
}

std::optional<std::size_t> first_local_minimum(std::span<const double> curve)
{
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        if (curve[i - 1] > curve[i] && curve[i] < curve[i + 1]) {
            return i + 1;
        }
    }
    return std::nullopt;
}

LagSelection select_tau(std::span<const double> x, std::size_t max_lag, const HistogramConfig &cfg)
{
    if (max_lag < 2) {
        fail(Errc::InvalidArgument, "max_lag must be at least 2");
    }
    if (max_lag >= x.size()) {
        fail(Errc::TooShort, "series shorter than max_lag + 1");
    }
    LagSelection out;
    out.mi_curve.reserve(max_lag);
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        out.mi_curve.push_back(mutual_information(x, lag, cfg));
    }
    if (const auto lag = first_local_minimum(out.mi_curve)) {
        out.tau = *lag;
    } else {
        out.tau = 1;
        out.fallback = true;
    }
    return out;
}

} // namespace causal
