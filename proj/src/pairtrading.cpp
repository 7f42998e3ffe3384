#include "causal/error.hpp"
#include "causal/finance.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace causal
{

double zscore(double current, std::span<const double> hist_values)
{
    const std::size_t n = hist_values.size();
    if (n < 2) {
        fail(Errc::TooShort, "z-score needs at least 2 history values");
    }
    const double mean = std::accumulate(hist_values.begin(), hist_values.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : hist_values) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) {
        fail(Errc::ConstantHistory, "history has zero standard deviation");
    }
    return (current - mean) / sd;
}

void PairTradingConfig::validate() const
{
    if (short_window < 2 || short_window >= hist_window) {
        fail(Errc::InvalidArgument, "need 2 <= short_window < hist_window");
    }
    if (!(z_threshold > 0.0) || !(exit_threshold >= 0.0) || !(exit_threshold < z_threshold)) {
        fail(Errc::InvalidArgument, "need 0 <= exit_threshold < z_threshold");
    }
}

Position next_position(Position current, double z, const PairTradingConfig &cfg)
{
    if (z > cfg.z_threshold) {
        return Position::short_a_long_b;
    }
    if (z < -cfg.z_threshold) {
        return Position::long_a_short_b;
    }
    if (current != Position::flat && std::abs(z) < cfg.exit_threshold) {
        return Position::flat;
    }
    return current;
}

BacktestResult run_pair_strategy(std::span<const double> z, std::span<const double> returns_a,
                                 std::span<const double> returns_b, const PairTradingConfig &cfg)
{
    if (returns_a.size() != z.size() || returns_b.size() != z.size()) {
        fail(Errc::LengthMismatch, "z path and returns must have equal lengths");
    }
    const std::size_t n = z.size();
    BacktestResult out;
    out.z.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.position.assign(n, Position::flat);
    out.step_return.assign(n, 0.0);
    out.cumulative_return.assign(n, 0.0);

    Position held = Position::flat;
    double last_z = std::numeric_limits<double>::quiet_NaN();
    double cumulative = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        out.position[t] = held;
        out.step_return[t] = static_cast<double>(static_cast<int>(held)) * (returns_a[t] - returns_b[t]);
        cumulative += out.step_return[t];
        out.cumulative_return[t] = cumulative;
        if (!std::isnan(z[t])) {
            last_z = z[t];
            held = next_position(held, z[t], cfg);
        }
        out.z[t] = last_z;
    }
    return out;
}

BacktestResult pair_trading_backtest(const TimeSeries &prices_a, const TimeSeries &prices_b,
                                     const PairTradingConfig &cfg, const RollingConfig &rolling)
{
    cfg.validate();
    if (prices_a.size() != prices_b.size()) {
        fail(Errc::LengthMismatch, "price series must have equal lengths");
    }
    const TimeSeries ra = log_returns(prices_a);
    const TimeSeries rb = log_returns(prices_b);
    const std::size_t m = ra.size();
    rolling.validate(m);
    if (cfg.short_window > m) {
        fail(Errc::WindowTooLarge, "short window exceeds the return count");
    }

    const BivariateMeasure measure = make_measure(cfg.codependence, cfg.measure);
    std::vector<std::size_t> grid;
    std::vector<double> psi;
    for (std::size_t t = cfg.short_window - 1; t < m; t += rolling.stride) {
        const std::size_t begin = t + 1 - cfg.short_window;
        try {
            psi.push_back(measure(ra.values().subspan(begin, cfg.short_window),
                                  rb.values().subspan(begin, cfg.short_window)));
        } catch (const Error &e) {
            throw e.with_context("return index " + std::to_string(t));
        }
        grid.push_back(t);
    }

    std::vector<double> z(m, std::numeric_limits<double>::quiet_NaN());
    std::size_t first = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::size_t t = grid[k];
        while (grid[first] + cfg.hist_window <= t) {
            ++first;
        }
        if (t + 1 < rolling.window_len || k - first < 2) {
            continue;
        }
        try {
            z[t] = zscore(psi[k], std::span<const double>(psi).subspan(first, k - first));
        } catch (const Error &e) {
            // A flat history carries no signal; the position is left unchanged.
            if (e.code() != Errc::ConstantHistory) {
                throw;
            }
        }
    }
    return run_pair_strategy(z, ra.values(), rb.values(), cfg);
}

} // namespace causal
