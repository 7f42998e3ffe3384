#include "causal/error.hpp"
#include "causal/finance.hpp"
#include "causal/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace causal
{

namespace
{

double mean_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stdev(std::span<const double> v)
{
    if (v.size() < 2) {
        return 0.0;
    }
    const double mean = mean_of(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace

double historical_var(std::span<const double> returns, double alpha)
{
    if (returns.empty()) {
        fail(Errc::EmptyInput, "no returns for value at risk");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        fail(Errc::InvalidArgument, "alpha must lie in (0, 1)");
    }
    std::vector<double> sorted(returns.begin(), returns.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double h = static_cast<double>(n) * alpha;
    double q = sorted.front();
    if (h >= 1.0) {
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const double frac = h - static_cast<double>(lo);
        q = sorted[lo - 1];
        if (frac > 0.0 && lo < n) {
            q += frac * (sorted[lo] - sorted[lo - 1]);
        }
    }
    return q == 0.0 ? 0.0 : -q;
}

bool var_sample_too_short(std::size_t sample_count, double alpha) noexcept
{
    return static_cast<double>(sample_count) * alpha < 1.0;
}

RiskReport risk_report(std::span<const double> value_path, double alpha, double risk_free)
{
    if (value_path.empty()) {
        fail(Errc::EmptyInput, "empty value path");
    }
    RiskReport out;
    out.alpha = alpha;
    out.final_value = value_path.back();
    if (value_path.size() < 2) {
        out.short_sample = true;
        return out;
    }
    std::vector<double> returns(value_path.size() - 1);
    for (std::size_t t = 0; t + 1 < value_path.size(); ++t) {
        returns[t] = value_path[t + 1] / value_path[t] - 1.0;
    }
    out.var_alpha = historical_var(returns, alpha);
    out.short_sample = var_sample_too_short(returns.size(), alpha);
    out.stdev = sample_stdev(returns);
    out.sharpe = out.stdev > 0.0 ? (mean_of(returns) - risk_free) / out.stdev : 0.0;
    return out;
}

PortfolioBacktest rebalance_backtest(const std::vector<TimeSeries> &prices, const RebalanceConfig &cfg)
{
    if (prices.empty()) {
        fail(Errc::EmptyInput, "no price series");
    }
    const std::size_t assets = prices.size();
    const std::size_t n = prices.front().size();
    std::vector<TimeSeries> returns;
    std::vector<std::string> labels;
    for (const auto &p : prices) {
        if (p.size() != n) {
            fail(Errc::LengthMismatch, "price series must be aligned");
        }
        returns.push_back(log_returns(p));
        labels.push_back(p.label());
    }
    const std::size_t window = cfg.rolling.window_len;
    cfg.rolling.validate(n - 1);
    if (window < 2) {
        fail(Errc::InvalidArgument, "estimation window needs at least 2 returns");
    }

    const BivariateMeasure measure = make_measure(cfg.codependence, cfg.measure);
    const bool directed = is_directed(cfg.codependence);
    const bool signed_kind = base_kind(cfg.codependence) != CodependenceKind::correlation;

    PortfolioBacktest out;
    std::vector<double> holdings(assets, 0.0);
    double value = 1.0;
    const std::size_t start = window;
    for (std::size_t t = start; t < n; ++t) {
        if (t > start) {
            value = 0.0;
            for (std::size_t i = 0; i < assets; ++i) {
                value += holdings[i] * prices[i][t];
            }
        }
        out.value.push_back(value);
        const bool rebalance = (t - start) % cfg.rolling.stride == 0 && (t + 1 < n || t == start);
        if (!rebalance) {
            continue;
        }

        std::vector<double> weights(assets, 1.0);
        if (assets > 1) {
            try {
                std::vector<std::span<const double>> win;
                std::vector<double> means(assets);
                std::vector<double> vols(assets);
                for (std::size_t i = 0; i < assets; ++i) {
                    win.push_back(returns[i].values().subspan(t - window, window));
                    means[i] = mean_of(win[i]);
                    vols[i] = sample_stdev(win[i]);
                }
                const auto dim = static_cast<Eigen::Index>(assets);
                CoDependenceMatrix codep;
                codep.assets = labels;
                codep.kind = cfg.codependence;
                codep.values = Eigen::MatrixXd::Identity(dim, dim);
                Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(dim, dim);
                for (std::size_t i = 0; i < assets; ++i) {
                    for (std::size_t j = 0; j < assets; ++j) {
                        if (i == j || vols[i] == 0.0 || vols[j] == 0.0) {
                            continue;
                        }
                        const auto r = static_cast<Eigen::Index>(i);
                        const auto c = static_cast<Eigen::Index>(j);
                        if (j > i || directed) {
                            codep.values(r, c) = measure(win[i], win[j]);
                        } else {
                            codep.values(r, c) = codep.values(c, r);
                        }
                        if (signed_kind) {
                            rho(r, c) = j > i ? pearson(win[i], win[j]) : rho(c, r);
                        }
                    }
                }
                if (signed_kind) {
                    codep.sign_source = rho;
                }
                weights = cfg.objective == Objective::min_risk
                              ? min_risk_weights(means, vols, codep).weights
                              : max_sharpe_weights(means, vols, codep, cfg.risk_free).weights;
            } catch (const Error &e) {
                throw e.with_context("rebalance at price index " + std::to_string(t));
            }
        }
        for (std::size_t i = 0; i < assets; ++i) {
            holdings[i] = value * weights[i] / prices[i][t];
        }
        out.rebalance_index.push_back(t);
        out.weights.push_back(std::move(weights));
    }
    out.risk = risk_report(out.value, cfg.alpha, cfg.risk_free);
    return out;
}

} // namespace causal
