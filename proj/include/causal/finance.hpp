#pragma once

#include "causal/codependence.hpp"
#include "causal/timeseries.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace causal
{

// ---------------------------------------------------------------------------
// Pair trading
// ---------------------------------------------------------------------------

/// (current - mean(hist)) / sample_stdev(hist).
/// Throws TooShort for fewer than 2 history values and ConstantHistory for a
/// zero standard deviation.
double zscore(double current, std::span<const double> hist_values);

enum class Position : int
{
    short_a_long_b = -1,
    flat = 0,
    long_a_short_b = 1,
};

struct PairTradingConfig
{
    std::size_t hist_window = 250; ///< look-back (in returns) for the history of co-dependence values
    std::size_t short_window = 50; ///< returns per current co-dependence estimate
    double z_threshold = 1.5;
    double exit_threshold = 0.5; ///< an open position closes once |z| drops below this
    CodependenceKind codependence = CodependenceKind::correlation;
    MeasureOptions measure;

    /// Throws InvalidArgument unless 2 <= short_window < hist_window and
    /// 0 <= exit_threshold < z_threshold.
    void validate() const;
};

/// Next position given the current one and a fresh z value: flat opens
/// short_a_long_b above +z_threshold and long_a_short_b below -z_threshold;
/// an open position flips when z crosses the opposite threshold and closes
/// when |z| < exit_threshold; otherwise nothing changes.
Position next_position(Position current, double z, const PairTradingConfig &cfg);

/// Row t describes return t, i.e. the move from price t to price t + 1.
/// `z[t]` is the z-score of the latest decision taken at or before t (NaN
/// before the first decision), `position[t]` is the position held over
/// return t (decided at t - 1 or earlier), step_return[t] =
/// position[t] * (return_a[t] - return_b[t]) and cumulative_return is its
/// running sum.
struct BacktestResult
{
    std::vector<double> z;
    std::vector<Position> position;
    std::vector<double> step_return;
    std::vector<double> cumulative_return;
};

/// Runs the position rule on a z path. `z[t]` is the decision value at
/// return index t (NaN: no decision at t); the resulting position applies from
/// return t + 1 on. Returns must have the same length as z.
BacktestResult run_pair_strategy(std::span<const double> z, std::span<const double> returns_a,
                                 std::span<const double> returns_b, const PairTradingConfig &cfg);

/// Pair trading on prices. Works on log returns. The co-dependence psi is
/// evaluated over short_window returns at return indices
/// short_window - 1 + k * rolling.stride. A decision at such an index t uses
/// z = zscore(psi_t, {psi_s : t - hist_window < s < t}) and is only taken once
/// t >= rolling.window_len - 1 (warm-up). Every decision uses samples up to t
/// only, so the position over return t + 1 never depends on later prices.
BacktestResult pair_trading_backtest(const TimeSeries &prices_a, const TimeSeries &prices_b,
                                     const PairTradingConfig &cfg, const RollingConfig &rolling);

// ---------------------------------------------------------------------------
// Portfolio construction
// ---------------------------------------------------------------------------

/// Pairwise co-dependence values psi(i -> j) of an asset universe. For kinds
/// other than correlation the sign of the correlation in `sign_source` is
/// applied when the matrix enters a variance.
struct CoDependenceMatrix
{
    std::vector<std::string> assets;
    Eigen::MatrixXd values;
    CodependenceKind kind = CodependenceKind::correlation;
    std::optional<Eigen::MatrixXd> sign_source;

    /// Throws InvalidArgument on dimension mismatches, or when a signed kind
    /// lacks sign_source.
    void validate() const;
};

/// Theta_ij = psi_ij * sgn(rho_ij) (psi_ij for correlation), sgn(0) = 0,
/// with the diagonal set to 1. Not symmetrized.
Eigen::MatrixXd substituted_matrix(const CoDependenceMatrix &codep);

/// (M + M^T) / 2 with negative eigenvalues (beyond rounding of zero) raised
/// to `floor`.
Eigen::MatrixXd repair_psd(const Eigen::MatrixXd &m, double floor = 1e-8);

/// sum_i sum_j w_i w_j s_i s_j Theta_ij on the unrepaired substituted matrix.
/// Results within rounding of zero (|v| <= 1e-12 (sum |w_i s_i|)^2) are
/// returned as 0; anything more negative throws NegativeVariance.
double portfolio_variance(std::span<const double> weights, std::span<const double> vols,
                          const CoDependenceMatrix &codep);

/// Convex quadratic program
///
///   minimize x^T Q x  subject to  A x = b, x >= 0
///
/// solved by a primal active-set method started from the feasible point x0.
/// Each iteration solves the equality-constrained subproblem on the free
/// variables with a rank-revealing factorization, so singular Q is allowed.
/// A full step (or one below 1e-12 relative) marks a face minimum; the method
/// stops there once every multiplier of an active bound is >= -1e-12 (scaled
/// by the largest |Q| entry), otherwise releases the most negative one.
/// Throws InvalidArgument after 50 (n + 1) iterations. Ties go to the lowest index.
Eigen::VectorXd solve_nonnegative_qp(const Eigen::MatrixXd &Q, const Eigen::MatrixXd &A,
                                     const Eigen::VectorXd &b, Eigen::VectorXd x0);

struct PortfolioWeights
{
    std::vector<double> weights;
};

/// Covariance-like matrix diag(vols) * repair_psd(substituted) * diag(vols).
Eigen::MatrixXd risk_matrix(std::span<const double> vols, const CoDependenceMatrix &codep);

/// Long-only minimum variance weights; with `target_return` the weights also
/// satisfy sum w_i mean_i = target (InfeasibleTarget outside
/// [min mean, max mean]). Starts from equal weights (or from the two-asset
/// mix of the lowest and highest mean hitting the target).
PortfolioWeights min_risk_weights(std::span<const double> mean_returns, std::span<const double> vols,
                                  const CoDependenceMatrix &codep,
                                  std::optional<double> target_return = std::nullopt);

/// Long-only maximum Sharpe weights via the auxiliary problem
/// minimize y^T S y subject to (mean - risk_free)^T y = c, y >= 0, with
/// w = y / sum y (any c > 0 gives the same w). Throws NoExcessReturn if no mean exceeds risk_free.
PortfolioWeights max_sharpe_weights(std::span<const double> mean_returns, std::span<const double> vols,
                                    const CoDependenceMatrix &codep, double risk_free = 0.0);

// ---------------------------------------------------------------------------
// Risk and backtests
// ---------------------------------------------------------------------------

/// Lower alpha-quantile of the returns reported as a loss (positive = loss):
/// with sorted x_(1) <= ... <= x_(n) and h = n alpha, q = x_(1) if h < 1,
/// otherwise x_(floor h) + (h - floor h) (x_(floor h + 1) - x_(floor h)).
/// Returns -q. Throws EmptyInput or InvalidArgument for alpha outside (0, 1).
double historical_var(std::span<const double> returns, double alpha);

/// True when fewer than 1 / alpha returns are available and the estimate
/// falls back to the worst sample.
bool var_sample_too_short(std::size_t sample_count, double alpha) noexcept;

struct RiskReport
{
    double var_alpha = 0.0;
    double alpha = 0.01;
    double stdev = 0.0;
    double sharpe = 0.0; ///< per-step, 0 when stdev is 0
    double final_value = 0.0;
    bool short_sample = false;
};

/// Risk figures of a value path from its simple per-step returns.
RiskReport risk_report(std::span<const double> value_path, double alpha = 0.01,
                       double risk_free = 0.0);

enum class Objective
{
    min_risk,
    max_sharpe,
};

struct RebalanceConfig
{
    Objective objective = Objective::min_risk;
    CodependenceKind codependence = CodependenceKind::correlation;
    MeasureOptions measure;
    /// window_len: trailing log returns used for the estimates;
    /// stride: samples between rebalances.
    RollingConfig rolling;
    double risk_free = 0.0;
    double alpha = 0.01;
};

struct PortfolioBacktest
{
    std::vector<std::size_t> rebalance_index; ///< price index of each rebalance
    std::vector<std::vector<double>> weights; ///< one row per rebalance
    std::vector<double> value;                ///< value[k] at price index rebalance_index[0] + k
    RiskReport risk;
};

/// Rebalances at price indices window_len + k * stride. Means, sample
/// volatilities and co-dependence (psi(i -> j) and, for signs, Pearson) are
/// estimated on the trailing window_len log returns; an asset with zero
/// variance in the window gets zero co-dependence with every other asset.
/// Holdings are bought at the rebalance prices and held until the next
/// rebalance; the value path starts at 1.
PortfolioBacktest rebalance_backtest(const std::vector<TimeSeries> &prices, const RebalanceConfig &cfg);

} // namespace causal
