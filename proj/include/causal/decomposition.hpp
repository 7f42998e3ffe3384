#pragma once

#include "causal/timeseries.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace causal
{

/// Pearson correlation of two measure series over identical window ends.
/// Throws MisalignedWindows if the window ends differ and ConstantSeries if
/// either series has zero variance.
double nested_correlation(const MeasureSeries &a, const MeasureSeries &b);

/// R^2 = corr(psi, psi_surrogate)^2: share of the measure's variability that
/// the surrogate (linear) counterpart explains.
double linear_fraction(const MeasureSeries &psi, const MeasureSeries &psi_surrogate);

/// 1 - R^2.
double nonlinear_fraction(const MeasureSeries &psi, const MeasureSeries &psi_surrogate);

/// corr(psi, rho)^2 against the rolling Pearson correlation series.
double fallacy(const MeasureSeries &psi, const MeasureSeries &rho);

struct DecompositionReport
{
    std::string measure_name;
    std::string asset_a; ///< cause for directed measures
    std::string asset_b; ///< effect for directed measures
    double linear_fraction = 0.0;
    double nonlinear_fraction = 0.0;
    double fallacy = 0.0;        ///< corr(psi, rho)^2
    double fallacy_linear = 0.0; ///< corr(psi_surrogate, rho)^2
};

/// All four quantities for one measure and one (ordered) pair.
DecompositionReport decompose(std::string measure_name, std::string asset_a, std::string asset_b,
                              const MeasureSeries &psi, const MeasureSeries &psi_surrogate,
                              const MeasureSeries &rho);

struct WindowedReport
{
    std::size_t window_end = 0; ///< window end of the last measure value used
    DecompositionReport report;
};

/// The same quantities over a second-level rolling window that runs along
/// the measure series (window_len and stride count measure values).
std::vector<WindowedReport> rolling_decompose(const std::string &measure_name,
                                              const std::string &asset_a,
                                              const std::string &asset_b,
                                              const MeasureSeries &psi,
                                              const MeasureSeries &psi_surrogate,
                                              const MeasureSeries &rho,
                                              const RollingConfig &second_level);

} // namespace causal
