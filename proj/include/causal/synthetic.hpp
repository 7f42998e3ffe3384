#pragma once

#include "causal/timeseries.hpp"

#include <cstddef>
#include <utility>

namespace causal
{

/// Which right-hand side drives the y update.
///  - canonical: y' = y (r_y - r_y y - beta_x_to_y x), the usual coupled logistic pair.
///  - verbatim:  y' = y (r_y - r_y x - beta_x_to_y x), the self-term written with x.
enum class CouplingForm
{
    canonical,
    verbatim,
};

struct CoupledDifferenceParams
{
    double r_x = 3.8;
    double r_y = 3.5;
    double beta_y_to_x = 0.02;
    double beta_x_to_y = 0.1;
    double x0 = 0.4;
    double y0 = 0.2;
    std::size_t transient = 100;
    CouplingForm form = CouplingForm::canonical;

    /// Throws InvalidArgument unless x0, y0 lie in (0, 1) and all reals are finite.
    void validate() const;
};

/// Iterates the coupled difference system, drops `transient` states and returns
/// the next `n` states of x and y (labelled "x" and "y").
/// Throws Errc::Diverged, naming the step, once a state leaves [-10, 10].
std::pair<TimeSeries, TimeSeries> simulate(const CoupledDifferenceParams &params, std::size_t n);

} // namespace causal
