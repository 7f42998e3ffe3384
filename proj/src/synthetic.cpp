#include "causal/synthetic.hpp"

#include "causal/error.hpp"

#include <cmath>
#include <vector>

namespace causal
{

void CoupledDifferenceParams::validate() const
{
    for (double v : {r_x, r_y, beta_y_to_x, beta_x_to_y}) {
        if (!std::isfinite(v)) {
            fail(Errc::InvalidArgument, "coupled difference parameters must be finite");
        }
    }
    if (!(x0 > 0.0 && x0 < 1.0) || !(y0 > 0.0 && y0 < 1.0)) {
        fail(Errc::InvalidArgument, "initial states must lie in (0, 1)");
    }
}

std::pair<TimeSeries, TimeSeries> simulate(const CoupledDifferenceParams &params, std::size_t n)
{
    params.validate();
    if (n == 0) {
        fail(Errc::InvalidArgument, "sample count must be positive");
    }

    constexpr double bound = 10.0;
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(n);
    ys.reserve(n);

    double x = params.x0;
    double y = params.y0;
    const std::size_t total = params.transient + n;
    for (std::size_t step = 0; step < total; ++step) {
        if (step >= params.transient) {
            xs.push_back(x);
            ys.push_back(y);
        }
        if (step + 1 == total) {
            break;
        }
        const double self_y = params.form == CouplingForm::canonical ? y : x;
        const double nx = x * (params.r_x - params.r_x * x - params.beta_y_to_x * y);
        const double ny = y * (params.r_y - params.r_y * self_y - params.beta_x_to_y * x);
        if (!(std::abs(nx) <= bound) || !(std::abs(ny) <= bound)) {
            fail(Errc::Diverged, "state left [-10, 10] at step " + std::to_string(step + 1));
        }
        x = nx;
        y = ny;
    }
    return {TimeSeries(std::move(xs), "x"), TimeSeries(std::move(ys), "y")};
}

} // namespace causal
