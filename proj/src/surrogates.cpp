#include "causal/surrogates.hpp"

#include "causal/error.hpp"
#include "causal/parallel.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>

namespace causal
{

namespace
{

using Complex = std::complex<double>;

std::vector<Complex> forward(std::span<const double> series)
{
    Eigen::FFT<double> fft;
    std::vector<double> in(series.begin(), series.end());
    std::vector<Complex> out;
    fft.fwd(out, in);
    return out;
}

void check_length(std::size_t n, const PhaseVector &phases)
{
    if (phases.series_length != n || phases.phases.size() != free_phase_count(n)) {
        fail(Errc::LengthMismatch, "phase vector built for length " +
                                       std::to_string(phases.series_length) +
                                       " applied to series of length " + std::to_string(n));
    }
}

} // namespace

double PhaseGenerator::next()
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double phase = unit * two_pi;
    return phase < two_pi ? phase : 0.0;
}

std::size_t free_phase_count(std::size_t n) noexcept
{
    return n < 2 ? 0 : (n - 1) / 2;
}

PhaseVector draw_phases(std::size_t n, PhaseGenerator &rng)
{
    if (n < 2) {
        fail(Errc::TooShort, "surrogates need at least two samples");
    }
    PhaseVector out;
    out.series_length = n;
    out.phases.resize(free_phase_count(n));
    for (double &phi : out.phases) {
        phi = rng.next();
    }
    return out;
}

SurrogateSeries apply_phases_detailed(std::span<const double> series, const PhaseVector &phases)
{
    const std::size_t n = series.size();
    check_length(n, phases);

    std::vector<Complex> spectrum = forward(series);
    for (std::size_t k = 1; k <= phases.phases.size(); ++k) {
        const Complex rotated = spectrum[k] * std::polar(1.0, phases.phases[k - 1]);
        spectrum[k] = rotated;
        spectrum[n - k] = std::conj(rotated);
    }

    Eigen::FFT<double> fft;
    std::vector<Complex> inverse;
    fft.inv(inverse, spectrum);

    SurrogateSeries out;
    out.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        out.values[t] = inverse[t].real();
        out.imag_residue = std::max(out.imag_residue, std::abs(inverse[t].imag()));
    }
    return out;
}

TimeSeries apply_phases(std::span<const double> series, const PhaseVector &phases)
{
    return TimeSeries(apply_phases_detailed(series, phases).values);
}

std::pair<TimeSeries, TimeSeries> surrogate_pair(std::span<const double> x,
                                                 std::span<const double> y,
                                                 const PhaseVector &phases)
{
    if (x.size() != y.size()) {
        fail(Errc::LengthMismatch, "surrogate pair needs equal lengths");
    }
    return {apply_phases(x, phases), apply_phases(y, phases)};
}

std::vector<PhaseVector> draw_phase_stream(std::size_t n, const SurrogateConfig &cfg)
{
    if (cfg.realizations == 0) {
        fail(Errc::InvalidArgument, "surrogate realizations must be positive");
    }
    PhaseGenerator rng(cfg.seed);
    std::vector<PhaseVector> stream;
    stream.reserve(cfg.realizations);
    for (std::size_t k = 0; k < cfg.realizations; ++k) {
        stream.push_back(draw_phases(n, rng));
    }
    return stream;
}

double surrogate_measure(const BivariateMeasure &measure, std::span<const double> x,
                         std::span<const double> y, const SurrogateConfig &cfg)
{
    if (x.size() != y.size()) {
        fail(Errc::LengthMismatch, "surrogate measure needs equal lengths");
    }
    const auto stream = draw_phase_stream(x.size(), cfg);

    std::vector<double> values(stream.size());
    detail::parallel_for(stream.size(), cfg.threads, [&](std::size_t k) {
        const auto [sx, sy] = surrogate_pair(x, y, stream[k]);
        try {
            values[k] = measure(sx, sy);
        } catch (const Error &e) {
            throw e.with_context("surrogate realization " + std::to_string(k));
        }
    });

    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

} // namespace causal
