#pragma once

#include "causal/timeseries.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace causal
{

/// Seedable phase source. The engine is std::mt19937_64, whose output sequence
/// is fixed by the C++ standard; each phase consumes exactly one 64-bit draw
/// and is formed as (draw >> 11) * 2^-53 * 2*pi, so streams are identical on
/// every platform.
class PhaseGenerator
{
public:
    explicit PhaseGenerator(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 2*pi).
    double next();

private:
    std::mt19937_64 engine_;
};

/// Random phase rotations for the freely randomizable Fourier bins
/// 1..free_phase_count(n) of a length-n series. DC (and Nyquist for even n)
/// are never rotated.
struct PhaseVector
{
    std::size_t series_length = 0;
    std::vector<double> phases;
};

/// (n - 1) / 2: excludes DC and, for even n, the Nyquist bin.
std::size_t free_phase_count(std::size_t n) noexcept;

PhaseVector draw_phases(std::size_t n, PhaseGenerator &rng);

struct SurrogateConfig
{
    std::size_t realizations = 50;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

/// Surrogate values plus the largest |imaginary part| left by the inverse
/// transform before it was discarded.
struct SurrogateSeries
{
    std::vector<double> values;
    double imag_residue = 0.0;
};

/// Rotates bin k by phases[k-1] (F'_k = F_k * exp(i phi_k)), mirrors the
/// rotation onto bin n-k, and inverts. Amplitudes are kept, so the power
/// spectrum, mean and variance of the input are preserved. Because the
/// rotation is added to the original phase, two series rotated by the same
/// PhaseVector keep their cross-spectral phase differences.
SurrogateSeries apply_phases_detailed(std::span<const double> series, const PhaseVector &phases);

TimeSeries apply_phases(std::span<const double> series, const PhaseVector &phases);

/// Both series receive the identical phase vector.
std::pair<TimeSeries, TimeSeries> surrogate_pair(std::span<const double> x,
                                                 std::span<const double> y,
                                                 const PhaseVector &phases);

/// All phase vectors for `cfg.realizations` realizations of a length-n pair,
/// drawn realization-major from a generator seeded with cfg.seed.
std::vector<PhaseVector> draw_phase_stream(std::size_t n, const SurrogateConfig &cfg);

/// Mean of measure(x~(k), y~(k)) over the realizations, with phases shared
/// within a realization. Reproducible bit-for-bit from (seed, realizations)
/// regardless of cfg.threads.
double surrogate_measure(const BivariateMeasure &measure, std::span<const double> x,
                         std::span<const double> y, const SurrogateConfig &cfg);

} // namespace causal
