#pragma once

#include "causal/timeseries.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace causal
{

// ---------------------------------------------------------------------------
// Pearson correlation
// ---------------------------------------------------------------------------

/// Product-moment correlation, clamped to [-1, 1].
/// Throws LengthMismatch, TooShort (< 2 samples) or ConstantSeries.
double pearson(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Histogram entropies
// ---------------------------------------------------------------------------

enum class RangePolicy
{
    per_window, ///< bin edges span the min/max of each column being binned
    fixed,      ///< bin edges span [lower, upper]; values outside are clamped
};

struct HistogramConfig
{
    std::size_t bins_per_dim = 8;
    RangePolicy range = RangePolicy::per_window;
    double lower = 0.0;
    double upper = 1.0;

    void validate() const;
};

/// Equal-width bin index of every sample. A column with zero range maps to bin 0.
std::vector<std::uint32_t> discretize(std::span<const double> x, const HistogramConfig &cfg);

/// Shannon entropy (nats) of the joint distribution of already-binned columns.
/// All columns must have the same length; each one is one coordinate.
double symbol_entropy(std::span<const std::span<const std::uint32_t>> columns);

/// Entropy (nats) of d-dimensional samples given as d coordinate columns.
/// Each column is binned on its own according to cfg.
double entropy(std::span<const std::span<const double>> columns, const HistogramConfig &cfg);

// ---------------------------------------------------------------------------
// Transfer entropy
// ---------------------------------------------------------------------------

/// Normalized lag-1 transfer entropy from x to y:
///
///   [H(Y+, Y) + H(Y, X) - H(Y+, Y, X) - H(Y)] / sqrt(H(Y+, Y) * H(X+, X))
///
/// with Y+ = y[t+1], Y = y[t], X = x[t] over t = 0 .. n-2. Each series is
/// binned once over the whole input so all joint and marginal histograms share
/// the same partition. Throws DegenerateDenominator if either joint entropy in
/// the denominator is zero. Values outside [0, 1] are returned unclipped and
/// counted (see transfer_entropy_range_violations).
double transfer_entropy(std::span<const double> x, std::span<const double> y,
                        const HistogramConfig &cfg);

/// Process-wide count of transfer_entropy results that fell outside [0, 1].
std::uint64_t transfer_entropy_range_violations() noexcept;
void reset_transfer_entropy_range_violations() noexcept;

// ---------------------------------------------------------------------------
// Embedding parameter selection
// ---------------------------------------------------------------------------

/// I(x_t; x_{t-lag}) = H(x_t) + H(x_{t-lag}) - H(x_t, x_{t-lag}).
double mutual_information(std::span<const double> x, std::size_t lag, const HistogramConfig &cfg);

/// 1-based position l of the first strict interior minimum
/// curve[l-2] > curve[l-1] < curve[l], if any.
std::optional<std::size_t> first_local_minimum(std::span<const double> curve);

struct LagSelection
{
    std::size_t tau = 1;
    bool fallback = false;        ///< no interior minimum up to max_lag, tau = 1
    std::vector<double> mi_curve; ///< MI at lags 1..max_lag
};

LagSelection select_tau(std::span<const double> x, std::size_t max_lag, const HistogramConfig &cfg);

/// False-nearest-neighbour criteria. A neighbour pair found in dimension d is
/// false when the extra coordinate separates it by more than
/// distance_tolerance * (distance in d), or when its distance in d+1 exceeds
/// attractor_tolerance * (standard deviation of the series).
struct FnnConfig
{
    double distance_tolerance = 10.0;
    double attractor_tolerance = 2.0;
    double fraction_threshold = 0.01;
};

struct DimensionSelection
{
    std::size_t kappa = 1;
    bool capped = false;                ///< threshold never reached, kappa = max_dim
    std::vector<double> fnn_fraction;   ///< fraction of false neighbours at d = 1..
};

/// False nearest-neighbour fraction when going from dimension d to d+1.
double false_neighbor_fraction(std::span<const double> x, std::size_t dim, std::size_t tau,
                               const FnnConfig &cfg);

/// Smallest dimension whose false-neighbour fraction drops below the threshold.
DimensionSelection select_kappa(std::span<const double> x, std::size_t tau, std::size_t max_dim,
                                const FnnConfig &cfg);
DimensionSelection select_kappa(std::span<const double> x, std::size_t tau, std::size_t max_dim,
                                double fnn_tolerance);

// ---------------------------------------------------------------------------
// Delay embedding and convergent cross mapping
// ---------------------------------------------------------------------------

struct EmbeddingConfig
{
    std::size_t kappa = 2;
    std::size_t tau = 1;
};

/// Lagged-coordinate reconstruction. Point i is
/// (x[j], x[j - tau], ..., x[j - (kappa-1) tau]) with j = time_index(i).
class ShadowManifold
{
public:
    ShadowManifold(std::size_t dim, std::vector<double> coords, std::vector<std::size_t> time_index);

    std::size_t size() const noexcept { return time_index_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    std::span<const double> point(std::size_t i) const noexcept
    {
        return {coords_.data() + i * dim_, dim_};
    }
    std::size_t time_index(std::size_t i) const noexcept { return time_index_[i]; }

private:
    std::size_t dim_;
    std::vector<double> coords_;
    std::vector<std::size_t> time_index_;
};

/// Throws InvalidArgument for kappa or tau of zero and TooShortForEmbedding
/// when no point would result.
ShadowManifold embed(std::span<const double> x, const EmbeddingConfig &cfg);

/// Order in which manifold points join the library: point i is ranked by
/// frac(i * 0.618...), so the first L library points cover the whole record
/// evenly and libraries of increasing length are nested.
std::vector<std::size_t> library_order(std::size_t point_count);

/// Cross-map skill for each library length: every manifold point (built from
/// the putative effect) is predicted from its `neighbor_count` nearest
/// neighbours among the first L library points (see library_order), itself
/// excluded, using weights exp(-d / d_min); the prediction targets `target`
/// (the putative cause) at the same time index. Distance ties go to the lower
/// time index. Returns corr(predicted, actual) per L.
std::vector<double> cross_map_skills(const ShadowManifold &source, std::span<const double> target,
                                     std::span<const std::size_t> library_lengths,
                                     std::size_t neighbor_count);

double cross_map_skill(const ShadowManifold &source, std::span<const double> target,
                       std::size_t library_len, std::size_t neighbor_count);

struct CcmConfig
{
    EmbeddingConfig embedding;
    std::vector<std::size_t> library_lengths; ///< empty: default_library_lengths
    double convergence_threshold = 0.05;
    std::size_t tail_count = 3;
    std::size_t neighbor_count = 0;       ///< 0: kappa + 1
    std::size_t convergence_windows = 8;
};

/// `count` evenly spaced lengths from max(50, 5 kappa tau) up to point_count.
std::vector<std::size_t> default_library_lengths(std::size_t point_count,
                                                  const EmbeddingConfig &embedding,
                                                  std::size_t count = 30);

struct ConvergenceCheck
{
    bool converged = false;
    std::vector<double> window_stdev;
};

/// The skill curve converges when the sample standard deviation over
/// trailing windows (window w covers skills[floor(w n / W)..n-1], w = 0..W-1)
/// strictly decreases as the window start moves to larger libraries, and the
/// last window's deviation is below `threshold`.
ConvergenceCheck check_convergence(std::span<const double> skills, std::size_t windows,
                                   double threshold);

struct CcmResult
{
    double value = 0.0;
    bool converged = false;
    std::vector<std::size_t> library_lengths;
    std::vector<double> skills;
    ConvergenceCheck convergence;
};

/// Causality cause -> effect: embeds `effect` and cross-maps `cause`.
/// Throws TooShortForEmbedding when fewer than kappa + 2 points result.
CcmResult ccm_detailed(std::span<const double> cause, std::span<const double> effect,
                       const CcmConfig &cfg);

/// Mean of the last tail_count skills when the skill curve converges, exactly 0 otherwise.
double ccm(std::span<const double> cause, std::span<const double> effect, const CcmConfig &cfg);

/// sqrt(2 (1 - rho)). Throws OutOfRange outside [-1, 1].
double correlation_distance(double rho);

} // namespace causal
