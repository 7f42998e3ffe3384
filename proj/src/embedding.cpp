#include "causal/error.hpp"
#include "causal/measures.hpp"

#include <cmath>
#include <limits>

namespace causal
{

ShadowManifold::ShadowManifold(std::size_t dim, std::vector<double> coords,
                               std::vector<std::size_t> time_index)
    : dim_(dim), coords_(std::move(coords)), time_index_(std::move(time_index))
{
    if (dim_ == 0 || coords_.size() != dim_ * time_index_.size()) {
        fail(Errc::InvalidArgument, "manifold coordinates do not match its dimension");
    }
}

ShadowManifold embed(std::span<const double> x, const EmbeddingConfig &cfg)
{
    if (cfg.kappa == 0 || cfg.tau == 0) {
        fail(Errc::InvalidArgument, "embedding dimension and delay must be positive");
    }
    const std::size_t span = (cfg.kappa - 1) * cfg.tau;
    if (x.size() <= span) {
        fail(Errc::TooShortForEmbedding,
             "series of length " + std::to_string(x.size()) + " too short for kappa=" +
                 std::to_string(cfg.kappa) + ", tau=" + std::to_string(cfg.tau));
    }
    const std::size_t count = x.size() - span;
    std::vector<double> coords;
    coords.reserve(count * cfg.kappa);
    std::vector<std::size_t> index;
    index.reserve(count);
    for (std::size_t j = span; j < x.size(); ++j) {
        for (std::size_t c = 0; c < cfg.kappa; ++c) {
            coords.push_back(x[j - c * cfg.tau]);
        }
        index.push_back(j);
    }
    return ShadowManifold(cfg.kappa, std::move(coords), std::move(index));
}

double false_neighbor_fraction(std::span<const double> x, std::size_t dim, std::size_t tau,
                               const FnnConfig &cfg)
{
    if (dim == 0 || tau == 0) {
        fail(Errc::InvalidArgument, "dimension and delay must be positive");
    }
    // Point j = (x[j], x[j - tau], ..., x[j - (dim-1) tau]); the coordinate
    // added when moving to dim + 1 is x[j + tau], one delay ahead.
    const std::size_t first = (dim - 1) * tau;
    if (x.size() < first + tau + 3) {
        fail(Errc::TooShortForEmbedding, "series too short for false-neighbour test");
    }
    const std::size_t last = x.size() - tau; // exclusive
    const std::size_t count = last - first;

    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) {
        var += (v - mean) * (v - mean);
    }
    const double attractor_size = std::sqrt(var / static_cast<double>(x.size()));

    std::size_t false_count = 0;
    for (std::size_t a = first; a < last; ++a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t nearest = a;
        for (std::size_t b = first; b < last; ++b) {
            if (b == a) {
                continue;
            }
            double d2 = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double diff = x[a - c * tau] - x[b - c * tau];
                d2 += diff * diff;
            }
            if (d2 < best) {
                best = d2;
                nearest = b;
            }
        }
        const double dist = std::sqrt(best);
        const double extra = std::abs(x[a + tau] - x[nearest + tau]);
        const bool ratio_test = extra > cfg.distance_tolerance * dist;
        const bool size_test = std::sqrt(best + extra * extra) > cfg.attractor_tolerance * attractor_size;
        if (ratio_test || size_test) {
            ++false_count;
        }
    }
    return static_cast<double>(false_count) / static_cast<double>(count);
}

DimensionSelection select_kappa(std::span<const double> x, std::size_t tau, std::size_t max_dim,
                                const FnnConfig &cfg)
{
    if (max_dim < 2) {
        fail(Errc::InvalidArgument, "max_dim must be at least 2");
    }
    DimensionSelection out;
    for (std::size_t d = 1; d <= max_dim; ++d) {
        const double fraction = false_neighbor_fraction(x, d, tau, cfg);
        out.fnn_fraction.push_back(fraction);
        if (fraction < cfg.fraction_threshold) {
            out.kappa = d;
            return out;
        }
    }
    out.kappa = max_dim;
    out.capped = true;
    return out;
}

DimensionSelection select_kappa(std::span<const double> x, std::size_t tau, std::size_t max_dim,
                                double fnn_tolerance)
{
    FnnConfig cfg;
    cfg.distance_tolerance = fnn_tolerance;
    return select_kappa(x, tau, max_dim, cfg);
}

} // namespace causal
