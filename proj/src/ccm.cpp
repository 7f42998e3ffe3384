#include "causal/error.hpp"
#include "causal/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace causal
{

namespace
{

struct Neighbor
{
    double dist2;
    std::size_t index;

    // Equal distances resolve to the lower time index (point order follows time).
    bool operator<(const Neighbor &other) const
    {
        return dist2 < other.dist2 || (dist2 == other.dist2 && index < other.index);
    }
};

/// Keeps the k nearest candidates offered so far.
class NearestSet
{
public:
    explicit NearestSet(std::size_t k) : k_(k) { items_.reserve(k + 1); }

    void offer(double dist2, std::size_t index)
    {
        const Neighbor candidate{dist2, index};
        if (items_.size() == k_ && !(candidate < items_.back())) {
            return;
        }
        auto pos = std::upper_bound(items_.begin(), items_.end(), candidate);
        items_.insert(pos, candidate);
        if (items_.size() > k_) {
            items_.pop_back();
        }
    }

    std::span<const Neighbor> items() const { return items_; }

private:
    std::size_t k_;
    std::vector<Neighbor> items_;
};

double predict(std::span<const Neighbor> neighbors, const ShadowManifold &source,
               std::span<const double> target)
{
    const double d_min = std::sqrt(neighbors.front().dist2);
    if (d_min == 0.0) {
        // Duplicate points: split the weight equally among the exact matches.
        double sum = 0.0;
        std::size_t hits = 0;
        for (const auto &n : neighbors) {
            if (n.dist2 != 0.0) {
                break;
            }
            sum += target[source.time_index(n.index)];
            ++hits;
        }
        return sum / static_cast<double>(hits);
    }
    double weighted = 0.0;
    double total = 0.0;
    for (const auto &n : neighbors) {
        const double w = std::exp(-std::sqrt(n.dist2) / d_min);
        weighted += w * target[source.time_index(n.index)];
        total += w;
    }
    return weighted / total;
}

} // namespace

std::vector<std::size_t> library_order(std::size_t point_count)
{
    // Weyl sequence frac(i / golden ratio): the first L entries of the order
    // are spread over the whole record with gaps of roughly point_count / L.
    constexpr double step = 0.6180339887498949;
    std::vector<double> key(point_count);
    for (std::size_t i = 0; i < point_count; ++i) {
        key[i] = std::fmod(static_cast<double>(i) * step, 1.0);
    }
    std::vector<std::size_t> order(point_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    return order;
}

std::vector<double> cross_map_skills(const ShadowManifold &source, std::span<const double> target,
                                     std::span<const std::size_t> library_lengths,
                                     std::size_t neighbor_count)
{
    const std::size_t n = source.size();
    if (library_lengths.empty()) {
        fail(Errc::InvalidArgument, "no library lengths given");
    }
    if (neighbor_count == 0) {
        fail(Errc::InvalidArgument, "neighbour count must be positive");
    }
    for (std::size_t i = 0; i < library_lengths.size(); ++i) {
        if (i > 0 && library_lengths[i] <= library_lengths[i - 1]) {
            fail(Errc::InvalidArgument, "library lengths must be strictly increasing");
        }
    }
    if (library_lengths.front() <= neighbor_count) {
        fail(Errc::InvalidArgument, "library length must exceed the neighbour count");
    }
    if (library_lengths.back() > n) {
        fail(Errc::InvalidArgument, "library length " + std::to_string(library_lengths.back()) +
                                        " exceeds the " + std::to_string(n) + " manifold points");
    }
    if (target.size() <= source.time_index(n - 1)) {
        fail(Errc::LengthMismatch, "target series shorter than the manifold's source series");
    }

    const std::size_t dim = source.dim();
    const std::size_t max_lib = library_lengths.back();
    const auto order = library_order(n);
    std::vector<std::vector<double>> predictions(library_lengths.size(), std::vector<double>(n));
    std::vector<double> actual(n);

    for (std::size_t i = 0; i < n; ++i) {
        actual[i] = target[source.time_index(i)];
        const auto p = source.point(i);
        NearestSet nearest(neighbor_count);
        std::size_t checkpoint = 0;
        for (std::size_t admitted = 0; admitted < max_lib; ++admitted) {
            const std::size_t j = order[admitted];
            if (j != i) {
                const auto q = source.point(j);
                double d2 = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    const double diff = p[c] - q[c];
                    d2 += diff * diff;
                }
                nearest.offer(d2, j);
            }
            while (checkpoint < library_lengths.size() && library_lengths[checkpoint] == admitted + 1) {
                predictions[checkpoint][i] = predict(nearest.items(), source, target);
                ++checkpoint;
            }
        }
    }

    std::vector<double> skills;
    skills.reserve(library_lengths.size());
    for (std::size_t c = 0; c < library_lengths.size(); ++c) {
        const auto &pred = predictions[c];
        const auto [mn, mx] = std::minmax_element(pred.begin(), pred.end());
        if (*mn == *mx) {
            fail(Errc::DegeneratePrediction,
                 "constant cross-map predictions at library length " +
                     std::to_string(library_lengths[c]));
        }
        skills.push_back(pearson(pred, actual));
    }
    return skills;
}

double cross_map_skill(const ShadowManifold &source, std::span<const double> target,
                       std::size_t library_len, std::size_t neighbor_count)
{
    const std::size_t lengths[] = {library_len};
    return cross_map_skills(source, target, lengths, neighbor_count).front();
}

std::vector<std::size_t> default_library_lengths(std::size_t point_count,
                                                  const EmbeddingConfig &embedding,
                                                  std::size_t count)
{
    const std::size_t neighbors = embedding.kappa + 1;
    std::size_t lo = std::max<std::size_t>(50, 5 * embedding.kappa * embedding.tau);
    if (lo >= point_count) {
        lo = std::min(point_count, neighbors + 1);
    }
    std::vector<std::size_t> out;
    if (count <= 1 || lo == point_count) {
        out.push_back(point_count);
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t len = lo + (point_count - lo) * i / (count - 1);
        if (out.empty() || len > out.back()) {
            out.push_back(len);
        }
    }
    return out;
}

namespace
{

double sample_stdev(std::span<const double> v)
{
    if (v.size() < 2) {
        return 0.0;
    }
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace

ConvergenceCheck check_convergence(std::span<const double> skills, std::size_t windows,
                                   double threshold)
{
    if (windows == 0) {
        fail(Errc::InvalidArgument, "need at least one convergence window");
    }
    ConvergenceCheck out;
    const std::size_t n = skills.size();
    if (n < 2) {
        return out;
    }
    windows = std::min(windows, n / 2 == 0 ? std::size_t{1} : n / 2);

    // Window w spans the skills from library index floor(w n / W) to the end:
    // the windows expand backwards from the largest library, and a converging
    // curve shows a shrinking spread as the window start moves to larger libraries.
    for (std::size_t w = 0; w < windows; ++w) {
        const std::size_t begin = w * n / windows;
        out.window_stdev.push_back(sample_stdev(skills.subspan(begin)));
    }
    bool decreasing = true;
    for (std::size_t w = 1; w < out.window_stdev.size(); ++w) {
        decreasing = decreasing && out.window_stdev[w] < out.window_stdev[w - 1];
    }
    out.converged = decreasing && out.window_stdev.back() < threshold;
    return out;
}

CcmResult ccm_detailed(std::span<const double> cause, std::span<const double> effect,
                       const CcmConfig &cfg)
{
    if (cause.size() != effect.size()) {
        fail(Errc::LengthMismatch, "ccm needs equal lengths");
    }
    if (cfg.tail_count == 0) {
        fail(Errc::InvalidArgument, "tail count must be positive");
    }
    const ShadowManifold manifold = embed(effect, cfg.embedding);
    if (manifold.size() < cfg.embedding.kappa + 2) {
        fail(Errc::TooShortForEmbedding, "ccm needs at least kappa + 2 embedded points, got " +
                                             std::to_string(manifold.size()));
    }
    const std::size_t neighbors = cfg.neighbor_count == 0 ? cfg.embedding.kappa + 1 : cfg.neighbor_count;

    CcmResult out;
    out.library_lengths = cfg.library_lengths.empty()
                              ? default_library_lengths(manifold.size(), cfg.embedding)
                              : cfg.library_lengths;
    if (cfg.tail_count > out.library_lengths.size()) {
        fail(Errc::InvalidArgument, "tail count exceeds the number of library lengths");
    }
    out.skills = cross_map_skills(manifold, cause, out.library_lengths, neighbors);
    out.convergence = check_convergence(out.skills, cfg.convergence_windows, cfg.convergence_threshold);
    out.converged = out.convergence.converged;
    if (out.converged) {
        const auto tail = std::span<const double>(out.skills).last(cfg.tail_count);
        out.value = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(cfg.tail_count);
    }
    return out;
}

double ccm(std::span<const double> cause, std::span<const double> effect, const CcmConfig &cfg)
{
    return ccm_detailed(cause, effect, cfg).value;
}

} // namespace causal
