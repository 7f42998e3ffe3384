#include "causal/codependence.hpp"

#include "causal/error.hpp"

#include <array>
#include <utility>

namespace causal
{

namespace
{

constexpr std::array<std::pair<CodependenceKind, std::string_view>, 6> names{{
    {CodependenceKind::correlation, "correlation"},
    {CodependenceKind::te, "te"},
    {CodependenceKind::ccm, "ccm"},
    {CodependenceKind::surrogate_correlation, "surrogate-correlation"},
    {CodependenceKind::surrogate_te, "surrogate-te"},
    {CodependenceKind::surrogate_ccm, "surrogate-ccm"},
}};

CcmConfig embedding_for(std::span<const double> effect, const MeasureOptions &opts)
{
    CcmConfig cfg = opts.ccm;
    if (opts.auto_embedding) {
        cfg.embedding.tau = select_tau(effect, opts.max_lag, opts.histogram).tau;
        cfg.embedding.kappa = select_kappa(effect, cfg.embedding.tau, opts.max_dim, FnnConfig{}).kappa;
        cfg.library_lengths.clear();
    }
    return cfg;
}

} // namespace

std::string_view codependence_name(CodependenceKind kind) noexcept
{
    for (const auto &[k, name] : names) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

std::optional<CodependenceKind> parse_codependence(std::string_view name)
{
    if (name == "pearson") {
        return CodependenceKind::correlation;
    }
    if (name == "surrogate-pearson") {
        return CodependenceKind::surrogate_correlation;
    }
    for (const auto &[k, n] : names) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::vector<CodependenceKind> all_codependence_kinds()
{
    std::vector<CodependenceKind> out;
    for (const auto &entry : names) {
        out.push_back(entry.first);
    }
    return out;
}

bool is_directed(CodependenceKind kind) noexcept
{
    const CodependenceKind base = base_kind(kind);
    return base == CodependenceKind::te || base == CodependenceKind::ccm;
}

bool is_surrogate(CodependenceKind kind) noexcept
{
    return base_kind(kind) != kind;
}

CodependenceKind base_kind(CodependenceKind kind) noexcept
{
    switch (kind) {
    case CodependenceKind::surrogate_correlation:
        return CodependenceKind::correlation;
    case CodependenceKind::surrogate_te:
        return CodependenceKind::te;
    case CodependenceKind::surrogate_ccm:
        return CodependenceKind::ccm;
    default:
        return kind;
    }
}

BivariateMeasure make_measure(CodependenceKind kind, const MeasureOptions &opts)
{
    BivariateMeasure base;
    switch (base_kind(kind)) {
    case CodependenceKind::correlation:
        base = [](std::span<const double> a, std::span<const double> b) { return pearson(a, b); };
        break;
    case CodependenceKind::te:
        base = [hist = opts.histogram](std::span<const double> a, std::span<const double> b) {
            return transfer_entropy(a, b, hist);
        };
        break;
    case CodependenceKind::ccm:
        base = [opts](std::span<const double> a, std::span<const double> b) {
            return ccm(a, b, embedding_for(b, opts));
        };
        break;
    default:
        fail(Errc::InvalidArgument, "unknown co-dependence measure");
    }
    if (!is_surrogate(kind)) {
        return base;
    }
    return [base, surrogate = opts.surrogate](std::span<const double> a, std::span<const double> b) {
        return surrogate_measure(base, a, b, surrogate);
    };
}

} // namespace causal
