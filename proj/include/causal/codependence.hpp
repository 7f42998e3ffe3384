#pragma once

#include "causal/measures.hpp"
#include "causal/surrogates.hpp"
#include "causal/timeseries.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causal
{

/// Co-dependence measures that can drive the rolling analysis, the
/// decomposition and the finance applications.
enum class CodependenceKind
{
    correlation,
    te,
    ccm,
    surrogate_correlation,
    surrogate_te,
    surrogate_ccm,
};

/// "correlation", "te", "ccm", "surrogate-correlation", "surrogate-te", "surrogate-ccm".
std::string_view codependence_name(CodependenceKind kind) noexcept;

/// Inverse of codependence_name; "pearson" is accepted for "correlation".
std::optional<CodependenceKind> parse_codependence(std::string_view name);

std::vector<CodependenceKind> all_codependence_kinds();

/// TE and CCM (and their surrogates) differ between a -> b and b -> a.
bool is_directed(CodependenceKind kind) noexcept;

bool is_surrogate(CodependenceKind kind) noexcept;

/// The measure whose surrogate counterpart `kind` is (identity otherwise).
CodependenceKind base_kind(CodependenceKind kind) noexcept;

struct MeasureOptions
{
    HistogramConfig histogram;
    CcmConfig ccm;
    SurrogateConfig surrogate;
    /// Choose tau by mutual information and kappa by false nearest neighbours
    /// on each effect window instead of using ccm.embedding.
    bool auto_embedding = false;
    std::size_t max_lag = 10;
    std::size_t max_dim = 6;
};

/// Measure for the direction a -> b: transfer_entropy(a, b), ccm(a, b) with
/// b as the embedded effect, or pearson(a, b). Surrogate kinds average the
/// base measure over shared-phase surrogate pairs drawn from opts.surrogate.
BivariateMeasure make_measure(CodependenceKind kind, const MeasureOptions &opts);

} // namespace causal
