#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "quasifix/errors.hpp"
#include "quasifix/map.hpp"
#include "quasifix/norm_checks.hpp"
#include "quasifix/quasi_norm.hpp"
#include "quasifix/sampling.hpp"
#include "quasifix/vec.hpp"

namespace quasifix {

/// Sampled theta estimates at or below this value are treated as degenerate:
/// the probed displacement field vanished on every sample, which finite
/// sampling cannot distinguish from a blind spot, so such grid entries are
/// not trusted as search candidates.
constexpr double kDegenerateThetaTolerance = 1e-12;

/// Parameters (b, theta) of the averaged-iteration scheme, together with the
/// derived weight lambda = 1/(b+1) and contraction factor c = lambda * theta.
/// Validity requires theta in [0, b+1), which makes c < 1.
struct EnrichedParams {
    double b = 0.0;
    double theta = 0.0;
    double lambda = 1.0;
    double c = 0.0;
    bool empirical = false; // true when theta came from sampling, not analysis
};

inline EnrichedParams make_enriched_params(double b, double theta, bool empirical = false) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw InvalidParameter("enrichment parameter b must be finite and >= 0, got " +
                               std::to_string(b));
    }
    if (!(theta >= 0.0) || !(theta < b + 1.0)) {
        throw InvalidParameter("theta must lie in [0, b+1), got theta = " + std::to_string(theta) +
                               " with b = " + std::to_string(b));
    }
    EnrichedParams params;
    params.b = b;
    params.theta = theta;
    params.lambda = 1.0 / (b + 1.0);
    params.c = params.lambda * theta;
    params.empirical = empirical;
    return params;
}

/// Empirical estimate of the smallest theta with
///   ||b(x - y) + Tx - Ty|| <= theta ||x - y||
/// over the sampled pairs: the maximum of the left/right ratio. A lower bound
/// on the true coefficient; pairs with x = y are skipped.
inline double estimate_theta(const Map& T, double b, const QuasiNorm& norm,
                             const std::vector<VectorPair>& samples, int jobs = 1) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw InvalidParameter("enrichment parameter b must be finite and >= 0");
    }
    if (samples.empty()) throw EmptySampleSet("estimate_theta requires at least one pair");

    constexpr double kSkip = -std::numeric_limits<double>::infinity();
    const MaxResult worst = parallel_max(samples.size(), jobs, [&](std::size_t i) {
        const auto& [x, y] = samples[i];
        Vector diff = subtract(x, y);
        if (is_zero(diff)) return kSkip;
        const Vector probe = add(scale(b, diff), subtract(T(x), T(y)));
        return norm(probe) / norm(diff);
    });
    if (worst.value == kSkip) {
        throw DegeneratePair("estimate_theta saw only pairs with x = y");
    }
    return worst.value;
}

inline std::vector<double> default_b_grid() {
    return {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 9.0};
}

/// Scans b over the grid, estimating theta for each, and returns the
/// parameters with the smallest contraction factor c = theta/(b+1) among the
/// entries with theta < b+1. Entries whose estimate collapses below
/// kDegenerateThetaTolerance are skipped as unsupported by the samples, and
/// near-ties in c (relative 1e-12) keep the earlier grid entry. Returns
/// nullopt when no entry qualifies.
inline std::optional<EnrichedParams> search_enrichment(const Map& T, const QuasiNorm& norm,
                                                       const std::vector<double>& b_grid,
                                                       const std::vector<VectorPair>& samples,
                                                       int jobs = 1) {
    if (b_grid.empty()) throw InvalidParameter("b_grid must be nonempty");
    if (samples.empty()) throw EmptySampleSet("search_enrichment requires samples");

    std::optional<EnrichedParams> best;
    for (double b : b_grid) {
        const double theta = estimate_theta(T, b, norm, samples, jobs);
        if (theta <= kDegenerateThetaTolerance) continue;
        if (!(theta < b + 1.0)) continue;
        EnrichedParams candidate = make_enriched_params(b, theta, /*empirical=*/true);
        if (!best || candidate.c < best->c * (1.0 - kIdentityTolerance)) best = candidate;
    }
    return best;
}

/// Exact theta for maps whose enriched coefficient is known in closed form:
/// the reflection gives |b - 1| and an affine map with scalar matrix alpha*I
/// gives |b + alpha|. Returns nullopt for other maps.
inline std::optional<double> analytic_theta(const Map& T, double b) {
    if (T.kind() == MapKind::Reflection) return std::abs(b - 1.0);
    if (T.kind() == MapKind::Affine) {
        const Matrix& A = T.matrix();
        const double alpha = A[0][0];
        for (std::size_t i = 0; i < A.size(); ++i) {
            for (std::size_t j = 0; j < A.size(); ++j) {
                if (A[i][j] != (i == j ? alpha : 0.0)) return std::nullopt;
            }
        }
        return std::abs(b + alpha);
    }
    return std::nullopt;
}

} // namespace quasifix
