#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "quasifix/errors.hpp"
#include "quasifix/quasi_norm.hpp"
#include "quasifix/sampling.hpp"
#include "quasifix/vec.hpp"

namespace quasifix {

/// Relative tolerance for algebraic identities (homogeneity, round-trips).
constexpr double kIdentityTolerance = 1e-12;
/// Relative tolerance for inequality checks on sampled data.
constexpr double kInequalityTolerance = 1e-9;

using VectorPair = std::pair<Vector, Vector>;

/// Draws spec.count pairs of points from [-range, range]^dim, two draws per
/// pair from a single seeded stream.
inline std::vector<VectorPair> make_sample_pairs(int dim, const SampleSpec& spec) {
    if (dim < 1) throw InvalidParameter("sample dimension must be >= 1");
    if (spec.count < 1) throw InvalidParameter("sample count must be >= 1");
    if (!(spec.range > 0.0)) throw InvalidParameter("sample range must be > 0");
    std::mt19937_64 gen(spec.seed);
    std::vector<VectorPair> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        Vector x = draw_point(gen, dim, spec.range);
        Vector y = draw_point(gen, dim, spec.range);
        out.emplace_back(std::move(x), std::move(y));
    }
    return out;
}

/// All pairs (e_i, e_j), i < j, of canonical basis vectors. Appending these to
/// a random cloud pins down constants that random points only approach, e.g.
/// the disjoint-support pairs where the quasi-triangle ratio peaks.
inline std::vector<VectorPair> canonical_basis_pairs(int dim) {
    if (dim < 1) throw InvalidParameter("dimension must be >= 1");
    std::vector<VectorPair> out;
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            Vector ei(static_cast<std::size_t>(dim), 0.0);
            Vector ej(static_cast<std::size_t>(dim), 0.0);
            ei[static_cast<std::size_t>(i)] = 1.0;
            ej[static_cast<std::size_t>(j)] = 1.0;
            out.emplace_back(std::move(ei), std::move(ej));
        }
    }
    return out;
}

struct PNormReport {
    bool holds = true;
    double worst_ratio = 0.0;
    std::optional<VectorPair> witness;
};

/// Tests the subadditivity of ||.||^p pairwise: for every pair (x, y) checks
/// ||x+y||^p <= ||x||^p + ||y||^p. worst_ratio is the largest value of
/// ||x+y||^p / (||x||^p + ||y||^p); pairs with zero denominator are skipped.
/// A witness is reported when the worst ratio exceeds 1 + tolerance.
inline PNormReport check_p_norm(const QuasiNorm& norm, double p,
                                const std::vector<VectorPair>& samples, int jobs = 1) {
    if (!(p > 0.0) || p > 1.0) {
        throw InvalidParameter("p-norm exponent must lie in (0, 1], got " + std::to_string(p));
    }
    if (samples.empty()) throw EmptySampleSet("check_p_norm requires at least one pair");

    constexpr double kSkip = -std::numeric_limits<double>::infinity();
    const MaxResult worst = parallel_max(samples.size(), jobs, [&](std::size_t i) {
        const auto& [x, y] = samples[i];
        const double denom = std::pow(norm(x), p) + std::pow(norm(y), p);
        if (denom == 0.0) return kSkip;
        return std::pow(norm(add(x, y)), p) / denom;
    });

    PNormReport report;
    if (worst.value == kSkip) return report;
    report.worst_ratio = worst.value;
    report.holds = worst.value <= 1.0 + kInequalityTolerance;
    if (!report.holds) report.witness = samples[worst.index];
    return report;
}

struct QuasiTriangleReport {
    double empirical_C = 0.0;
    std::optional<VectorPair> violation_of_claimed_C;
};

/// Measures the largest observed quasi-triangle ratio ||x+y|| / (||x|| + ||y||)
/// over pairs with nonzero denominator. A witness is recorded only when the
/// observed ratio exceeds the analytic constant by more than the tolerance.
inline QuasiTriangleReport check_quasi_triangle(const QuasiNorm& norm,
                                                const std::vector<VectorPair>& samples,
                                                int jobs = 1) {
    if (samples.empty()) throw EmptySampleSet("check_quasi_triangle requires at least one pair");

    constexpr double kSkip = -std::numeric_limits<double>::infinity();
    const MaxResult worst = parallel_max(samples.size(), jobs, [&](std::size_t i) {
        const auto& [x, y] = samples[i];
        const double denom = norm(x) + norm(y);
        if (denom == 0.0) return kSkip;
        return norm(add(x, y)) / denom;
    });

    QuasiTriangleReport report;
    if (worst.value == kSkip) return report;
    report.empirical_C = worst.value;
    if (worst.value > norm.triangle_constant() * (1.0 + kInequalityTolerance)) {
        report.violation_of_claimed_C = samples[worst.index];
    }
    return report;
}

struct SeriesBoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    bool prefix_holds = false;
};

/// Checks the geometric series bound for partial sums: with C the norm's
/// quasi-triangle constant and 1-based term index n,
///   ||sum_{n=1..m} x_n|| <= sum_{n=1..m} C^(n+1) ||x_n||.
/// prefix_holds additionally verifies, for every j <= m, the intermediate
/// inequality ||sum_{k=1..j} x_k|| <= sum_{k=1..j} C^k ||x_k||.
inline SeriesBoundReport check_series_bound(const QuasiNorm& norm,
                                            const std::vector<Vector>& terms, int m) {
    if (m < 1 || static_cast<std::size_t>(m) > terms.size()) {
        throw IndexOutOfRange("series length m = " + std::to_string(m) +
                              " outside [1, " + std::to_string(terms.size()) + "]");
    }

    const double C = norm.triangle_constant();
    Vector partial = terms[0];
    double rhs = 0.0;
    double prefix_rhs = 0.0;
    bool prefix_holds = true;
    for (int n = 1; n <= m; ++n) {
        if (n > 1) partial = add(partial, terms[static_cast<std::size_t>(n - 1)]);
        const double term_norm = norm(terms[static_cast<std::size_t>(n - 1)]);
        rhs += std::pow(C, n + 1) * term_norm;
        prefix_rhs += std::pow(C, n) * term_norm;
        if (norm(partial) > prefix_rhs * (1.0 + kInequalityTolerance)) prefix_holds = false;
    }

    SeriesBoundReport report;
    report.lhs = norm(partial);
    report.rhs = rhs;
    report.holds = report.lhs <= rhs * (1.0 + kInequalityTolerance);
    report.prefix_holds = prefix_holds;
    return report;
}

struct HomogeneityReport {
    bool holds = true;
    double worst_rel_err = 0.0;
};

/// Verifies absolute homogeneity ||s x|| = |s| ||x|| on each (scale, sample)
/// pair, comparing relative error against the identity tolerance.
inline HomogeneityReport check_homogeneity(const QuasiNorm& norm,
                                           const std::vector<Vector>& samples,
                                           const std::vector<double>& scales, int jobs = 1) {
    if (samples.empty()) throw EmptySampleSet("check_homogeneity requires samples");
    if (scales.size() != samples.size()) {
        throw InvalidParameter("need one scale per sample");
    }

    const MaxResult worst = parallel_max(samples.size(), jobs, [&](std::size_t i) {
        const double s = scales[i];
        const double lhs = norm(scale(s, samples[i]));
        const double rhs = std::abs(s) * norm(samples[i]);
        const double denom = std::max(std::abs(rhs), 1.0);
        return std::abs(lhs - rhs) / denom;
    });

    HomogeneityReport report;
    report.worst_rel_err = worst.value;
    report.holds = worst.value <= kIdentityTolerance;
    return report;
}

/// Verifies ||x|| = 0 iff x = 0: the zero vector maps to exactly zero and
/// every nonzero sample maps to a strictly positive value.
inline bool check_separation(const QuasiNorm& norm, const std::vector<Vector>& samples) {
    if (norm(Vector(static_cast<std::size_t>(norm.dim()), 0.0)) != 0.0) return false;
    for (const auto& x : samples) {
        const double v = norm(x);
        if (is_zero(x) ? v != 0.0 : !(v > 0.0)) return false;
    }
    return true;
}

} // namespace quasifix
