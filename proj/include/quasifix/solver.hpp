#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasifix/enrichment.hpp"
#include "quasifix/errors.hpp"
#include "quasifix/map.hpp"
#include "quasifix/norm_checks.hpp"
#include "quasifix/quasi_norm.hpp"
#include "quasifix/vec.hpp"

namespace quasifix {

/// Ratios at or above 1 - margin count toward the divergence gate.
constexpr double kDivergenceMargin = 1e-6;
/// Any iterate coordinate beyond this magnitude aborts the solve.
constexpr double kOverflowLimit = 1e150;
/// Slack factor applied to tol when certifying shared fixed points.
constexpr double kCertificationSlack = 10.0;

struct SolverConfig {
    double tol = 1e-10;
    int max_iter = 10000;
    std::optional<double> lambda_override;
    int divergence_window = 20;
};

/// The iterate history of one solve: points x_0, x_1, ...; residuals
/// r_n = d(x_{n+1}, x_n); and ratios r_n / r_{n-1} for steps whose previous
/// residual was positive.
struct IterationTrace {
    std::vector<Vector> points;
    std::vector<double> residuals;
    std::vector<double> ratios;
};

struct FixedPointResult {
    Vector point;
    int iterations = 0;
    IterationTrace trace;
    EnrichedParams params;
    double certified_residual = 0.0; // d(T(point), point) under the original map
    double lambda_used = 1.0;
    std::optional<double> certified_residual_base; // asymptotic mode: d(U(point), point)
    std::vector<double> residuals_rho;             // two-norm mode: residuals in the rho norm
    std::optional<double> certified_residual_rho;  // two-norm mode: rho-norm certificate
};

/// Base for solver failures; carries whatever was computed before the abort.
struct SolverFailure : Error {
    SolverFailure(const std::string& what, FixedPointResult partial_result)
        : Error(what), partial(std::move(partial_result)) {}
    FixedPointResult partial;
};

struct MaxIterationsExceeded : SolverFailure {
    using SolverFailure::SolverFailure;
};
struct DivergenceDetected : SolverFailure {
    using SolverFailure::SolverFailure;
};
struct NumericalOverflow : SolverFailure {
    using SolverFailure::SolverFailure;
};
/// Raised by asymptotic_solve when the fixed point of the N-th iterate fails
/// certification under the base map.
struct FixedPointNotShared : SolverFailure {
    using SolverFailure::SolverFailure;
};
/// Raised by maia_solve when a sample breaks the norm domination condition.
struct DominationViolated : Error {
    DominationViolated(const std::string& what, Vector witness_vector)
        : Error(what), witness(std::move(witness_vector)) {}
    Vector witness;
};

/// A-priori error bound i steps past the iterate whose incoming residual was
/// last_residual: (c^i / (1 - c)) * last_residual.
inline double error_bound(double c, int i, double last_residual) {
    if (!(c > 0.0) || !(c < 1.0)) {
        throw InvalidParameter("error_bound requires 0 < c < 1, got " + std::to_string(c));
    }
    if (i < 1) throw InvalidParameter("error_bound requires i >= 1");
    if (!(last_residual >= 0.0)) throw InvalidParameter("last_residual must be >= 0");
    return std::pow(c, i) / (1.0 - c) * last_residual;
}

struct CauchyRatioReport {
    double gamma_hat = 0.0;
    bool is_contractive_tail = false;
};

/// Empirical contraction check on the tail of a trace: gamma_hat is the
/// largest of the last `window` ratios r_n / r_{n-1}, skipping steps whose
/// previous residual was zero (all-zero tails give 0 by convention). The tail
/// is contractive when gamma_hat < 1 - margin.
inline CauchyRatioReport cauchy_ratio_check(const IterationTrace& trace, int window,
                                            double margin = kDivergenceMargin) {
    if (window < 1) throw InvalidParameter("window must be >= 1");
    const auto& r = trace.residuals;
    if (r.size() < static_cast<std::size_t>(window) + 1) {
        throw InsufficientTrace("need at least " + std::to_string(window + 1) +
                                " residuals, have " + std::to_string(r.size()));
    }
    CauchyRatioReport report;
    for (std::size_t n = r.size() - static_cast<std::size_t>(window); n < r.size(); ++n) {
        if (r[n - 1] == 0.0) continue;
        report.gamma_hat = std::max(report.gamma_hat, r[n] / r[n - 1]);
    }
    report.is_contractive_tail = report.gamma_hat < 1.0 - margin;
    return report;
}

namespace detail {

inline void validate_solver_config(const SolverConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw InvalidParameter("tol must be > 0");
    if (cfg.max_iter < 1) throw InvalidParameter("max_iter must be >= 1");
    if (cfg.divergence_window < 1) throw InvalidParameter("divergence_window must be >= 1");
    if (cfg.lambda_override &&
        (!(*cfg.lambda_override > 0.0) || *cfg.lambda_override > 1.0)) {
        throw InvalidParameter("lambda_override must lie in (0, 1]");
    }
}

inline double safe_certified_residual(const Map& T, const QuasiNorm& norm, const Vector& p) {
    try {
        return norm.distance(T(p), p);
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

// Shared averaged-iteration loop. Stopping and the recorded residuals use
// stop_norm; the divergence gate watches ratios in gate_norm, which is the
// same object unless the caller runs a two-norm scheme. When the norms
// differ, gate-norm residuals are also recorded in residuals_rho.
inline FixedPointResult iterate_averaged(const Map& T, const EnrichedParams& params,
                                         const QuasiNorm& stop_norm, const QuasiNorm& gate_norm,
                                         bool two_norm, const Vector& x0,
                                         const SolverConfig& cfg) {
    validate_solver_config(cfg);
    if (!is_finite(x0)) throw InvalidParameter("x0 must be finite");
    const double lambda = cfg.lambda_override.value_or(params.lambda);

    FixedPointResult result;
    result.params = params;
    result.lambda_used = lambda;
    result.trace.points.push_back(x0);

    auto finish = [&](const Vector& p) {
        result.point = p;
        result.iterations = static_cast<int>(result.trace.residuals.size());
        result.certified_residual = safe_certified_residual(T, stop_norm, p);
        if (two_norm) result.certified_residual_rho = safe_certified_residual(T, gate_norm, p);
    };
    auto fail = [&](const Vector& p) {
        finish(p);
        return result;
    };

    Vector x = x0;
    int bad_streak = 0;
    double prev_gate_residual = -1.0;
    for (int step = 0; step < cfg.max_iter; ++step) {
        const Vector tx = T(x);
        const Vector xnext = blend(x, tx, lambda);
        if (!is_finite(xnext)) {
            throw NumericalOverflow("iterate became non-finite at step " +
                                    std::to_string(step + 1), fail(x));
        }

        const double r = stop_norm.distance(xnext, x);
        if (!result.trace.residuals.empty() && result.trace.residuals.back() > 0.0) {
            result.trace.ratios.push_back(r / result.trace.residuals.back());
        }
        result.trace.points.push_back(xnext);
        result.trace.residuals.push_back(r);

        double gate_residual = r;
        if (two_norm) {
            gate_residual = gate_norm.distance(xnext, x);
            result.residuals_rho.push_back(gate_residual);
        }

        x = xnext;
        if (max_abs(x) > kOverflowLimit) {
            throw NumericalOverflow("iterate magnitude exceeded " + std::to_string(kOverflowLimit) +
                                    " at step " + std::to_string(step + 1), fail(x));
        }
        if (r <= cfg.tol) {
            finish(x);
            return result;
        }
        if (prev_gate_residual > 0.0) {
            bad_streak = gate_residual >= prev_gate_residual * (1.0 - kDivergenceMargin)
                             ? bad_streak + 1
                             : 0;
            if (bad_streak >= cfg.divergence_window) {
                throw DivergenceDetected("no contraction over " +
                                         std::to_string(cfg.divergence_window) +
                                         " consecutive steps", fail(x));
            }
        }
        prev_gate_residual = gate_residual;
    }
    throw MaxIterationsExceeded("no convergence within " + std::to_string(cfg.max_iter) +
                                " iterations", fail(x));
}

} // namespace detail

/// Averaged (Krasnoselskij) iteration x_{n+1} = (1 - lambda) x_n + lambda T x_n
/// with lambda = params.lambda unless overridden. Stops when the residual
/// d(x_{n+1}, x_n) drops to cfg.tol; aborts with DivergenceDetected when a
/// full window of consecutive residual ratios stays at or above 1 - margin,
/// and with NumericalOverflow when iterates leave [-1e150, 1e150]^n. With
/// b = 0 the weight is 1 and the scheme is plain Picard iteration.
inline FixedPointResult krasnoselskij_solve(const Map& T, const EnrichedParams& params,
                                            const QuasiNorm& norm, const Vector& x0,
                                            const SolverConfig& cfg = {}) {
    return detail::iterate_averaged(T, params, norm, norm, /*two_norm=*/false, x0, cfg);
}

/// Solves with the N-th iterate of U, then certifies that the returned point
/// is also fixed by U itself: d(U(p), p) must not exceed tol times
/// kCertificationSlack, otherwise FixedPointNotShared is raised. The result
/// records the base-map residual in certified_residual_base.
inline FixedPointResult asymptotic_solve(const Map& U, int N, const EnrichedParams& params,
                                         const QuasiNorm& norm, const Vector& x0,
                                         const SolverConfig& cfg = {}) {
    FixedPointResult result = krasnoselskij_solve(Map::power(U, N), params, norm, x0, cfg);
    const double base_residual = norm.distance(U(result.point), result.point);
    result.certified_residual_base = base_residual;
    if (base_residual > cfg.tol * kCertificationSlack) {
        throw FixedPointNotShared("point fixed by the " + std::to_string(N) +
                                      "-th iterate but not by the map itself: residual " +
                                      std::to_string(base_residual),
                                  std::move(result));
    }
    return result;
}

/// Two-norm scheme: first verifies the domination ||z||_d <= ||z||_rho on
/// every sample (raising DominationViolated with the witness otherwise), then
/// iterates with stopping measured in norm_d while the divergence gate watches
/// ratios in norm_rho, where the contraction hypothesis lives. Residuals are
/// recorded in both norms.
inline FixedPointResult maia_solve(const Map& T, const QuasiNorm& norm_d,
                                   const QuasiNorm& norm_rho, const EnrichedParams& params,
                                   const Vector& x0, const SolverConfig& cfg,
                                   const std::vector<Vector>& domination_samples) {
    if (domination_samples.empty()) {
        throw EmptySampleSet("maia_solve requires domination samples");
    }
    for (const auto& z : domination_samples) {
        const double vd = norm_d(z);
        const double vrho = norm_rho(z);
        if (vd > vrho * (1.0 + kInequalityTolerance)) {
            throw DominationViolated("norm domination failed on a sample: " +
                                         std::to_string(vd) + " > " + std::to_string(vrho),
                                     z);
        }
    }
    return detail::iterate_averaged(T, params, norm_d, norm_rho, /*two_norm=*/true, x0, cfg);
}

} // namespace quasifix
