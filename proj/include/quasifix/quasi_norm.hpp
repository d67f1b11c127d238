#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "quasifix/errors.hpp"
#include "quasifix/vec.hpp"

namespace quasifix {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class NormKind {
    StandardP,     // usual l_p norm, p >= 1 (p = inf for the max norm); C = 1
    MaligrandaAP,  // two-branch norm on R^2: l_p when x2 != 0, a*|x1| when x2 = 0
    TychonoffHalf, // (sum sqrt|x_i|)^2; C = 2
    PQuasi,        // (sum |x_i|^p)^(1/p) with 0 < p < 1; C = 2^(1/p - 1)
};

namespace detail {

// Overflow-safe (sum |x_i|^p)^(1/p); valid for any p > 0.
inline double scaled_p_sum(const Vector& x, double p) {
    const double m = max_abs(x);
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v) / m, p);
    return m * std::pow(s, 1.0 / p);
}

inline double max_norm(const Vector& x) {
    return max_abs(x);
}

} // namespace detail

/// A functional ||.|| satisfying the norm axioms except that the triangle
/// inequality only holds up to a multiplicative constant C >= 1:
///   ||x + y|| <= C (||x|| + ||y||).
/// Instances are immutable value types describing one functional from the
/// catalog together with its dimension.
class QuasiNorm {
public:
    static QuasiNorm standard_p(double p, int dim) {
        validate_dim(dim);
        if (std::isnan(p) || p < 1.0) {
            throw InvalidParameter("standard_p requires p >= 1 (or inf), got " + std::to_string(p));
        }
        return QuasiNorm(NormKind::StandardP, p, 0.0, dim);
    }

    static QuasiNorm maligranda_ap(double a, double p) {
        if (!(a > 0.0) || a == 1.0) {
            throw InvalidParameter("maligranda_ap requires a > 0 and a != 1, got " + std::to_string(a));
        }
        if (std::isnan(p) || p < 1.0) {
            throw InvalidParameter("maligranda_ap requires 1 <= p <= inf, got " + std::to_string(p));
        }
        return QuasiNorm(NormKind::MaligrandaAP, p, a, 2);
    }

    static QuasiNorm tychonoff_half(int dim) {
        validate_dim(dim);
        return QuasiNorm(NormKind::TychonoffHalf, 0.5, 0.0, dim);
    }

    static QuasiNorm p_quasi(double p, int dim) {
        validate_dim(dim);
        if (!(p > 0.0) || !(p < 1.0)) {
            throw InvalidParameter("p_quasi requires 0 < p < 1, got " + std::to_string(p));
        }
        return QuasiNorm(NormKind::PQuasi, p, 0.0, dim);
    }

    NormKind kind() const { return kind_; }
    double p() const { return p_; }
    double a() const { return a_; }
    int dim() const { return dim_; }

    /// Evaluates ||x||. Zero iff x = 0, absolutely homogeneous.
    double operator()(const Vector& x) const {
        check_input(x);
        switch (kind_) {
        case NormKind::StandardP:
            if (std::isinf(p_)) return detail::max_norm(x);
            return detail::scaled_p_sum(x, p_);
        case NormKind::MaligrandaAP:
            if (x[1] == 0.0) return a_ * std::abs(x[0]);
            if (std::isinf(p_)) return detail::max_norm(x);
            return detail::scaled_p_sum(x, p_);
        case NormKind::TychonoffHalf: {
            double s = 0.0;
            for (double v : x) s += std::sqrt(std::abs(v));
            return s * s;
        }
        case NormKind::PQuasi:
            return detail::scaled_p_sum(x, p_);
        }
        throw InvalidParameter("unknown norm kind");
    }

    /// Induced distance d(x, y) = ||x - y||. Symmetric, zero iff x = y, and
    /// satisfies the triangle inequality up to the factor triangle_constant().
    double distance(const Vector& x, const Vector& y) const {
        return (*this)(subtract(x, y));
    }

    /// The analytic quasi-triangle constant for this catalog entry.
    double triangle_constant() const {
        switch (kind_) {
        case NormKind::StandardP:
            return 1.0;
        case NormKind::MaligrandaAP:
            return std::max(a_, 1.0 / a_);
        case NormKind::TychonoffHalf:
            return 2.0;
        case NormKind::PQuasi:
            return std::exp2(1.0 / p_ - 1.0);
        }
        throw InvalidParameter("unknown norm kind");
    }

private:
    QuasiNorm(NormKind kind, double p, double a, int dim)
        : kind_(kind), p_(p), a_(a), dim_(dim) {}

    static void validate_dim(int dim) {
        if (dim < 1) throw InvalidParameter("dimension must be >= 1, got " + std::to_string(dim));
    }

    void check_input(const Vector& x) const {
        if (static_cast<int>(x.size()) != dim_) {
            throw DimensionMismatch("expected dimension " + std::to_string(dim_) + ", got " +
                                    std::to_string(x.size()));
        }
        if (!is_finite(x)) throw InvalidParameter("vector has non-finite coordinates");
    }

    NormKind kind_;
    double p_;
    double a_;
    int dim_;
};

/// The exponent p in (0, 1] solving C = 2^(1/p - 1), i.e. p = 1/(1 + log2 C).
/// Every quasi-norm with constant C is equivalent to a p-norm with this p.
inline double aoki_rolewicz_exponent(double C) {
    if (std::isnan(C) || C < 1.0) {
        throw InvalidParameter("quasi-triangle constant must be >= 1, got " + std::to_string(C));
    }
    return 1.0 / (1.0 + std::log2(C));
}

/// Inverse of aoki_rolewicz_exponent: C = 2^(1/p - 1) for p in (0, 1].
inline double aoki_rolewicz_constant(double p) {
    if (!(p > 0.0) || p > 1.0) {
        throw InvalidParameter("exponent must lie in (0, 1], got " + std::to_string(p));
    }
    return std::exp2(1.0 / p - 1.0);
}

} // namespace quasifix
