#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "quasifix/errors.hpp"

namespace quasifix {

using Vector = std::vector<double>;
using Matrix = std::vector<std::vector<double>>;

inline bool is_finite(const Vector& x) {
    for (double v : x) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

inline void require_same_dim(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) {
        throw DimensionMismatch("vector dimensions differ: " + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()));
    }
}

inline Vector subtract(const Vector& x, const Vector& y) {
    require_same_dim(x, y);
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

inline Vector add(const Vector& x, const Vector& y) {
    require_same_dim(x, y);
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
    return out;
}

inline Vector scale(double s, const Vector& x) {
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * x[i];
    return out;
}

/// (1 - t)*x + t*y, the convex combination used by averaged maps.
inline Vector blend(const Vector& x, const Vector& y, double t) {
    require_same_dim(x, y);
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (1.0 - t) * x[i] + t * y[i];
    return out;
}

inline bool is_zero(const Vector& x) {
    for (double v : x) {
        if (v != 0.0) return false;
    }
    return true;
}

inline double max_abs(const Vector& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

} // namespace quasifix
