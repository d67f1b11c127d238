#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasifix/errors.hpp"
#include "quasifix/expression.hpp"
#include "quasifix/vec.hpp"

namespace quasifix {

enum class MapKind {
    Affine,     // x -> Ax + v
    Reflection, // x -> (1 - x_1, ..., 1 - x_n), any dimension
    Step,       // scalar: x -> 0 if x <= 2, -1/3 if x > 2
    Power,      // N-th iterate of an inner map
    Expr,       // one formula per coordinate over x1..xn
    Averaged,   // x -> (1 - lambda) x + lambda T x (internal wrapper)
};

/// Advisory axis-aligned box attached to a map. It documents where the map is
/// of interest and steers test sampling; evaluation never clips to it.
struct DomainBox {
    Vector lo;
    Vector hi;
};

/// An immutable self-map of R^n from the catalog. Built via the static
/// factories; evaluation is pure.
class Map {
public:
    static Map affine(Matrix A, Vector v) {
        const std::size_t n = A.size();
        if (n == 0) throw InvalidParameter("affine matrix must be nonempty");
        for (const auto& row : A) {
            if (row.size() != n) throw InvalidParameter("affine matrix must be square");
        }
        if (v.size() != n) {
            throw DimensionMismatch("affine offset size " + std::to_string(v.size()) +
                                    " does not match matrix size " + std::to_string(n));
        }
        Map m(MapKind::Affine);
        m.matrix_ = std::move(A);
        m.offset_ = std::move(v);
        return m;
    }

    static Map reflection() { return Map(MapKind::Reflection); }

    static Map step() { return Map(MapKind::Step); }

    static Map power(Map inner, int n_iter) {
        if (n_iter < 1) throw InvalidParameter("power iterate count must be >= 1");
        Map m(MapKind::Power);
        m.inner_ = std::make_shared<const Map>(std::move(inner));
        m.n_iter_ = n_iter;
        return m;
    }

    static Map expression(const std::vector<std::string>& formulas) {
        if (formulas.empty()) throw InvalidParameter("expression map needs at least one formula");
        Map m(MapKind::Expr);
        m.exprs_.reserve(formulas.size());
        for (const auto& f : formulas) m.exprs_.push_back(Expression::parse(f));
        const int n = static_cast<int>(formulas.size());
        for (const auto& e : m.exprs_) {
            if (e.max_variable() > n) {
                throw InvalidParameter("formula '" + e.text() + "' references x" +
                                       std::to_string(e.max_variable()) + " but the map has " +
                                       std::to_string(n) + " coordinates");
            }
        }
        return m;
    }

    static Map averaged(Map inner, double lambda) {
        if (!(lambda > 0.0) || lambda > 1.0) {
            throw InvalidParameter("averaging weight must lie in (0, 1], got " +
                                   std::to_string(lambda));
        }
        Map m(MapKind::Averaged);
        m.inner_ = std::make_shared<const Map>(std::move(inner));
        m.lambda_ = lambda;
        return m;
    }

    /// Returns a copy carrying the advisory domain box.
    Map with_domain(Vector lo, Vector hi) const {
        require_same_dim(lo, hi);
        if (lo.empty()) throw InvalidParameter("domain box must be nonempty");
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (!(lo[i] <= hi[i])) throw InvalidParameter("domain box needs lo <= hi per axis");
        }
        const int n = fixed_dim();
        if (n != 0 && static_cast<int>(lo.size()) != n) {
            throw DimensionMismatch("domain box dimension " + std::to_string(lo.size()) +
                                    " does not match map dimension " + std::to_string(n));
        }
        Map m = *this;
        m.domain_ = DomainBox{std::move(lo), std::move(hi)};
        return m;
    }

    MapKind kind() const { return kind_; }
    const Matrix& matrix() const { return matrix_; }
    const Vector& offset() const { return offset_; }
    const Map& inner() const { return *inner_; }
    int n_iter() const { return n_iter_; }
    double lambda() const { return lambda_; }
    const std::vector<Expression>& exprs() const { return exprs_; }
    const std::optional<DomainBox>& domain() const { return domain_; }

    /// Dimension the map requires, or 0 when it accepts any dimension.
    int fixed_dim() const {
        switch (kind_) {
        case MapKind::Affine: return static_cast<int>(matrix_.size());
        case MapKind::Reflection: return 0;
        case MapKind::Step: return 1;
        case MapKind::Power: return inner_->fixed_dim();
        case MapKind::Expr: return static_cast<int>(exprs_.size());
        case MapKind::Averaged: return inner_->fixed_dim();
        }
        return 0;
    }

    Vector operator()(const Vector& x) const {
        check_dim(x);
        switch (kind_) {
        case MapKind::Affine: {
            const std::size_t n = matrix_.size();
            Vector y(n);
            for (std::size_t i = 0; i < n; ++i) {
                double s = offset_[i];
                for (std::size_t j = 0; j < n; ++j) s += matrix_[i][j] * x[j];
                y[i] = s;
            }
            return y;
        }
        case MapKind::Reflection: {
            Vector y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 - x[i];
            return y;
        }
        case MapKind::Step:
            return Vector{x[0] <= 2.0 ? 0.0 : -1.0 / 3.0};
        case MapKind::Power: {
            Vector y = x;
            for (int i = 0; i < n_iter_; ++i) y = (*inner_)(y);
            return y;
        }
        case MapKind::Expr: {
            Vector y(exprs_.size());
            for (std::size_t i = 0; i < exprs_.size(); ++i) y[i] = exprs_[i].eval(x);
            return y;
        }
        case MapKind::Averaged:
            return blend(x, (*inner_)(x), lambda_);
        }
        throw InvalidParameter("unknown map kind");
    }

private:
    explicit Map(MapKind kind) : kind_(kind) {}

    void check_dim(const Vector& x) const {
        if (x.empty()) throw DimensionMismatch("map input must be nonempty");
        const int n = fixed_dim();
        if (n != 0 && static_cast<int>(x.size()) != n) {
            throw DimensionMismatch("map expects dimension " + std::to_string(n) + ", got " +
                                    std::to_string(x.size()));
        }
    }

    MapKind kind_;
    Matrix matrix_;
    Vector offset_;
    std::shared_ptr<const Map> inner_;
    int n_iter_ = 0;
    double lambda_ = 0.0;
    std::vector<Expression> exprs_;
    std::optional<DomainBox> domain_;
};

inline Vector eval_map(const Map& T, const Vector& x) {
    return T(x);
}

/// The averaged mapping T_lambda x = (1 - lambda) x + lambda T x. It has the
/// same fixed points as T; lambda = 1 gives back T pointwise.
inline Map averaged_map(Map T, double lambda) {
    return Map::averaged(std::move(T), lambda);
}

} // namespace quasifix
