#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasifix/enrichment.hpp"
#include "quasifix/errors.hpp"
#include "quasifix/map.hpp"
#include "quasifix/norm_checks.hpp"
#include "quasifix/quasi_norm.hpp"
#include "quasifix/solver.hpp"
#include "quasifix/vec.hpp"

namespace quasifix {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw Error("double formatting failed");
    return std::string(buf.data(), ptr);
}

namespace detail {

inline const Json& require_field(const Json& j, const char* key, const char* what) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(std::string(what) + " is missing required field \"" + key + "\"");
    }
    return *it;
}

inline double number_field(const Json& j, const char* key, const char* what) {
    const Json& v = require_field(j, key, what);
    if (!v.is_number()) {
        throw ConfigError(std::string(what) + " field \"" + key + "\" must be a number");
    }
    return v.get<double>();
}

inline int int_field(const Json& j, const char* key, const char* what) {
    const Json& v = require_field(j, key, what);
    if (!v.is_number_integer()) {
        throw ConfigError(std::string(what) + " field \"" + key + "\" must be an integer");
    }
    return v.get<int>();
}

// "p" is a number or the string "inf".
inline double p_field(const Json& j, const char* what) {
    const Json& v = require_field(j, "p", what);
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return kInfinity;
        throw ConfigError(std::string(what) + " field \"p\" accepts only numbers or \"inf\"");
    }
    if (!v.is_number()) {
        throw ConfigError(std::string(what) + " field \"p\" must be a number or \"inf\"");
    }
    return v.get<double>();
}

inline Vector vector_from_json(const Json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
    Vector v;
    v.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number()) throw ConfigError(std::string(what) + " must contain only numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

inline Json vector_to_json(const Vector& v) {
    return Json(v);
}

} // namespace detail

inline Json norm_to_json(const QuasiNorm& norm) {
    Json j;
    const auto p_json = [&]() -> Json {
        return std::isinf(norm.p()) ? Json("inf") : Json(norm.p());
    };
    switch (norm.kind()) {
    case NormKind::StandardP:
        j["kind"] = "standard_p";
        j["p"] = p_json();
        j["dim"] = norm.dim();
        break;
    case NormKind::MaligrandaAP:
        j["kind"] = "maligranda_ap";
        j["a"] = norm.a();
        j["p"] = p_json();
        j["dim"] = norm.dim();
        break;
    case NormKind::TychonoffHalf:
        j["kind"] = "tychonoff_half";
        j["dim"] = norm.dim();
        break;
    case NormKind::PQuasi:
        j["kind"] = "p_quasi";
        j["p"] = norm.p();
        j["dim"] = norm.dim();
        break;
    }
    return j;
}

inline QuasiNorm norm_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("norm must be a JSON object");
    const Json& kind = detail::require_field(j, "kind", "norm");
    if (!kind.is_string()) throw ConfigError("norm field \"kind\" must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "standard_p") {
        return QuasiNorm::standard_p(detail::p_field(j, "norm"),
                                     detail::int_field(j, "dim", "norm"));
    }
    if (k == "maligranda_ap") {
        if (j.contains("dim") && detail::int_field(j, "dim", "norm") != 2) {
            throw ConfigError("maligranda_ap is defined on dimension 2");
        }
        return QuasiNorm::maligranda_ap(detail::number_field(j, "a", "norm"),
                                        detail::p_field(j, "norm"));
    }
    if (k == "tychonoff_half") {
        return QuasiNorm::tychonoff_half(detail::int_field(j, "dim", "norm"));
    }
    if (k == "p_quasi") {
        return QuasiNorm::p_quasi(detail::number_field(j, "p", "norm"),
                                  detail::int_field(j, "dim", "norm"));
    }
    throw ConfigError("unknown norm kind \"" + k + "\"");
}

inline Json map_to_json(const Map& map) {
    Json j;
    switch (map.kind()) {
    case MapKind::Affine: {
        j["kind"] = "affine";
        Json rows = Json::array();
        for (const auto& row : map.matrix()) rows.push_back(detail::vector_to_json(row));
        j["matrix"] = std::move(rows);
        j["offset"] = detail::vector_to_json(map.offset());
        break;
    }
    case MapKind::Reflection:
        j["kind"] = "reflection";
        break;
    case MapKind::Step:
        j["kind"] = "step";
        break;
    case MapKind::Power:
        j["kind"] = "power";
        j["inner"] = map_to_json(map.inner());
        j["n_iter"] = map.n_iter();
        break;
    case MapKind::Expr: {
        j["kind"] = "expr";
        Json exprs = Json::array();
        for (const auto& e : map.exprs()) exprs.push_back(e.text());
        j["exprs"] = std::move(exprs);
        break;
    }
    case MapKind::Averaged:
        throw InvalidParameter("averaged map wrappers do not serialize");
    }
    if (map.domain()) {
        j["domain"] = Json{{"lo", detail::vector_to_json(map.domain()->lo)},
                           {"hi", detail::vector_to_json(map.domain()->hi)}};
    }
    return j;
}

inline Map map_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("map must be a JSON object");
    const Json& kind = detail::require_field(j, "kind", "map");
    if (!kind.is_string()) throw ConfigError("map field \"kind\" must be a string");
    const std::string k = kind.get<std::string>();

    auto build = [&]() -> Map {
        if (k == "affine") {
            const Json& rows = detail::require_field(j, "matrix", "map");
            if (!rows.is_array() || rows.empty()) {
                throw ConfigError("affine map field \"matrix\" must be a nonempty array of rows");
            }
            Matrix A;
            A.reserve(rows.size());
            for (const auto& row : rows) A.push_back(detail::vector_from_json(row, "matrix row"));
            return Map::affine(std::move(A),
                               detail::vector_from_json(
                                   detail::require_field(j, "offset", "map"), "offset"));
        }
        if (k == "reflection") return Map::reflection();
        if (k == "step") return Map::step();
        if (k == "power") {
            return Map::power(map_from_json(detail::require_field(j, "inner", "map")),
                              detail::int_field(j, "n_iter", "map"));
        }
        if (k == "expr") {
            const Json& exprs = detail::require_field(j, "exprs", "map");
            if (!exprs.is_array() || exprs.empty()) {
                throw ConfigError("expr map field \"exprs\" must be a nonempty array of strings");
            }
            std::vector<std::string> formulas;
            formulas.reserve(exprs.size());
            for (const auto& e : exprs) {
                if (!e.is_string()) throw ConfigError("expr map formulas must be strings");
                formulas.push_back(e.get<std::string>());
            }
            return Map::expression(formulas);
        }
        throw ConfigError("unknown map kind \"" + k + "\"");
    };

    Map map = build();
    if (j.contains("domain")) {
        const Json& box = j["domain"];
        if (!box.is_object()) throw ConfigError("map field \"domain\" must be an object");
        map = map.with_domain(
            detail::vector_from_json(detail::require_field(box, "lo", "domain"), "domain.lo"),
            detail::vector_from_json(detail::require_field(box, "hi", "domain"), "domain.hi"));
    }
    return map;
}

inline Json params_to_json(const EnrichedParams& params) {
    Json j;
    j["b"] = params.b;
    j["theta"] = params.theta;
    j["lambda"] = params.lambda;
    j["c"] = params.c;
    j["empirical"] = params.empirical;
    return j;
}

inline Json trace_to_json(const IterationTrace& trace) {
    Json j;
    Json points = Json::array();
    for (const auto& p : trace.points) points.push_back(detail::vector_to_json(p));
    j["points"] = std::move(points);
    j["residuals"] = Json(trace.residuals);
    j["ratios"] = Json(trace.ratios);
    return j;
}

inline Json result_to_json(const FixedPointResult& result) {
    Json j;
    j["point"] = detail::vector_to_json(result.point);
    j["iterations"] = result.iterations;
    j["certified_residual"] = result.certified_residual;
    j["lambda_used"] = result.lambda_used;
    j["params"] = params_to_json(result.params);
    if (result.certified_residual_base) {
        j["certified_residual_base"] = *result.certified_residual_base;
    }
    if (!result.residuals_rho.empty() || result.certified_residual_rho) {
        j["residuals_rho"] = Json(result.residuals_rho);
        j["certified_residual_rho"] =
            result.certified_residual_rho ? Json(*result.certified_residual_rho) : Json();
    }
    j["trace"] = trace_to_json(result.trace);
    return j;
}

/// CSV image of a trace. Header: n,x_1,...,x_d,residual,ratio. Row n holds
/// the iterate x_n, the residual r_n = d(x_{n+1}, x_n) (empty on the final
/// row), and the ratio r_n / r_{n-1} (empty on row 0, on the final row, and
/// wherever the previous residual is zero). Numbers use the shortest
/// round-trip decimal form; rows end with "\n".
inline std::string trace_to_csv(const IterationTrace& trace) {
    if (trace.points.empty()) throw InvalidParameter("cannot export an empty trace");
    const std::size_t dim = trace.points[0].size();

    std::string out = "n";
    for (std::size_t i = 1; i <= dim; ++i) out += ",x_" + std::to_string(i);
    out += ",residual,ratio\n";

    const auto& r = trace.residuals;
    for (std::size_t n = 0; n < trace.points.size(); ++n) {
        out += std::to_string(n);
        for (double c : trace.points[n]) {
            out += ',';
            out += format_double(c);
        }
        out += ',';
        if (n < r.size()) out += format_double(r[n]);
        out += ',';
        if (n >= 1 && n < r.size() && r[n - 1] > 0.0) out += format_double(r[n] / r[n - 1]);
        out += '\n';
    }
    return out;
}

inline Json p_norm_report_to_json(const PNormReport& report) {
    Json j;
    j["holds"] = report.holds;
    j["worst_ratio"] = report.worst_ratio;
    if (report.witness) {
        j["witness"] = Json{detail::vector_to_json(report.witness->first),
                            detail::vector_to_json(report.witness->second)};
    } else {
        j["witness"] = Json();
    }
    return j;
}

inline Json quasi_triangle_report_to_json(const QuasiTriangleReport& report) {
    Json j;
    j["empirical_C"] = report.empirical_C;
    if (report.violation_of_claimed_C) {
        j["violation_of_claimed_C"] =
            Json{detail::vector_to_json(report.violation_of_claimed_C->first),
                 detail::vector_to_json(report.violation_of_claimed_C->second)};
    } else {
        j["violation_of_claimed_C"] = Json();
    }
    return j;
}

inline Json series_bound_report_to_json(const SeriesBoundReport& report) {
    Json j;
    j["lhs"] = report.lhs;
    j["rhs"] = report.rhs;
    j["holds"] = report.holds;
    j["prefix_holds"] = report.prefix_holds;
    return j;
}

} // namespace quasifix
