#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasifix/enrichment.hpp"
#include "quasifix/errors.hpp"
#include "quasifix/map.hpp"
#include "quasifix/norm_checks.hpp"
#include "quasifix/quasi_norm.hpp"
#include "quasifix/sampling.hpp"
#include "quasifix/serialize.hpp"
#include "quasifix/solver.hpp"
#include "quasifix/vec.hpp"

namespace quasifix {

/// Raised when neither the configured b nor any grid entry admits an
/// empirical contraction factor below one. Maps to exit status 2.
struct EnrichmentNotFound : Error {
    using Error::Error;
};

enum class Mode { Solve, Asymptotic, Maia, Estimate, VerifyNorm };

inline std::string mode_name(Mode mode) {
    switch (mode) {
    case Mode::Solve: return "solve";
    case Mode::Asymptotic: return "asymptotic";
    case Mode::Maia: return "maia";
    case Mode::Estimate: return "estimate";
    case Mode::VerifyNorm: return "verify_norm";
    }
    return "unknown";
}

/// Parsed and validated experiment description.
///
/// Config JSON schema (unknown keys are ignored):
///   {
///     "mode": "solve" | "asymptotic" | "maia" | "estimate" | "verify_norm",
///     "norm": { ... },                    // see norm_from_json
///     "map": { ... },                     // see map_from_json; all modes except verify_norm
///     "params": {"b": 0.5, "theta": 0.5}  // or {"b": 0.5} or {"b_grid": [...]} or absent
///     "x0": [2, 2] | "random:<seed>",     // solve/asymptotic/maia
///     "solver": {"tol": 1e-10, "max_iter": 10000,
///                "lambda_override": 1.0, "divergence_window": 20},
///     "second_norm": { ... },             // maia: the dominating-side norm d
///     "n_iterate": 2,                     // asymptotic: N >= 1
///     "samples": {"count": 10000, "range": 10, "seed": 0}
///   }
///
/// In maia mode "norm" is the contraction norm rho (the one the enrichment
/// parameters refer to) and "second_norm" is the norm d that must be
/// dominated by rho and in which stopping is measured.
struct ExperimentConfig {
    Mode mode = Mode::Solve;
    std::optional<QuasiNorm> norm;
    std::optional<Map> map;
    std::optional<QuasiNorm> second_norm;
    std::optional<double> b;
    std::optional<double> theta;
    std::optional<std::vector<double>> b_grid;
    std::optional<Vector> x0;
    std::optional<std::uint64_t> x0_seed;
    SolverConfig solver;
    int n_iterate = 1;
    SampleSpec samples;
};

namespace detail {

inline std::uint64_t seed_field(const Json& j, const char* key, const char* what) {
    const Json& v = require_field(j, key, what);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
        throw ConfigError(std::string(what) + " field \"" + key +
                          "\" must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

inline Mode mode_from_string(const std::string& s) {
    if (s == "solve") return Mode::Solve;
    if (s == "asymptotic") return Mode::Asymptotic;
    if (s == "maia") return Mode::Maia;
    if (s == "estimate") return Mode::Estimate;
    if (s == "verify_norm") return Mode::VerifyNorm;
    throw ConfigError("unknown mode \"" + s + "\"");
}

inline void parse_params_block(const Json& j, ExperimentConfig& cfg) {
    if (!j.is_object()) throw ConfigError("\"params\" must be a JSON object");
    if (j.contains("b_grid")) {
        if (j.contains("b") || j.contains("theta")) {
            throw ConfigError("\"params\" accepts either b_grid or b/theta, not both");
        }
        const Json& grid = j["b_grid"];
        if (!grid.is_array() || grid.empty()) {
            throw ConfigError("\"b_grid\" must be a nonempty array of numbers");
        }
        std::vector<double> values;
        values.reserve(grid.size());
        for (const auto& e : grid) {
            if (!e.is_number()) throw ConfigError("\"b_grid\" must contain only numbers");
            values.push_back(e.get<double>());
        }
        cfg.b_grid = std::move(values);
        return;
    }
    if (j.contains("theta") && !j.contains("b")) {
        throw ConfigError("\"params\" with theta also requires b");
    }
    if (j.contains("b")) cfg.b = number_field(j, "b", "params");
    if (j.contains("theta")) cfg.theta = number_field(j, "theta", "params");
}

inline void parse_solver_block(const Json& j, SolverConfig& solver) {
    if (!j.is_object()) throw ConfigError("\"solver\" must be a JSON object");
    if (j.contains("tol")) solver.tol = number_field(j, "tol", "solver");
    if (j.contains("max_iter")) solver.max_iter = int_field(j, "max_iter", "solver");
    if (j.contains("lambda_override")) {
        solver.lambda_override = number_field(j, "lambda_override", "solver");
    }
    if (j.contains("divergence_window")) {
        solver.divergence_window = int_field(j, "divergence_window", "solver");
    }
}

inline void parse_samples_block(const Json& j, SampleSpec& samples) {
    if (!j.is_object()) throw ConfigError("\"samples\" must be a JSON object");
    if (j.contains("count")) samples.count = int_field(j, "count", "samples");
    if (j.contains("range")) samples.range = number_field(j, "range", "samples");
    if (j.contains("seed")) samples.seed = seed_field(j, "seed", "samples");
}

inline void parse_x0(const Json& j, ExperimentConfig& cfg) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        const std::string prefix = "random:";
        if (s.rfind(prefix, 0) != 0) {
            throw ConfigError("\"x0\" string form must be \"random:<seed>\"");
        }
        std::uint64_t seed = 0;
        const char* begin = s.data() + prefix.size();
        const char* end = s.data() + s.size();
        const auto [ptr, ec] = std::from_chars(begin, end, seed);
        if (ec != std::errc() || ptr != end || begin == end) {
            throw ConfigError("cannot parse seed in \"" + s + "\"");
        }
        cfg.x0_seed = seed;
        return;
    }
    cfg.x0 = vector_from_json(j, "x0");
}

} // namespace detail

inline ExperimentConfig parse_experiment_config(const Json& j) {
    try {
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        ExperimentConfig cfg;

        const Json& mode = detail::require_field(j, "mode", "config");
        if (!mode.is_string()) throw ConfigError("\"mode\" must be a string");
        cfg.mode = detail::mode_from_string(mode.get<std::string>());

        cfg.norm = norm_from_json(detail::require_field(j, "norm", "config"));
        if (j.contains("map")) cfg.map = map_from_json(j["map"]);
        if (j.contains("params")) detail::parse_params_block(j["params"], cfg);
        if (j.contains("x0")) detail::parse_x0(j["x0"], cfg);
        if (j.contains("solver")) detail::parse_solver_block(j["solver"], cfg.solver);
        if (j.contains("second_norm")) cfg.second_norm = norm_from_json(j["second_norm"]);
        if (j.contains("n_iterate")) cfg.n_iterate = detail::int_field(j, "n_iterate", "config");
        if (j.contains("samples")) detail::parse_samples_block(j["samples"], cfg.samples);

        const bool needs_map = cfg.mode != Mode::VerifyNorm;
        const bool needs_x0 =
            cfg.mode == Mode::Solve || cfg.mode == Mode::Asymptotic || cfg.mode == Mode::Maia;
        if (needs_map && !cfg.map) {
            throw ConfigError("mode \"" + mode_name(cfg.mode) + "\" requires \"map\"");
        }
        if (needs_x0 && !cfg.x0 && !cfg.x0_seed) {
            throw ConfigError("mode \"" + mode_name(cfg.mode) + "\" requires \"x0\"");
        }
        if (cfg.mode == Mode::Maia && !cfg.second_norm) {
            throw ConfigError("mode \"maia\" requires \"second_norm\"");
        }
        if (cfg.mode == Mode::Asymptotic && cfg.n_iterate < 1) {
            throw ConfigError("\"n_iterate\" must be >= 1");
        }

        const int dim = cfg.norm->dim();
        if (cfg.map) {
            const int map_dim = cfg.map->fixed_dim();
            if (map_dim != 0 && map_dim != dim) {
                throw ConfigError("map dimension " + std::to_string(map_dim) +
                                  " does not match norm dimension " + std::to_string(dim));
            }
        }
        if (cfg.x0 && static_cast<int>(cfg.x0->size()) != dim) {
            throw ConfigError("x0 dimension " + std::to_string(cfg.x0->size()) +
                              " does not match norm dimension " + std::to_string(dim));
        }
        if (cfg.second_norm && cfg.second_norm->dim() != dim) {
            throw ConfigError("second_norm dimension " + std::to_string(cfg.second_norm->dim()) +
                              " does not match norm dimension " + std::to_string(dim));
        }

        if (cfg.b && cfg.theta) make_enriched_params(*cfg.b, *cfg.theta); // validates
        detail::validate_solver_config(cfg.solver);
        if (cfg.samples.count < 1) throw ConfigError("\"samples.count\" must be >= 1");
        if (!(cfg.samples.range > 0.0)) throw ConfigError("\"samples.range\" must be > 0");

        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
}

inline Json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    }
}

/// Writes content to path via a temporary file plus rename, so readers never
/// observe a partially written artifact.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw Error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

struct RunOutcome {
    int exit_code = 0;
    std::string summary;
};

namespace detail {

inline std::string format_point(const Vector& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    out += ']';
    return out;
}

inline Vector draw_in_box(std::mt19937_64& gen, const Vector& lo, const Vector& hi) {
    Vector v(lo.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = lo[i] + u64_to_unit(gen()) * (hi[i] - lo[i]);
    }
    return v;
}

inline std::pair<Vector, Vector> sampling_box(const std::optional<Map>& map, int dim,
                                              double range) {
    if (map && map->domain()) return {map->domain()->lo, map->domain()->hi};
    return {Vector(static_cast<std::size_t>(dim), -range),
            Vector(static_cast<std::size_t>(dim), range)};
}

// Pairs for estimation/checks, drawn from the map's advisory box when it has
// one and from [-range, range]^dim otherwise.
inline std::vector<VectorPair> sample_pairs_for(const std::optional<Map>& map, int dim,
                                                const SampleSpec& spec) {
    const auto [lo, hi] = sampling_box(map, dim, spec.range);
    std::mt19937_64 gen(spec.seed);
    std::vector<VectorPair> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        Vector x = draw_in_box(gen, lo, hi);
        Vector y = draw_in_box(gen, lo, hi);
        out.emplace_back(std::move(x), std::move(y));
    }
    return out;
}

inline std::vector<Vector> single_samples_for(const std::optional<Map>& map, int dim,
                                              const SampleSpec& spec) {
    const auto [lo, hi] = sampling_box(map, dim, spec.range);
    std::mt19937_64 gen(spec.seed);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) out.push_back(draw_in_box(gen, lo, hi));
    return out;
}

inline Vector resolve_x0(const ExperimentConfig& cfg) {
    if (cfg.x0) return *cfg.x0;
    const auto [lo, hi] = sampling_box(cfg.map, cfg.norm->dim(), 10.0);
    std::mt19937_64 gen(*cfg.x0_seed);
    return draw_in_box(gen, lo, hi);
}

inline EnrichedParams resolve_params(const ExperimentConfig& cfg, const Map& probe_map,
                                     const QuasiNorm& norm, int jobs) {
    if (cfg.b && cfg.theta) return make_enriched_params(*cfg.b, *cfg.theta);
    const auto pairs = sample_pairs_for(cfg.map, norm.dim(), cfg.samples);
    if (cfg.b) {
        const double theta = estimate_theta(probe_map, *cfg.b, norm, pairs, jobs);
        if (!(theta < *cfg.b + 1.0)) {
            throw EnrichmentNotFound("estimated theta " + format_double(theta) +
                                     " does not satisfy theta < b+1 for b = " +
                                     format_double(*cfg.b));
        }
        return make_enriched_params(*cfg.b, theta, /*empirical=*/true);
    }
    const std::vector<double> grid = cfg.b_grid ? *cfg.b_grid : default_b_grid();
    const auto found = search_enrichment(probe_map, norm, grid, pairs, jobs);
    if (!found) {
        throw EnrichmentNotFound("no grid entry yields an empirical contraction factor below 1");
    }
    return *found;
}

inline Json samples_to_json(const SampleSpec& spec) {
    Json j;
    j["count"] = spec.count;
    j["range"] = spec.range;
    j["seed"] = spec.seed;
    return j;
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

inline RunOutcome run_solve_family(const ExperimentConfig& cfg,
                                   const std::filesystem::path& out_dir, int jobs) {
    const QuasiNorm& rho = *cfg.norm;
    const std::string mode = mode_name(cfg.mode);

    auto report_failure = [&](const std::string& status, const std::string& message,
                              const FixedPointResult* partial, const Vector* witness) {
        Json j;
        j["mode"] = mode;
        j["status"] = status;
        j["error"] = message;
        if (witness) j["witness"] = Json(*witness);
        if (partial) {
            const Json body = result_to_json(*partial);
            for (const auto& [key, value] : body.items()) j[key] = value;
            write_file_atomic(out_dir / "trace.csv", trace_to_csv(partial->trace));
        }
        write_json(out_dir / "result.json", j);
        std::string summary = "mode=" + mode + " status=" + status;
        if (partial) {
            summary += " point=" + format_point(partial->point) +
                       " iters=" + std::to_string(partial->iterations) +
                       " residual=" + format_double(partial->certified_residual);
        }
        return RunOutcome{2, summary};
    };

    try {
        const Map probe =
            cfg.mode == Mode::Asymptotic ? Map::power(*cfg.map, cfg.n_iterate) : *cfg.map;
        const EnrichedParams params = resolve_params(cfg, probe, rho, jobs);
        const Vector x0 = resolve_x0(cfg);

        FixedPointResult result = [&] {
            switch (cfg.mode) {
            case Mode::Solve:
                return krasnoselskij_solve(*cfg.map, params, rho, x0, cfg.solver);
            case Mode::Asymptotic:
                return asymptotic_solve(*cfg.map, cfg.n_iterate, params, rho, x0, cfg.solver);
            default: {
                const auto zs = single_samples_for(cfg.map, rho.dim(), cfg.samples);
                return maia_solve(*cfg.map, *cfg.second_norm, rho, params, x0, cfg.solver, zs);
            }
            }
        }();

        Json j;
        j["mode"] = mode;
        j["status"] = "ok";
        j["error"] = Json();
        const Json body = result_to_json(result);
        for (const auto& [key, value] : body.items()) j[key] = value;
        write_file_atomic(out_dir / "trace.csv", trace_to_csv(result.trace));
        write_json(out_dir / "result.json", j);

        const std::string summary = "mode=" + mode + " status=ok point=" +
                                    format_point(result.point) +
                                    " iters=" + std::to_string(result.iterations) +
                                    " residual=" + format_double(result.certified_residual);
        return RunOutcome{0, summary};
    } catch (const MaxIterationsExceeded& e) {
        return report_failure("MaxIterationsExceeded", e.what(), &e.partial, nullptr);
    } catch (const DivergenceDetected& e) {
        return report_failure("DivergenceDetected", e.what(), &e.partial, nullptr);
    } catch (const NumericalOverflow& e) {
        return report_failure("NumericalOverflow", e.what(), &e.partial, nullptr);
    } catch (const FixedPointNotShared& e) {
        return report_failure("FixedPointNotShared", e.what(), &e.partial, nullptr);
    } catch (const DominationViolated& e) {
        return report_failure("DominationViolated", e.what(), nullptr, &e.witness);
    } catch (const EnrichmentNotFound& e) {
        return report_failure("EnrichmentNotFound", e.what(), nullptr, nullptr);
    }
}

inline RunOutcome run_estimate(const ExperimentConfig& cfg,
                               const std::filesystem::path& out_dir, int jobs) {
    const QuasiNorm& norm = *cfg.norm;
    const auto pairs = sample_pairs_for(cfg.map, norm.dim(), cfg.samples);
    const std::vector<double> grid = cfg.b_grid     ? *cfg.b_grid
                                     : cfg.b        ? std::vector<double>{*cfg.b}
                                                    : default_b_grid();

    Json rows = Json::array();
    for (double b : grid) {
        const double theta = estimate_theta(*cfg.map, b, norm, pairs, jobs);
        Json row;
        row["b"] = b;
        row["theta_hat"] = theta;
        row["c"] = theta / (b + 1.0);
        row["qualifies"] = theta > kDegenerateThetaTolerance && theta < b + 1.0;
        rows.push_back(std::move(row));
    }
    const auto selected = search_enrichment(*cfg.map, norm, grid, pairs, jobs);

    Json j;
    j["mode"] = "estimate";
    j["norm"] = norm_to_json(norm);
    j["map"] = map_to_json(*cfg.map);
    j["b_grid"] = Json(grid);
    j["grid"] = std::move(rows);
    j["found"] = selected.has_value();
    j["params"] = selected ? params_to_json(*selected) : Json();
    j["samples"] = samples_to_json(cfg.samples);
    write_json(out_dir / "report.json", j);

    std::string summary;
    if (selected) {
        summary = "mode=estimate status=found b=" + format_double(selected->b) +
                  " theta=" + format_double(selected->theta) +
                  " lambda=" + format_double(selected->lambda) +
                  " c=" + format_double(selected->c);
    } else {
        summary = "mode=estimate status=not_found";
    }
    return RunOutcome{0, summary};
}

inline RunOutcome run_verify_norm(const ExperimentConfig& cfg,
                                  const std::filesystem::path& out_dir, int jobs) {
    const QuasiNorm& norm = *cfg.norm;
    const int dim = norm.dim();

    auto pairs = make_sample_pairs(dim, cfg.samples);
    for (auto& pair : canonical_basis_pairs(dim)) pairs.push_back(std::move(pair));
    const auto triangle = check_quasi_triangle(norm, pairs, jobs);

    const double claimed_C = norm.triangle_constant();
    const double aoki_p = aoki_rolewicz_exponent(claimed_C);
    const auto p_norm = check_p_norm(norm, aoki_p, pairs, jobs);

    SampleSpec singles_spec = cfg.samples;
    singles_spec.seed = cfg.samples.seed + 1;
    const auto singles = make_samples(dim, singles_spec);
    std::mt19937_64 scale_gen(cfg.samples.seed + 2);
    std::vector<double> scales(singles.size());
    for (auto& s : scales) s = cfg.samples.range * (2.0 * u64_to_unit(scale_gen()) - 1.0);
    const auto homogeneity = check_homogeneity(norm, singles, scales, jobs);
    const bool separation = check_separation(norm, singles);

    const bool holds =
        homogeneity.holds && separation && !triangle.violation_of_claimed_C.has_value();

    Json j;
    j["mode"] = "verify_norm";
    j["norm"] = norm_to_json(norm);
    j["claimed_C"] = claimed_C;
    j["empirical_C"] = triangle.empirical_C;
    j["violation_of_claimed_C"] =
        quasi_triangle_report_to_json(triangle)["violation_of_claimed_C"];
    j["aoki_exponent"] = aoki_p;
    j["p_norm"] = p_norm_report_to_json(p_norm);
    j["homogeneity"] = Json{{"holds", homogeneity.holds},
                            {"worst_rel_err", homogeneity.worst_rel_err}};
    j["separation"] = Json{{"holds", separation}};
    j["samples"] = samples_to_json(cfg.samples);
    j["holds"] = holds;
    write_json(out_dir / "report.json", j);

    const std::string summary = std::string("mode=verify_norm status=") +
                                (holds ? "ok" : "violated") +
                                " empirical_C=" + format_double(triangle.empirical_C) +
                                " claimed_C=" + format_double(claimed_C) +
                                " holds=" + (holds ? "true" : "false");
    return RunOutcome{0, summary};
}

} // namespace detail

/// Executes one experiment config and writes its artifacts into out_dir:
/// trace.csv and result.json for the solve modes, report.json for estimate
/// and verify_norm. Returns the process exit code (0 success, 2 solver
/// failure) and the one-line summary; configuration problems throw
/// ConfigError, which callers map to exit code 3.
inline RunOutcome run_experiment(const Json& config_json, const std::filesystem::path& out_dir,
                                 int jobs = 1) {
    const ExperimentConfig cfg = parse_experiment_config(config_json);
    if (jobs < 1) jobs = 1;
    std::filesystem::create_directories(out_dir);
    switch (cfg.mode) {
    case Mode::Solve:
    case Mode::Asymptotic:
    case Mode::Maia:
        return detail::run_solve_family(cfg, out_dir, jobs);
    case Mode::Estimate:
        return detail::run_estimate(cfg, out_dir, jobs);
    case Mode::VerifyNorm:
        return detail::run_verify_norm(cfg, out_dir, jobs);
    }
    throw ConfigError("unhandled mode");
}

/// Stable, parameter-documented listing of the builtin norms and maps.
inline std::string catalog_text() {
    return "norms:\n"
           "  standard_p      p >= 1 or \"inf\"; dim >= 1; triangle constant 1\n"
           "  maligranda_ap   a > 0, a != 1; p >= 1 or \"inf\"; dimension 2; "
           "triangle constant max(a, 1/a)\n"
           "  tychonoff_half  dim >= 1; triangle constant 2\n"
           "  p_quasi         0 < p < 1; dim >= 1; triangle constant 2^(1/p - 1)\n"
           "maps:\n"
           "  affine      matrix: n x n, offset: n; x -> matrix*x + offset\n"
           "  reflection  any dimension; x -> 1 - x per coordinate\n"
           "  step        dimension 1; x -> 0 if x <= 2, -1/3 if x > 2\n"
           "  power       inner: map, n_iter >= 1; the n_iter-th iterate of inner\n"
           "  expr        exprs: one formula per coordinate over x1..xn\n";
}

} // namespace quasifix
