#pragma once

#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <vector>

#include "quasifix/errors.hpp"
#include "quasifix/vec.hpp"

namespace quasifix {

/// Controls the deterministic sample clouds used by the empirical checks and
/// the enrichment estimators. The same spec always yields the same samples.
struct SampleSpec {
    int count = 10000;
    double range = 10.0;
    std::uint64_t seed = 0;
};

namespace detail {

// Maps a 64-bit word to [0, 1) using the top 53 bits, so results do not depend
// on the standard library's distribution implementation.
inline double u64_to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

} // namespace detail

/// Draws one point uniformly from the cube [-range, range]^dim.
inline Vector draw_point(std::mt19937_64& gen, int dim, double range) {
    Vector v(static_cast<std::size_t>(dim));
    for (auto& c : v) c = range * (2.0 * detail::u64_to_unit(gen()) - 1.0);
    return v;
}

/// Generates spec.count points in [-range, range]^dim from a fresh generator
/// seeded with spec.seed. Generation is serial so the cloud is identical
/// regardless of how many workers later consume it.
inline std::vector<Vector> make_samples(int dim, const SampleSpec& spec) {
    if (dim < 1) throw InvalidParameter("sample dimension must be >= 1");
    if (spec.count < 1) throw InvalidParameter("sample count must be >= 1");
    if (!(spec.range > 0.0)) throw InvalidParameter("sample range must be > 0");
    std::mt19937_64 gen(spec.seed);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) out.push_back(draw_point(gen, dim, spec.range));
    return out;
}

struct MaxResult {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t index = static_cast<std::size_t>(-1);
};

/// Evaluates f(i) for i in [0, n) and returns the maximum value together with
/// the smallest index attaining it. With jobs > 1 the index range is split
/// into contiguous blocks evaluated concurrently; the block results combine
/// by (value desc, index asc), so the outcome is independent of jobs.
template <typename F>
MaxResult parallel_max(std::size_t n, int jobs, F&& f) {
    MaxResult best;
    if (n == 0) return best;
    auto scan = [&f](std::size_t lo, std::size_t hi) {
        MaxResult local;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = f(i);
            if (v > local.value) {
                local.value = v;
                local.index = i;
            }
        }
        return local;
    };
    const std::size_t workers =
        jobs > 1 ? std::min<std::size_t>(static_cast<std::size_t>(jobs), n) : 1;
    if (workers == 1) return scan(0, n);

    std::vector<std::future<MaxResult>> futures;
    futures.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t lo = 0; lo < n; lo += chunk) {
        const std::size_t hi = std::min(lo + chunk, n);
        futures.push_back(std::async(std::launch::async, scan, lo, hi));
    }
    for (auto& fut : futures) {
        const MaxResult local = fut.get();
        if (local.value > best.value || (local.value == best.value && local.index < best.index)) {
            best = local;
        }
    }
    return best;
}

} // namespace quasifix
