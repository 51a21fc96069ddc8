#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nev/matrix.hpp"

namespace nev {

/// Deterministic uniform in [0,1); avoids std::uniform_real_distribution so
/// streams are identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Standard complex Gaussian via Box-Muller on the deterministic stream.
inline cplx complex_gaussian(std::mt19937_64& rng) {
    const double u1 = std::max(uniform01(rng), 1e-300);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

/// Axis-aligned rectangle in the open upper half-plane.
struct Region {
    double re_min = -3.0, re_max = 3.0;
    double im_min = 0.5, im_max = 2.0;
};

/// Where and how densely to sample the upper half-plane.
struct SamplePlan {
    std::size_t count = 10;
    std::uint64_t seed = 0;
    Region region;
    double exclusion_radius = 1e-3;

    void validate() const {
        if (count < 1) throw ValidationError("sample_plan_invalid", "count must be >= 1");
        if (!(region.im_min > 0.0))
            throw ValidationError("sample_plan_invalid", "region must lie above the real axis");
    }
};

/// Seeded points in the plan's rectangle, rejecting those near the given
/// spectrum (within exclusion_radius).
inline std::vector<cplx> sample_points(const SamplePlan& plan, const std::vector<cplx>& spectrum) {
    plan.validate();
    std::mt19937_64 rng(plan.seed);
    std::vector<cplx> pts;
    pts.reserve(plan.count);
    std::size_t guard = 0;
    while (pts.size() < plan.count && guard++ < 10000 * (plan.count + 1)) {
        const cplx z{uniform_in(rng, plan.region.re_min, plan.region.re_max),
                     uniform_in(rng, plan.region.im_min, plan.region.im_max)};
        bool near = false;
        for (const cplx& lam : spectrum)
            if (std::abs(z - lam) < plan.exclusion_radius) {
                near = true;
                break;
            }
        if (!near) pts.push_back(z);
    }
    return pts;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = complex_gaussian(rng);
    return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    return hermitize(random_matrix(rng, n, n));
}

/// Seeded unit direction vector in C^m.
inline Matrix random_unit_vector(std::mt19937_64& rng, std::size_t m) {
    Matrix v = random_matrix(rng, m, 1);
    const double norm = v.norm_fro();
    return (norm > 0.0) ? (1.0 / norm) * v : v;
}

}  // namespace nev
