#pragma once

#include "gvlab/rng.hpp"
#include "gvlab/types.hpp"

#include <cmath>
#include <cstdint>

namespace gvlab {

/// Golden-angle spiral in the disk of radius rmax: quasi-uniform, nested
/// unions of rotated copies stay quasi-uniform.
inline std::vector<Vec> sunflower_disk(int count, double rmax, double phase = 0.0) {
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    const double golden = 2.3999632297286533;  // 2*pi*(1 - 1/phi)
    for (int i = 0; i < count; ++i) {
        const double r = rmax * std::sqrt((i + 0.5) / count);
        const double a = golden * i + phase;
        Vec p(2);
        p << r * std::cos(a), r * std::sin(a);
        out.push_back(std::move(p));
    }
    return out;
}

/// Neighbor-count schedule for graph metric estimates: fixed-k graphs do not
/// converge under sample refinement, so k grows logarithmically with the
/// sample count (k = 8 at 500 samples).
inline int graph_k_schedule(int samples) {
    return std::max(4, static_cast<int>(std::lround(1.3 * std::log(static_cast<double>(samples)))));
}

/// Quasi-uniform points on the unit sphere S^3 in R^4 (normalized Gaussians).
inline std::vector<Vec> sphere3_samples(int count, std::uint64_t seed) {
    const CounterRng rng(seed);
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    std::uint64_t k = 0;
    for (int i = 0; i < count; ++i) {
        Vec p(4);
        for (int c = 0; c < 4; ++c) p[c] = rng.normal(k++);
        const double n = p.norm();
        if (n < 1e-12) {
            p.setZero();
            p[0] = 1.0;
        } else {
            p /= n;
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// Seeded points in the ball of radius rmax in R^d (rejection-free:
/// direction times radius with the d-th-root law).
inline std::vector<Vec> ball_samples(int dim, int count, double rmax, std::uint64_t seed) {
    const CounterRng rng(seed);
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    std::uint64_t k = 0;
    for (int i = 0; i < count; ++i) {
        Vec p(dim);
        for (int c = 0; c < dim; ++c) p[c] = rng.normal(k++);
        const double n = p.norm();
        const double u = rng.uniform(1000000 + static_cast<std::uint64_t>(i));
        const double r = rmax * std::pow(u, 1.0 / dim);
        out.push_back(n < 1e-12 ? Vec(Vec::Zero(dim)) : Vec((r / n) * p));
    }
    return out;
}

/// n-per-axis grid of points over a planar square of side L centered at 0.
inline std::vector<Vec> square_grid(int per_axis, double side) {
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(per_axis) * static_cast<std::size_t>(per_axis));
    for (int i = 0; i < per_axis; ++i)
        for (int j = 0; j < per_axis; ++j) {
            Vec p(2);
            p << side * (static_cast<double>(i) / (per_axis - 1) - 0.5),
                side * (static_cast<double>(j) / (per_axis - 1) - 0.5);
            out.push_back(std::move(p));
        }
    return out;
}

/// Real 2n x 2n representation of a seeded random complex unitary
/// (commutes with the standard structure in (x, y) block layout).
Mat real_unitary(int dim_complex, std::uint64_t seed);

}  // namespace gvlab
