#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace gvlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Axis-aligned box in R^d.
struct Box {
    Vec lo;
    Vec hi;

    Box() = default;
    Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (lo.size() != hi.size())
            throw std::invalid_argument("Box: lo/hi dimension mismatch");
        for (int i = 0; i < lo.size(); ++i)
            if (!(lo[i] <= hi[i])) throw std::invalid_argument("Box: lo > hi");
    }

    static Box cube(int dim, double a, double b) {
        return Box(Vec::Constant(dim, a), Vec::Constant(dim, b));
    }

    int dim() const { return static_cast<int>(lo.size()); }
    double diagonal() const { return (hi - lo).norm(); }
    Vec center() const { return 0.5 * (lo + hi); }

    bool contains(const Vec& p, double slack = 0.0) const {
        if (p.size() != lo.size()) return false;
        for (int i = 0; i < p.size(); ++i)
            if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
        return true;
    }
};

/// Ordered point sequence with an (optional) parameterization.
/// All length functionals in the library are parameterization invariant,
/// so params default to the uniform grid on [0,1].
struct PolylineCurve {
    std::vector<Vec> vertices;
    std::vector<double> params;  // empty => uniform on [0,1]

    PolylineCurve() = default;
    explicit PolylineCurve(std::vector<Vec> vs) : vertices(std::move(vs)) {}

    std::size_t segments() const {
        return vertices.size() < 2 ? 0 : vertices.size() - 1;
    }

    double param(std::size_t i) const {
        if (!params.empty()) return params[i];
        if (vertices.size() < 2) return 0.0;
        return static_cast<double>(i) / static_cast<double>(vertices.size() - 1);
    }

    /// Linear interpolation at t in [0,1] (uniform parameterization assumed).
    Vec at(double t) const;

    /// Dyadically refined copy (each segment split in two).
    PolylineCurve refined() const;
};

inline Vec PolylineCurve::at(double t) const {
    if (vertices.empty()) throw std::invalid_argument("PolylineCurve::at: empty curve");
    if (vertices.size() == 1 || t <= 0.0) return vertices.front();
    if (t >= 1.0) return vertices.back();
    const double s = t * static_cast<double>(vertices.size() - 1);
    const auto i = static_cast<std::size_t>(s);
    const double f = s - static_cast<double>(i);
    return (1.0 - f) * vertices[i] + f * vertices[i + 1];
}

inline PolylineCurve PolylineCurve::refined() const {
    PolylineCurve out;
    if (vertices.empty()) return out;
    out.vertices.reserve(vertices.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        out.vertices.push_back(vertices[i]);
        out.vertices.push_back(0.5 * (vertices[i] + vertices[i + 1]));
    }
    out.vertices.push_back(vertices.back());
    return out;
}

}  // namespace gvlab
