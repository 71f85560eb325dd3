#pragma once

#include "gvlab/types.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace gvlab {

/// Finite metric space: point identifiers plus a symmetric nonnegative
/// distance matrix. The triangle inequality is not enforced on construction;
/// check_metric_axioms reports violations against the stored tolerances.
struct FiniteMetricSpace {
    std::vector<std::string> points;
    Mat dist;
    double triangle_tol_abs = 1e-9;
    double triangle_tol_rel = 1e-9;

    FiniteMetricSpace() = default;
    FiniteMetricSpace(std::vector<std::string> ids, Mat d);

    /// Points named "0", "1", ... with the given matrix.
    static FiniteMetricSpace from_matrix(Mat d);

    std::size_t size() const { return points.size(); }
    double d(std::size_t i, std::size_t j) const { return dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }

    /// Index of a point id; throws std::out_of_range for unknown ids.
    std::size_t index_of(std::string_view id) const;
};

/// (x|y)_base = (d(x,base) + d(y,base) - d(x,y)) / 2.
double gromov_product(const FiniteMetricSpace& ms, std::size_t x, std::size_t y, std::size_t base);
double gromov_product(const FiniteMetricSpace& ms, std::string_view x, std::string_view y,
                      std::string_view base);

/// Four-point defect of one quadruple: half the gap between the largest and
/// second-largest of the three pair-sum matchings, clamped at zero.
double four_point_defect(const FiniteMetricSpace& ms, std::size_t a, std::size_t b, std::size_t c,
                         std::size_t d);

enum class DeltaMode { exhaustive, monte_carlo };

struct DeltaReport {
    double delta = 0.0;
    std::uint64_t quadruples_checked = 0;
    std::array<std::size_t, 4> worst_quadruple{0, 0, 0, 0};
    DeltaMode mode = DeltaMode::exhaustive;
};

/// Hyperbolicity estimate: max four-point defect over quadruples.
/// exhaustive enumerates all C(n,4) quadruples (must fit in budget);
/// monte_carlo draws `budget` quadruples from the seed, reproducibly.
DeltaReport delta_four_point(const FiniteMetricSpace& ms, DeltaMode mode, std::uint64_t budget,
                             std::uint64_t seed = 0);

struct MetricAxiomReport {
    struct TriangleViolation {
        std::size_t i, j, k;
        double excess;  // d(i,j) - d(i,k) - d(k,j), beyond tolerance
    };
    struct SymmetryViolation {
        std::size_t i, j;
        double diff;
    };
    struct DiagonalViolation {
        std::size_t i;
        double value;
    };
    std::vector<TriangleViolation> triangle;
    std::vector<SymmetryViolation> symmetry;
    std::vector<DiagonalViolation> diagonal;

    bool ok() const { return triangle.empty() && symmetry.empty() && diagonal.empty(); }
};

/// Report-only scan of all metric axioms at tolerance tol_abs + tol_rel*scale.
MetricAxiomReport check_metric_axioms(const FiniteMetricSpace& ms, double tol_abs, double tol_rel);
MetricAxiomReport check_metric_axioms(const FiniteMetricSpace& ms);

enum class DistortionKind { rough, quasi };

struct DistortionFit {
    double lambda = 1.0;
    double c = 0.0;
    DistortionKind kind = DistortionKind::rough;
    double violation_fraction = 0.0;
};

/// Fits distortion constants for the index-correspondence map msA -> msB.
/// rough: lambda = 1, c = max |dA - dB|.
/// quasi: scans a geometric lambda grid in [1, ratio envelope] with the
/// additive constant minimized per lambda, and picks the grid point where a
/// unit of lambda stops buying 10% of the target diameter in additive
/// constant. Exact multiplicative fits come out with c = 0 at the exact
/// lambda.
DistortionFit fit_distortion(const FiniteMetricSpace& msA, const FiniteMetricSpace& msB,
                             DistortionKind kind);

}  // namespace gvlab
