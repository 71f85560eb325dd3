#pragma once

#include "gvlab/domain.hpp"
#include "gvlab/metric_space.hpp"

#include <cstdint>

namespace gvlab {

/// Orthogonal projector onto the complex tangent space T^J(bd D) at a
/// boundary point: kernel spanned by grad rho and J^T grad rho. Rank 2n - 2.
Mat complex_tangent_projector(const Domain& dom, const Vec& q);

/// Same projector without the on-boundary precondition (used at chord
/// midpoints, which sit near but not on {rho = 0}).
Mat contact_projector_at(const Domain& dom, const Vec& q);

struct HorizontalCurve {
    std::vector<Vec> vertices;
    double horizontality_residual = 0.0;
};

/// Max over segments of the velocity component outside the contact plane,
/// relative to the velocity norm.
double horizontality_residual(const Domain& dom, const std::vector<Vec>& vertices);

/// Composite-midpoint quadrature of the Levi length integral sqrt(L(c, c')).
/// Rejects curves whose residual exceeds horiz_tol.
double levi_length(const Domain& dom, const HorizontalCurve& curve, double horiz_tol = 1e-3);

struct CCOptions {
    int vertices = 33;             // polyline vertices at the final refinement
    double penalty_weight = 4.0;   // initial weight; doubled per continuation round
    int restarts = 2;
    std::uint64_t seed = 0;
    double horiz_tol = 1e-3;
    int max_iterations = 200;      // descent iterations per continuation round
    int refinements = 3;           // vertex-count levels (each doubles)
};

struct CCDistanceResult {
    double value = 0.0;
    HorizontalCurve curve;
    std::vector<std::pair<int, double>> refinement_trace;  // (vertex count, value)
    double solver_tol = 0.0;  // nominal accuracy of `value`
};

/// Boundary distance as the infimal Levi length over horizontal curves,
/// by penalized multistart descent over polylines with fixed endpoints.
///
/// For n = 1 the contact distribution has rank 0 and no horizontal curve
/// joins distinct points; the lab substitutes the parabolic boundary scaling
/// d_H = sqrt(Levi arc length), matching the vertical-direction box-ball
/// scaling of the Carnot geometry. The returned curve then follows the
/// boundary and is flagged with residual 1.
CCDistanceResult cc_distance(const Domain& dom, const Vec& a, const Vec& b,
                             const CCOptions& opts = {});

/// Pairwise cc_distance with shared multistart seeds; symmetric by
/// construction.
FiniteMetricSpace cc_distance_matrix(const Domain& dom, const std::vector<Vec>& boundary_samples,
                                     const CCOptions& opts = {});

/// Arclength table along the boundary loop of an n = 1 domain.
/// Supports the parabolic boundary distance d_H = sqrt(Levi arc).
class BoundaryLoopTable {
  public:
    BoundaryLoopTable(const Domain& dom, int steps = 4096);

    /// Levi arc length between the projections of two boundary points,
    /// minimized over the two ways around the loop.
    double levi_arc(const Vec& x, const Vec& y) const;

    double boundary_distance(const Vec& x, const Vec& y) const {
        return std::sqrt(levi_arc(x, y));
    }

    double total() const { return total_; }
    const std::vector<Vec>& trace() const { return pts_; }

    /// Cumulative Levi-arc parameter of the nearest traced point.
    double param_of(const Vec& x) const;

    /// Arc between two loop parameters, minimized over the two directions.
    double arc_between(double sa, double sb) const {
        const double a = std::abs(sa - sb);
        return std::min(a, total_ - a);
    }

  private:
    std::vector<Vec> pts_;
    std::vector<double> cum_;
    double total_ = 0.0;
};

}  // namespace gvlab
