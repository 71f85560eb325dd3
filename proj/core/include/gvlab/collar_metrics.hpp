#pragma once

#include "gvlab/carnot.hpp"
#include "gvlab/domain.hpp"
#include "gvlab/kobayashi.hpp"
#include "gvlab/metric_space.hpp"

#include <memory>
#include <optional>

namespace gvlab {

struct CollarPoint {
    Vec base;
    BoundaryPoint boundary;
    double h = 0.0;
    bool in_collar = false;
};

CollarPoint collar_point(const Domain& dom, const Vec& p);

struct GMetricValue {
    double value = 0.0;
    double dH_term = 0.0;      // boundary distance between the projections
    double height_term = 0.0;  // max(h(p), h(q))
};

/// g(p, q) = 2 log( (d_H(pi p, pi q) + max{h(p), h(q)}) / sqrt(h(p) h(q)) ).
/// dH is supplied by the caller (0 when the projections coincide).
GMetricValue g_metric(const Domain& dom, const Vec& p, const Vec& q, double dH);

/// Point on the inward-normal fiber through pi(p) with the requested height
/// (bisection along the normal ray). Throws if the height is unreachable
/// before the cut locus.
Vec lift_to_height(const Domain& dom, const Vec& p, double target_h);

/// Boundary-distance provider shared by the g/d pipelines: the loop table
/// for n = 1, the constrained-path solver for n >= 2.
class BoundaryDistance {
  public:
    explicit BoundaryDistance(const Domain& dom, CCOptions opts = {});
    double operator()(const Vec& x, const Vec& y) const;
    const Domain& domain() const { return *dom_; }
    const BoundaryLoopTable* loop_table() const { return table_.get(); }

  private:
    const Domain* dom_;
    std::shared_ptr<BoundaryLoopTable> table_;
    CCOptions opts_;
};

/// Symmetric g matrix over interior samples.
FiniteMetricSpace g_metric_matrix(const Domain& dom, const std::vector<Vec>& samples,
                                  const BoundaryDistance& bdist);

/// sup over dyadic partitions (up to 2^partitions pieces) of the partition
/// sum of g along a collar curve; the per-level sums land in `trace`.
double l_g_length(const Domain& dom, const PolylineCurve& curve, int partitions,
                  const BoundaryDistance& bdist, std::vector<double>* trace = nullptr);

/// The geodesic-side metric d. Cases:
///   (i)  both points in the collar: shortest chain of g-weights through a
///        collar sample graph (two query fibers; for n = 1 also a static
///        fiber/height lattice providing multi-fiber detours and midpoint
///        witnesses);
///   (ii) mixed: d(p, q_eps) + |q - q_eps|;
///   (iii) both outside with equal projections: |p - q|;
///   (iv) both outside: |p - p_eps| + d(p_eps, q_eps) + |q - q_eps|.
struct CollarModelOptions {
    int fibers = 192;        // static lattice fibers (n = 1 only)
    int rings = 14;          // height levels per fiber
    double min_delta = 1e-5; // deepest lattice level, as delta
    double fiber_tol = 0.0;  // 0 => 1e-4 * box diagonal
    CCOptions cc;
};

class CollarDModel {
  public:
    using Options = CollarModelOptions;

    CollarDModel(const Domain& dom, CollarModelOptions opts = {});

    double d_metric(const Vec& p, const Vec& q) const;

    /// Best midpoint witness among graph nodes: minimizes
    /// max(d(p,m), d(m,q)). Returns {m, max(d(p,m), d(m,q))}.
    std::pair<Vec, double> approximate_midpoint(const Vec& p, const Vec& q) const;

    const Domain& domain() const { return *dom_; }
    const BoundaryDistance& boundary_distance() const { return bdist_; }

  private:
    struct FiberNode {
        Vec point;
        double h;
    };
    struct QueryGraph;
    QueryGraph build_graph(const CollarPoint& cp, const CollarPoint& cq, bool with_lattice) const;
    std::vector<FiberNode> fiber_nodes(const BoundaryPoint& bp, double h_extra) const;

    const Domain* dom_;
    Options opts_;
    BoundaryDistance bdist_;
    double eps_;
    // static lattice (n = 1)
    std::vector<Vec> lattice_feet_;      // boundary points
    std::vector<double> lattice_param_;  // loop-table arc parameter per foot
    std::vector<double> ring_heights_;
};

struct CollarCurve {
    PolylineCurve curve;
    bool normal = false;  // fiber segment (projections all agree)
};

struct LengthEstimateReport {
    double C1 = 1.0;
    double C2 = 0.0;
    std::size_t violations_at_fit = 0;
    std::size_t curves_checked = 0;
    std::optional<std::size_t> violations_at_given;
};

/// Checks the two-sided length estimates: for every collar curve
///   |log(h(end)/h(start))| / C1 - C2 <= l_K,
/// and for normal curves additionally
///   l_K <= C1 |log(h(end)/h(start))| + C2.
/// Fits the smallest feasible (C1, C2) on a geometric C1 grid; when `given`
/// is supplied, also counts violations at those constants.
LengthEstimateReport verify_length_estimates(const Domain& dom,
                                             const std::vector<CollarCurve>& curves,
                                             const KobayashiEstimator& est,
                                             std::optional<std::pair<double, double>> given = {});

/// Builds the g matrix over the samples and runs the exhaustive four-point
/// scan on it.
DeltaReport verify_gromov_inequality_g(const Domain& dom, const std::vector<Vec>& samples,
                                       const BoundaryDistance& bdist);

}  // namespace gvlab
