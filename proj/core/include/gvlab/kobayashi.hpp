#pragma once

#include "gvlab/domain.hpp"
#include "gvlab/metric_space.hpp"

namespace gvlab {

/// Two-sided bound on the infinitesimal metric at one (p, v).
struct MetricBand {
    double lower = 0.0;
    double upper = 0.0;
};

enum class EstimatorStrategy { oracle, band_midpoint, band_upper, band_lower };

/// How the infinitesimal metric is evaluated. `oracle` requires oracle_id to
/// name a model domain with a closed form ("disk" or "ball2") matching the
/// domain at hand; band strategies use the two-sided estimate with constant C
/// and are restricted to region-type domains.
struct KobayashiEstimator {
    EstimatorStrategy strategy = EstimatorStrategy::band_midpoint;
    double C = 4.0;
    std::string oracle_id;

    static KobayashiEstimator oracle(std::string id) {
        return {EstimatorStrategy::oracle, 1.0, std::move(id)};
    }
    static KobayashiEstimator band(EstimatorStrategy s, double C) { return {s, C, {}}; }
};

/// Infinitesimal two-sided band at (p, v):
///   B = [ (d rho(v)^2 + d^c rho(v)^2) / rho^2 + |v|^2 / |rho| ]^{1/2},
/// returned as [B/C, C*B].
MetricBand band_infinitesimal(const Domain& dom, const Vec& p, const Vec& v, double C);

/// Exact distance of the unit ball in C^n, normalized so d(0, z) = atanh|z|.
double oracle_distance_ball(int dim_complex, const Vec& p, const Vec& q);

/// Exact infinitesimal metric of the unit ball in C^n.
double oracle_metric_ball(int dim_complex, const Vec& p, const Vec& v);

/// Infinitesimal metric value under the estimator's strategy.
double kob_metric(const Domain& dom, const KobayashiEstimator& est, const Vec& p, const Vec& v);

/// Composite-midpoint quadrature of the metric along a polyline.
/// Throws (naming the vertex) if the curve leaves the domain.
double kob_length(const Domain& dom, const PolylineCurve& curve, const KobayashiEstimator& est);

/// k-nearest-neighbor graph over interior samples, edge weights = metric
/// length of the straight segment; returns all-pairs shortest-path distances.
/// Segments that exit the domain (sampled at 16 interior points) are dropped.
FiniteMetricSpace kob_distance_graph(const Domain& dom, const std::vector<Vec>& samples,
                                     int k_neighbors, const KobayashiEstimator& est);

/// Smallest grid constant C with B/C <= K_oracle <= C*B at all samples.
double fit_band_constant(const Domain& dom, const std::vector<std::pair<Vec, Vec>>& samples);

}  // namespace gvlab
