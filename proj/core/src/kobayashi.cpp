#include "gvlab/kobayashi.hpp"

#include "gvlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

namespace gvlab {

namespace {

std::complex<double> complex_coord(const Vec& p, int n, int j) {
    return {p[j], p[n + j]};
}

/// Hermitian inner product <a, b> = sum a_j conj(b_j) of realified vectors.
std::complex<double> hermitian(const Vec& a, const Vec& b, int n) {
    std::complex<double> s{0.0, 0.0};
    for (int j = 0; j < n; ++j) s += complex_coord(a, n, j) * std::conj(complex_coord(b, n, j));
    return s;
}

}  // namespace

MetricBand band_infinitesimal(const Domain& dom, const Vec& p, const Vec& v, double C) {
    if (!(dom.rho_at(p) < 0.0))
        throw std::invalid_argument("band_infinitesimal: point is not interior");
    if (!(C >= 1.0)) throw std::invalid_argument("band_infinitesimal: C must be >= 1");
    if (!dom.region_type())
        throw std::invalid_argument(
            "band_infinitesimal: two-sided band requires a region-type domain "
            "(globally defined strictly plurisubharmonic rho)");
    const double r = dom.rho_at(p);
    const Vec g = dom.grad_at(p);
    const double dr = g.dot(v);               // d rho (v)
    const double dcr = -g.dot(dom.J()(p) * v);  // d^c rho (v)
    const double b2 = (dr * dr + dcr * dcr) / (r * r) + v.squaredNorm() / std::abs(r);
    const double b = std::sqrt(b2);
    return {b / C, C * b};
}

double oracle_distance_ball(int dim_complex, const Vec& p, const Vec& q) {
    const int n = dim_complex;
    if (p.size() != 2 * n || q.size() != 2 * n)
        throw std::invalid_argument("oracle_distance_ball: dimension mismatch");
    const double np2 = p.squaredNorm(), nq2 = q.squaredNorm();
    if (np2 >= 1.0 || nq2 >= 1.0)
        throw std::invalid_argument("oracle_distance_ball: point on or outside the unit sphere");
    const std::complex<double> ip = hermitian(p, q, n);
    const double denom = std::norm(std::complex<double>(1.0, 0.0) - ip);
    const double t2 = 1.0 - (1.0 - np2) * (1.0 - nq2) / denom;
    return std::atanh(std::sqrt(std::max(0.0, t2)));
}

double oracle_metric_ball(int dim_complex, const Vec& p, const Vec& v) {
    const int n = dim_complex;
    const double np2 = p.squaredNorm();
    if (np2 >= 1.0)
        throw std::invalid_argument("oracle_metric_ball: point on or outside the unit sphere");
    const double a = 1.0 - np2;
    const double vz = std::norm(hermitian(v, p, n));
    return std::sqrt(v.squaredNorm() / a + vz / (a * a));
}

namespace {

bool oracle_available(const Domain& dom, const std::string& oracle_id) {
    return (oracle_id == "disk" || oracle_id == "ball2") && dom.name() == oracle_id;
}

}  // namespace

double kob_metric(const Domain& dom, const KobayashiEstimator& est, const Vec& p, const Vec& v) {
    switch (est.strategy) {
        case EstimatorStrategy::oracle:
            if (est.oracle_id.empty())
                throw std::invalid_argument("kob_metric: oracle strategy requires oracle_id");
            if (!oracle_available(dom, est.oracle_id))
                throw std::invalid_argument("kob_metric: no oracle for domain '" + dom.name() +
                                            "' (estimator oracle_id '" + est.oracle_id + "')");
            return oracle_metric_ball(dom.dim_complex(), p, v);
        case EstimatorStrategy::band_midpoint: {
            const MetricBand b = band_infinitesimal(dom, p, v, est.C);
            return 0.5 * (b.lower + b.upper);
        }
        case EstimatorStrategy::band_upper:
            return band_infinitesimal(dom, p, v, est.C).upper;
        case EstimatorStrategy::band_lower:
            return band_infinitesimal(dom, p, v, est.C).lower;
    }
    throw std::logic_error("kob_metric: bad strategy");
}

double kob_length(const Domain& dom, const PolylineCurve& curve, const KobayashiEstimator& est) {
    for (std::size_t i = 0; i < curve.vertices.size(); ++i)
        if (!dom.is_interior(curve.vertices[i]))
            throw std::invalid_argument("kob_length: curve exits the domain at vertex " +
                                        std::to_string(i));
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < curve.vertices.size(); ++i) {
        const Vec seg = curve.vertices[i + 1] - curve.vertices[i];
        if (seg.norm() == 0.0) continue;
        const Vec mid = 0.5 * (curve.vertices[i] + curve.vertices[i + 1]);
        if (!dom.is_interior(mid))
            throw std::invalid_argument("kob_length: curve exits the domain after vertex " +
                                        std::to_string(i));
        total += kob_metric(dom, est, mid, seg);
    }
    return total;
}

FiniteMetricSpace kob_distance_graph(const Domain& dom, const std::vector<Vec>& samples,
                                     int k_neighbors, const KobayashiEstimator& est) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("kob_distance_graph: need at least 2 samples");
    if (k_neighbors < 1) throw std::invalid_argument("kob_distance_graph: k_neighbors must be >= 1");
    for (std::size_t i = 0; i < n; ++i)
        if (!dom.is_interior(samples[i]))
            throw std::invalid_argument("kob_distance_graph: sample " + std::to_string(i) +
                                        " is not interior");

    // Euclidean k-nearest neighbors (symmetrized)
    std::vector<std::vector<std::size_t>> nn(n);
    {
        std::vector<std::pair<double, std::size_t>> cand(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            cand.clear();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) cand.emplace_back((samples[i] - samples[j]).squaredNorm(), j);
            const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_neighbors),
                                                        cand.size());
            std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k),
                              cand.end());
            nn[i].reserve(k);
            for (std::size_t t = 0; t < k; ++t) nn[i].push_back(cand[t].second);
        }
    }

    const auto segment_inside = [&](const Vec& a, const Vec& b) {
        for (int s = 0; s < 16; ++s) {
            const double t = (s + 0.5) / 16.0;
            if (!dom.is_interior((1.0 - t) * a + t * b)) return false;
        }
        return true;
    };

    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (const std::size_t j : nn[i]) pairs.insert({std::min(i, j), std::max(i, j)});

    // composite midpoint with dyadic refinement until the edge value settles;
    // near-boundary edges see steep metric variation and need the extra rungs
    const auto edge_weight = [&](const Vec& a, const Vec& b) {
        double prev = kob_metric(dom, est, 0.5 * (a + b), b - a);
        for (int m = 2; m <= 64; m *= 2) {
            double cur = 0.0;
            const Vec step = (b - a) / m;
            for (int s = 0; s < m; ++s)
                cur += kob_metric(dom, est, a + (s + 0.5) * step, step);
            if (std::abs(cur - prev) <= 1e-6 * std::abs(cur)) return cur;
            prev = cur;
        }
        return prev;
    };

    WeightedGraph g(n);
    for (const auto& [a, b] : pairs) {
        if (!segment_inside(samples[a], samples[b])) continue;
        g.add_edge(a, b, edge_weight(samples[a], samples[b]));
    }

    const std::vector<int> comp = connected_components(g);
    const int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
    if (ncomp > 1) {
        std::string msg = "kob_distance_graph: graph is disconnected (" + std::to_string(ncomp) +
                          " components; sizes";
        for (int c = 0; c < ncomp; ++c)
            msg += " " + std::to_string(std::count(comp.begin(), comp.end(), c));
        throw std::runtime_error(msg + ")");
    }

    Mat dist(n, n);
    for (std::size_t s = 0; s < n; ++s) {
        const std::vector<double> d = dijkstra(g, s);
        for (std::size_t j = 0; j < n; ++j) dist(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = d[j];
    }
    // enforce exact symmetry (heap order can leave last-ulp asymmetries)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                                    dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
            dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    return FiniteMetricSpace::from_matrix(std::move(dist));
}

double fit_band_constant(const Domain& dom, const std::vector<std::pair<Vec, Vec>>& samples) {
    if (!oracle_available(dom, dom.name()))
        throw std::invalid_argument("fit_band_constant: no oracle for domain '" + dom.name() + "'");
    double c_star = 1.0;
    for (const auto& [p, v] : samples) {
        if (v.norm() == 0.0) continue;
        const double b = band_infinitesimal(dom, p, v, 1.0).upper;  // C = 1: band collapses to B
        const double k = oracle_metric_ball(dom.dim_complex(), p, v);
        if (b <= 0.0 || k <= 0.0)
            throw std::runtime_error("fit_band_constant: degenerate band or oracle value");
        c_star = std::max({c_star, b / k, k / b});
    }
    // smallest point of the geometric grid 2^(k/32), k = 0, 1, ...
    const double step = std::log(2.0) / 32.0;
    const double k = std::ceil(std::log(c_star) / step - 1e-12);
    const double c_grid = std::exp(step * std::max(0.0, k));
    return std::max(1.0, c_grid);
}

}  // namespace gvlab
