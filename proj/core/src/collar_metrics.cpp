#include "gvlab/collar_metrics.hpp"

#include "gvlab/graph.hpp"

#include <algorithm>
#include <cmath>

namespace gvlab {

CollarPoint collar_point(const Domain& dom, const Vec& p) {
    CollarPoint cp;
    cp.base = p;
    cp.boundary = boundary_project(dom, p);
    cp.h = std::sqrt(cp.boundary.delta);
    cp.in_collar = cp.boundary.delta <= dom.collar_eps();
    return cp;
}

GMetricValue g_metric(const Domain& dom, const Vec& p, const Vec& q, double dH) {
    if (dH < 0.0) throw std::invalid_argument("g_metric: dH must be >= 0");
    if (!dom.is_interior(p) || !dom.is_interior(q))
        throw std::invalid_argument("g_metric: points must be interior");
    const double hp = height(dom, p);
    const double hq = height(dom, q);
    if (hp <= 0.0 || hq <= 0.0)
        throw std::invalid_argument("g_metric: zero height (boundary point)");
    GMetricValue v;
    v.dH_term = dH;
    v.height_term = std::max(hp, hq);
    v.value = 2.0 * std::log((dH + v.height_term) / std::sqrt(hp * hq));
    return v;
}

namespace {

double g_of_heights(double dH, double ha, double hb) {
    return 2.0 * std::log((dH + std::max(ha, hb)) / std::sqrt(ha * hb));
}

}  // namespace

Vec lift_to_height(const Domain& dom, const Vec& p, double target_h) {
    if (target_h < 0.0) throw std::invalid_argument("lift_to_height: target height must be >= 0");
    const BoundaryPoint bp = boundary_project(dom, p);
    Vec inward = bp.base - bp.location;
    const double d0 = inward.norm();
    if (d0 < 1e-14) {
        // base essentially on the boundary; use the interior normal
        inward = -dom.grad_at(bp.location);
    }
    inward /= inward.norm();
    const double target_delta = target_h * target_h;

    // scan along the fiber for a bracket or the cut locus
    const auto delta_at = [&](double s) {
        const Vec cand = bp.location + s * inward;
        if (!dom.is_interior(cand) || !dom.box().contains(cand)) return -1.0;
        return boundary_project(dom, cand).delta;
    };
    const double smax_box = dom.box().diagonal();
    double slo = 0.0, shi = 0.0;
    double s_last = 0.0, prev = 0.0;
    bool bracketed = false;
    const int kScan = 64;
    for (int i = 1; i <= kScan; ++i) {
        const double s = smax_box * i / kScan;
        const double del = delta_at(s);
        if (del < prev - 1e-12) break;  // past the cut locus or out of the domain
        if (del >= target_delta) {
            slo = smax_box * (i - 1) / kScan;
            shi = s;
            bracketed = true;
            break;
        }
        s_last = s;
        prev = del;
    }
    if (!bracketed) {
        // the target may sit at the fiber's height peak; the peak lies within
        // two scan steps of the last non-decreasing sample
        const double step = smax_box / kScan;
        const double lo0 = std::max(0.0, s_last - step);
        double lo = lo0, hi = std::min(smax_box, s_last + 2.0 * step);
        for (int it = 0; it < 80; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (delta_at(m1) < delta_at(m2))
                lo = m1;
            else
                hi = m2;
        }
        const double s_peak = 0.5 * (lo + hi);
        const double peak = delta_at(s_peak);
        if (peak < target_delta * (1.0 - 1e-6))
            throw std::runtime_error(
                "lift_to_height: target height unreachable before the cut locus");
        if (peak <= target_delta) return bp.location + s_peak * inward;
        slo = lo0;
        shi = s_peak;
    }

    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (slo + shi);
        if (delta_at(mid) < target_delta)
            slo = mid;
        else
            shi = mid;
    }
    return bp.location + 0.5 * (slo + shi) * inward;
}

// ---------------------------------------------------------------------------
// BoundaryDistance
// ---------------------------------------------------------------------------

BoundaryDistance::BoundaryDistance(const Domain& dom, CCOptions opts)
    : dom_(&dom), opts_(opts) {
    if (dom.dim_complex() == 1) table_ = std::make_shared<BoundaryLoopTable>(dom);
}

double BoundaryDistance::operator()(const Vec& x, const Vec& y) const {
    if ((x - y).norm() == 0.0) return 0.0;
    if (table_) return table_->boundary_distance(x, y);
    return cc_distance(*dom_, x, y, opts_).value;
}

FiniteMetricSpace g_metric_matrix(const Domain& dom, const std::vector<Vec>& samples,
                                  const BoundaryDistance& bdist) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("g_metric_matrix: need at least 2 samples");

    std::vector<BoundaryPoint> proj(n);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        proj[i] = boundary_project(dom, samples[i]);
        h[i] = std::sqrt(proj[i].delta);
        if (!(h[i] > 0.0)) throw std::invalid_argument("g_metric_matrix: zero-height sample");
    }
    // loop-table path: resolve each projection's arc parameter once
    std::vector<double> param;
    if (const BoundaryLoopTable* table = bdist.loop_table()) {
        param.resize(n);
        for (std::size_t i = 0; i < n; ++i) param[i] = table->param_of(proj[i].location);
    }
    Mat dist = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dH =
                param.empty()
                    ? bdist(proj[i].location, proj[j].location)
                    : std::sqrt(bdist.loop_table()->arc_between(param[i], param[j]));
            const double v = g_of_heights(dH, h[i], h[j]);
            dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    return FiniteMetricSpace::from_matrix(std::move(dist));
}

double l_g_length(const Domain& dom, const PolylineCurve& curve, int partitions,
                  const BoundaryDistance& bdist, std::vector<double>* trace) {
    if (partitions < 0 || partitions > 16)
        throw std::invalid_argument("l_g_length: partitions out of range");
    const double eps = dom.collar_eps();

    // project every dyadic point at the finest level once; coarser levels reuse
    const std::size_t fine = std::size_t{1} << partitions;
    std::vector<Vec> pts(fine + 1);
    std::vector<BoundaryPoint> proj(fine + 1);
    std::vector<double> h(fine + 1);
    for (std::size_t i = 0; i <= fine; ++i) {
        pts[i] = curve.at(static_cast<double>(i) / static_cast<double>(fine));
        proj[i] = boundary_project(dom, pts[i]);
        if (proj[i].delta > eps * (1.0 + 1e-9))
            throw std::invalid_argument("l_g_length: curve exits the collar at t = " +
                                        std::to_string(static_cast<double>(i) / static_cast<double>(fine)));
        h[i] = std::sqrt(proj[i].delta);
    }
    double best = 0.0;
    if (trace) trace->clear();
    for (int level = 0; level <= partitions; ++level) {
        const std::size_t stride = fine >> level;
        double sum = 0.0;
        for (std::size_t i = 0; i + stride <= fine; i += stride) {
            const std::size_t j = i + stride;
            const double dH = bdist(proj[i].location, proj[j].location);
            sum += g_of_heights(dH, h[i], h[j]);
        }
        if (trace) trace->push_back(sum);
        best = std::max(best, sum);
    }
    return best;
}

// ---------------------------------------------------------------------------
// CollarDModel
// ---------------------------------------------------------------------------

struct CollarDModel::QueryGraph {
    WeightedGraph graph{0};
    std::vector<Vec> points;
    std::size_t p_index = 0;
    std::size_t q_index = 0;
};

CollarDModel::CollarDModel(const Domain& dom, CollarModelOptions opts)
    : dom_(&dom), opts_(opts), bdist_(dom, opts.cc), eps_(dom.collar_eps()) {
    if (opts_.fiber_tol <= 0.0) opts_.fiber_tol = 1e-4 * dom.box().diagonal();

    // geometric height levels from sqrt(min_delta) up to sqrt(eps)
    const double h_top = std::sqrt(eps_);
    const double h_bot = std::sqrt(std::max(opts_.min_delta, 1e-12));
    ring_heights_.resize(static_cast<std::size_t>(opts_.rings));
    for (int j = 0; j < opts_.rings; ++j) {
        const double t = opts_.rings == 1 ? 1.0 : static_cast<double>(j) / (opts_.rings - 1);
        ring_heights_[static_cast<std::size_t>(j)] = h_bot * std::pow(h_top / h_bot, t);
    }

    if (dom.dim_complex() == 1 && bdist_.loop_table()) {
        const auto* table = bdist_.loop_table();
        const auto& tr = table->trace();
        const std::size_t stride = std::max<std::size_t>(1, tr.size() / static_cast<std::size_t>(opts_.fibers));
        for (std::size_t i = 0; i < tr.size(); i += stride) {
            lattice_feet_.push_back(tr[i]);
            lattice_param_.push_back(table->param_of(tr[i]));
        }
    }
}

std::vector<CollarDModel::FiberNode> CollarDModel::fiber_nodes(const BoundaryPoint& bp,
                                                               double h_extra) const {
    std::vector<FiberNode> nodes;
    Vec inward = bp.base - bp.location;
    if (inward.norm() < 1e-14) inward = -dom_->grad_at(bp.location);
    inward /= inward.norm();
    for (double h : ring_heights_) {
        nodes.push_back({Vec(bp.location + h * h * inward), h});
    }
    if (h_extra > 0.0) {
        // insert the query point itself at its own height
        nodes.push_back({bp.base, h_extra});
        std::sort(nodes.begin(), nodes.end(),
                  [](const FiberNode& a, const FiberNode& b) { return a.h < b.h; });
    }
    return nodes;
}

CollarDModel::QueryGraph CollarDModel::build_graph(const CollarPoint& cp, const CollarPoint& cq,
                                                   bool with_lattice) const {
    QueryGraph qg;
    const double dH_pq = bdist_(cp.boundary.location, cq.boundary.location);

    const std::vector<FiberNode> fp = fiber_nodes(cp.boundary, cp.h);
    const std::vector<FiberNode> fq = fiber_nodes(cq.boundary, cq.h);

    std::vector<double> heights;  // per node
    const auto push_fiber = [&](const std::vector<FiberNode>& f) {
        const std::size_t base = qg.points.size();
        for (const auto& node : f) {
            qg.points.push_back(node.point);
            heights.push_back(node.h);
        }
        return base;
    };
    const std::size_t p_base = push_fiber(fp);
    const std::size_t q_base = push_fiber(fq);

    // lattice fibers (n = 1): midpoint witnesses on intermediate fibers
    std::vector<std::size_t> lattice_base;
    const BoundaryLoopTable* table = bdist_.loop_table();
    const bool lattice = with_lattice && !lattice_feet_.empty() && table;
    if (lattice) {
        for (const auto& foot : lattice_feet_) {
            lattice_base.push_back(qg.points.size());
            Vec inward = -dom_->grad_at(foot);
            inward /= inward.norm();
            for (double h : ring_heights_) {
                qg.points.push_back(foot + h * h * inward);
                heights.push_back(h);
            }
        }
    }

    qg.graph = WeightedGraph(qg.points.size());

    const auto vertical_edges = [&](std::size_t base, std::size_t count) {
        for (std::size_t j = 0; j + 1 < count; ++j)
            qg.graph.add_edge(base + j, base + j + 1,
                              g_of_heights(0.0, heights[base + j], heights[base + j + 1]));
    };
    vertical_edges(p_base, fp.size());
    vertical_edges(q_base, fq.size());

    // chains between the two query fibers (includes the direct p-q edge)
    for (std::size_t a = 0; a < fp.size(); ++a)
        for (std::size_t b = 0; b < fq.size(); ++b)
            qg.graph.add_edge(p_base + a, q_base + b,
                              g_of_heights(dH_pq, heights[p_base + a], heights[q_base + b]));

    if (lattice) {
        const std::size_t F = lattice_base.size();
        const std::size_t R = ring_heights_.size();
        const double sp = table->param_of(cp.boundary.location);
        const double sq = table->param_of(cq.boundary.location);
        for (std::size_t f = 0; f < F; ++f) vertical_edges(lattice_base[f], R);
        // hook both query fibers into every lattice fiber at every ring
        const auto hook = [&](std::size_t fbase, std::size_t fcount, double s_foot) {
            for (std::size_t f = 0; f < F; ++f) {
                const double dH = std::sqrt(table->arc_between(s_foot, lattice_param_[f]));
                for (std::size_t a = 0; a < fcount; ++a)
                    for (std::size_t r = 0; r < R; ++r)
                        qg.graph.add_edge(fbase + a, lattice_base[f] + r,
                                          g_of_heights(dH, heights[fbase + a], ring_heights_[r]));
            }
        };
        hook(p_base, fp.size(), sp);
        hook(q_base, fq.size(), sq);
    }

    // locate the query nodes (inserted at their own height)
    qg.p_index = p_base;
    for (std::size_t a = 0; a < fp.size(); ++a)
        if ((fp[a].point - cp.base).norm() < 1e-12) qg.p_index = p_base + a;
    qg.q_index = q_base;
    for (std::size_t b = 0; b < fq.size(); ++b)
        if ((fq[b].point - cq.base).norm() < 1e-12) qg.q_index = q_base + b;
    return qg;
}

double CollarDModel::d_metric(const Vec& p, const Vec& q) const {
    if (!dom_->is_interior(p) || !dom_->is_interior(q))
        throw std::invalid_argument("d_metric: points must be interior");
    if ((p - q).norm() == 0.0) return 0.0;

    const CollarPoint cp = collar_point(*dom_, p);
    const CollarPoint cq = collar_point(*dom_, q);
    // lifts land a hair inside the collar edge so the recursion terminates
    const double h_eps = std::sqrt(eps_ * (1.0 - 1e-9));

    if (cp.in_collar && cq.in_collar) {
        const QueryGraph qg = build_graph(cp, cq, /*with_lattice=*/false);
        const std::vector<double> dist = dijkstra(qg.graph, qg.p_index);
        return dist[qg.q_index];
    }
    if (cp.in_collar != cq.in_collar) {
        const Vec& outside = cp.in_collar ? q : p;
        const Vec& inside = cp.in_collar ? p : q;
        const Vec lifted = lift_to_height(*dom_, outside, h_eps);
        return d_metric(inside, lifted) + (outside - lifted).norm();
    }
    const bool same_fiber =
        (cp.boundary.location - cq.boundary.location).norm() <= opts_.fiber_tol;
    if (same_fiber) return (p - q).norm();
    const Vec p_eps = lift_to_height(*dom_, p, h_eps);
    const Vec q_eps = lift_to_height(*dom_, q, h_eps);
    return (p - p_eps).norm() + d_metric(p_eps, q_eps) + (q - q_eps).norm();
}

std::pair<Vec, double> CollarDModel::approximate_midpoint(const Vec& p, const Vec& q) const {
    const CollarPoint cp = collar_point(*dom_, p);
    const CollarPoint cq = collar_point(*dom_, q);
    if (!cp.in_collar || !cq.in_collar)
        throw std::invalid_argument("approximate_midpoint: both points must be in the collar");
    const QueryGraph qg = build_graph(cp, cq, /*with_lattice=*/true);
    const std::vector<double> dp = dijkstra(qg.graph, qg.p_index);
    const std::vector<double> dq = dijkstra(qg.graph, qg.q_index);
    std::size_t best = qg.p_index;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < qg.points.size(); ++m) {
        const double v = std::max(dp[m], dq[m]);
        if (v < best_v) {
            best_v = v;
            best = m;
        }
    }
    return {qg.points[best], best_v};
}

// ---------------------------------------------------------------------------
// Length estimates and the g-matrix hyperbolicity scan
// ---------------------------------------------------------------------------

LengthEstimateReport verify_length_estimates(const Domain& dom,
                                             const std::vector<CollarCurve>& curves,
                                             const KobayashiEstimator& est,
                                             std::optional<std::pair<double, double>> given) {
    LengthEstimateReport rep;
    rep.curves_checked = curves.size();

    struct Item {
        double lk, logratio;
        bool normal;
    };
    std::vector<Item> items;
    items.reserve(curves.size());
    const double eps = dom.collar_eps();
    for (const auto& cc : curves) {
        if (cc.curve.vertices.size() < 2)
            throw std::invalid_argument("verify_length_estimates: degenerate curve");
        for (const auto& v : cc.curve.vertices)
            if (boundary_project(dom, v).delta > eps * (1.0 + 1e-9))
                throw std::invalid_argument("verify_length_estimates: curve exits the collar");
        const double h0 = height(dom, cc.curve.vertices.front());
        const double h1 = height(dom, cc.curve.vertices.back());
        items.push_back({kob_length(dom, cc.curve, est), std::abs(std::log(h1 / h0)), cc.normal});
    }

    // ratio envelopes: lower bound needs C1 >= logratio / l_K for all curves,
    // the normal-curve upper bound needs C1 >= l_K / logratio
    const double tiny = 1e-9;
    double c1_star = 1.0;
    for (const auto& it : items) {
        if (it.lk > tiny && it.logratio > tiny) {
            c1_star = std::max(c1_star, it.logratio / it.lk);
            if (it.normal) c1_star = std::max(c1_star, it.lk / it.logratio);
        }
    }
    // smallest point of the geometric grid 2^(k/32) above the envelope
    const double step = std::log(2.0) / 32.0;
    rep.C1 = std::exp(step * std::max(0.0, std::ceil(std::log(c1_star) / step - 1e-12)));

    double c2 = 0.0;
    for (const auto& it : items) {
        c2 = std::max(c2, it.logratio / rep.C1 - it.lk);
        if (it.normal) c2 = std::max(c2, it.lk - rep.C1 * it.logratio);
    }
    rep.C2 = std::max(0.0, c2) + 1e-12;

    const auto violations_at = [&](double C1, double C2) {
        std::size_t count = 0;
        for (const auto& it : items) {
            if (it.logratio / C1 - C2 > it.lk) ++count;
            if (it.normal && it.lk > C1 * it.logratio + C2) ++count;
        }
        return count;
    };
    rep.violations_at_fit = violations_at(rep.C1, rep.C2);
    if (given) rep.violations_at_given = violations_at(given->first, given->second);
    return rep;
}

DeltaReport verify_gromov_inequality_g(const Domain& dom, const std::vector<Vec>& samples,
                                       const BoundaryDistance& bdist) {
    if (samples.size() < 4)
        throw std::invalid_argument("verify_gromov_inequality_g: need at least 4 samples");
    const FiniteMetricSpace g = g_metric_matrix(dom, samples, bdist);
    return delta_four_point(g, DeltaMode::exhaustive, 0);
}

}  // namespace gvlab
