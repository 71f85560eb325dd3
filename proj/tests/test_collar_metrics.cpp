#include <doctest.h>

#include "gvlab/collar_metrics.hpp"
#include "gvlab/fixtures.hpp"
#include "gvlab/metric_space.hpp"
#include "gvlab/rng.hpp"

#include <cmath>

using namespace gvlab;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

Vec disk_pt(double delta, double angle) {
    return v2((1.0 - delta) * std::cos(angle), (1.0 - delta) * std::sin(angle));
}

}  // namespace

TEST_CASE("g metric closed forms") {
    const Domain disk = make_fixture("disk");

    SUBCASE("coincident points") {
        const GMetricValue v = g_metric(disk, v2(0.3, 0.1), v2(0.3, 0.1), 0.0);
        CHECK(v.value == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("same fiber: |log of the height ratio|") {
        const Vec p = disk_pt(0.04, 0.3);  // h = 0.2
        const Vec q = disk_pt(0.16, 0.3);  // h = 0.4
        const GMetricValue v = g_metric(disk, p, q, 0.0);
        CHECK(v.value == doctest::Approx(std::log(2.0)).epsilon(1e-5));
    }
    SUBCASE("formula arithmetic with supplied boundary distance") {
        const Vec p = disk_pt(0.01, 0.0);  // h = 0.1
        const Vec q = disk_pt(0.01, 2.0);  // h = 0.1
        const GMetricValue v = g_metric(disk, p, q, 1.0);
        CHECK(v.value == doctest::Approx(2.0 * std::log(11.0)).epsilon(1e-5));
        CHECK(v.dH_term == 1.0);
        CHECK(v.height_term == doctest::Approx(0.1).epsilon(1e-5));
    }
    SUBCASE("g is symmetric") {
        const BoundaryDistance bdist(disk);
        const Vec p = disk_pt(0.03, 0.2), q = disk_pt(0.07, 1.1);
        const double dH = bdist(boundary_project(disk, p).location, boundary_project(disk, q).location);
        CHECK(g_metric(disk, p, q, dH).value == doctest::Approx(g_metric(disk, q, p, dH).value));
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(g_metric(disk, v2(1.0, 0.0), v2(0.5, 0.0), 0.0), std::invalid_argument);
        CHECK_THROWS_AS(g_metric(disk, v2(0.5, 0.0), v2(0.2, 0.0), -1.0), std::invalid_argument);
    }
}

TEST_CASE("lift to height") {
    const Domain disk = make_fixture("disk");

    SUBCASE("radial fiber on the disk") {
        const Vec lifted = lift_to_height(disk, v2(0.99, 0.0), 0.2);
        CHECK(lifted[0] == doctest::Approx(0.96).epsilon(1e-6));
        CHECK(std::abs(lifted[1]) <= 1e-8);
    }
    SUBCASE("lift to own height is the identity") {
        const Vec p = v2(0.93, 0.0);
        const double h = height(disk, p);
        CHECK((lift_to_height(disk, p, h) - p).norm() <= 1e-6);
    }
    SUBCASE("ball fiber reaches the center at height 1") {
        const Domain ball = make_fixture("ball2");
        Vec p = Vec::Zero(4);
        p[2] = 0.9;  // on the fiber through the boundary point (0, 0, 1, 0)
        const Vec lifted = lift_to_height(ball, p, 1.0);
        CHECK(lifted.norm() <= 1e-4);
    }
    SUBCASE("unreachable height") {
        CHECK_THROWS_AS(lift_to_height(disk, v2(0.5, 0.0), 1.5), std::runtime_error);
    }
}

TEST_CASE("l_g partition sums") {
    const Domain disk = make_fixture("disk");
    const BoundaryDistance bdist(disk);

    SUBCASE("constant curve") {
        PolylineCurve c;
        c.vertices = {disk_pt(0.05, 0.3), disk_pt(0.05, 0.3)};
        CHECK(l_g_length(disk, c, 6, bdist) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("fiber segment telescopes to the log height ratio") {
        // heights 0.2 -> 0.4 need a collar wider than the 10% default
        Domain::Options opts;
        opts.collar_eps = 0.2;
        const Domain wide = make_fixture("disk", opts);
        const BoundaryDistance wide_bdist(wide);
        PolylineCurve c;
        c.vertices = {disk_pt(0.04, 1.0), disk_pt(0.16, 1.0)};  // heights 0.2 -> 0.4
        std::vector<double> trace;
        const double value = l_g_length(wide, c, 6, wide_bdist, &trace);
        CHECK(value == doctest::Approx(std::log(2.0)).epsilon(1e-4));
        for (std::size_t i = 1; i < trace.size(); ++i)
            CHECK(trace[i] >= trace[i - 1] - 1e-9);  // sup over nested partitions
    }
    SUBCASE("curves outside the collar are rejected") {
        PolylineCurve c;
        c.vertices = {v2(0.0, 0.0), disk_pt(0.05, 0.0)};
        CHECK_THROWS_AS(l_g_length(disk, c, 4, bdist), std::invalid_argument);
    }
}

TEST_CASE("d metric cases") {
    const Domain disk = make_fixture("disk");
    const CollarDModel model(disk);
    const double eps = disk.collar_eps();

    SUBCASE("coincident points outside the collar") {
        CHECK(model.d_metric(v2(0.2, 0.1), v2(0.2, 0.1)) == 0.0);
    }
    SUBCASE("outside point to its own collar lift: the normal segment") {
        const Vec p = v2(0.5, 0.0);
        const Vec p_eps = lift_to_height(disk, p, std::sqrt(eps * (1 - 1e-9)));
        const double d = model.d_metric(p, p_eps);
        CHECK(d == doctest::Approx((p - p_eps).norm()).epsilon(1e-3));
    }
    SUBCASE("same fiber inside the collar: |log height ratio|") {
        const Vec p = disk_pt(0.04, 0.7);  // h = 0.2
        const Vec q = disk_pt(0.09, 0.7);  // h = 0.3
        const double d = model.d_metric(p, q);
        CHECK(d == doctest::Approx(std::log(0.3 / 0.2)).epsilon(0.05));
    }
    SUBCASE("symmetry and zero diagonal across cases") {
        const std::vector<Vec> pts = {disk_pt(0.02, 0.1), disk_pt(0.08, 1.9), v2(0.4, 0.2),
                                      v2(-0.3, 0.5)};
        for (const auto& p : pts) CHECK(model.d_metric(p, p) == 0.0);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                CHECK(model.d_metric(pts[i], pts[j]) ==
                      doctest::Approx(model.d_metric(pts[j], pts[i])).epsilon(1e-9));
    }
    SUBCASE("triangle inequality on sampled triples") {
        std::vector<Vec> pts;
        for (int i = 0; i < 7; ++i)
            pts.push_back(disk_pt(0.002 + 0.012 * i, 0.9 * i));
        Mat d(7, 7);
        d.setZero();
        for (int i = 0; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j)
                d(i, j) = d(j, i) = model.d_metric(pts[static_cast<std::size_t>(i)],
                                                   pts[static_cast<std::size_t>(j)]);
        const MetricAxiomReport rep =
            check_metric_axioms(FiniteMetricSpace::from_matrix(std::move(d)), 1e-6, 1e-6);
        CHECK(rep.triangle.empty());
    }
}

TEST_CASE("g and d are roughly isometric on collar samples") {
    const Domain disk = make_fixture("disk");
    const double eps = disk.collar_eps();
    const BoundaryDistance bdist(disk);
    const CollarDModel model(disk);

    std::vector<Vec> pts;
    for (int i = 0; i < 14; ++i)
        pts.push_back(disk_pt(2e-3 * std::pow(0.9 * eps / 2e-3, i / 13.0), 2.39996 * i));
    const FiniteMetricSpace g = g_metric_matrix(disk, pts, bdist);
    Mat dmat(14, 14);
    dmat.setZero();
    for (int i = 0; i < 14; ++i)
        for (int j = i + 1; j < 14; ++j)
            dmat(i, j) = dmat(j, i) = model.d_metric(pts[static_cast<std::size_t>(i)],
                                                     pts[static_cast<std::size_t>(j)]);
    const DistortionFit fit =
        fit_distortion(g, FiniteMetricSpace::from_matrix(std::move(dmat)), DistortionKind::rough);
    CHECK(fit.c <= 3.0);
    CHECK(fit.violation_fraction == 0.0);
}

TEST_CASE("approximate midpoints exist in the collar model") {
    // pairs whose cone apex fits inside the collar (boundary distance at most
    // sqrt(eps)); farther pairs would route outside where the collar graph
    // cannot witness midpoints
    const Domain disk = make_fixture("disk");
    const CollarDModel model(disk);
    const Vec p = disk_pt(0.004, 0.2);
    const Vec q = disk_pt(0.008, 0.24);
    const double d = model.d_metric(p, q);
    const auto [mid, value] = model.approximate_midpoint(p, q);
    // the planar chain realization keeps the cone-metric midpoint defect of
    // log 2; allow it plus lattice quantization
    CHECK(value <= d / 2.0 + std::log(2.0) + 0.35);
    CHECK(disk.is_interior(mid));
}

TEST_CASE("length estimates on collar curves") {
    const Domain disk = make_fixture("disk");
    const KobayashiEstimator est = KobayashiEstimator::oracle("disk");

    std::vector<CollarCurve> curves;
    {  // normal curve, heights 0.3 -> 0.1
        PolylineCurve c;
        for (int k = 0; k < 33; ++k) {
            const double t = k / 32.0;
            const double delta = 0.09 * std::pow(0.01 / 0.09, t);
            c.vertices.push_back(disk_pt(delta, 0.4));
        }
        curves.push_back({std::move(c), true});
    }
    {  // horizontal arc at fixed height
        PolylineCurve c;
        for (int k = 0; k < 33; ++k)
            c.vertices.push_back(disk_pt(0.05, 0.4 + 0.8 * k / 32.0));
        curves.push_back({std::move(c), false});
    }
    const LengthEstimateReport rep = verify_length_estimates(disk, curves, est);
    CHECK(rep.violations_at_fit == 0);
    CHECK(rep.C1 <= 4.0);
    CHECK(rep.curves_checked == 2);

    // generous given constants also show zero violations
    const LengthEstimateReport given = verify_length_estimates(disk, curves, est,
                                                               std::make_pair(4.0, 1.0));
    CHECK(given.violations_at_given.has_value());
    CHECK(*given.violations_at_given == 0);
}

TEST_CASE("four samples on one fiber give a tree-like g") {
    const Domain disk = make_fixture("disk");
    const BoundaryDistance bdist(disk);
    std::vector<Vec> pts;
    for (const double delta : {0.002, 0.01, 0.04, 0.09})
        pts.push_back(disk_pt(delta, 1.3));
    const DeltaReport rep = verify_gromov_inequality_g(disk, pts, bdist);
    CHECK(rep.delta <= 1e-6);  // line metrics are 0-hyperbolic
}

TEST_CASE("collar points classify against the collar width") {
    const Domain disk = make_fixture("disk");
    const double eps = disk.collar_eps();
    const CollarPoint inside = collar_point(disk, disk_pt(0.5 * eps, 0.3));
    CHECK(inside.in_collar);
    CHECK(inside.h == doctest::Approx(std::sqrt(0.5 * eps)).epsilon(1e-5));
    CHECK(inside.h * inside.h == doctest::Approx(inside.boundary.delta).epsilon(1e-9));
    const CollarPoint outside = collar_point(disk, v2(0.0, 0.0));
    CHECK(!outside.in_collar);
}
