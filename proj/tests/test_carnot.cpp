#include <doctest.h>

#include "gvlab/carnot.hpp"
#include "gvlab/fixtures.hpp"
#include "gvlab/rng.hpp"
#include "gvlab/sampling.hpp"

#include <cmath>

using namespace gvlab;

namespace {

Vec v4(double a, double b, double c, double d) {
    Vec v(4);
    v << a, b, c, d;
    return v;
}

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

/// z1 = cos t, z2 = i sin t: horizontal great circle through (1, 0).
Vec horizontal_circle(double t) { return v4(std::cos(t), 0.0, 0.0, std::sin(t)); }

/// z1 = e^{it}, z2 = 0: the fiber circle, nowhere horizontal.
Vec fiber_circle(double t) { return v4(std::cos(t), 0.0, std::sin(t), 0.0); }

HorizontalCurve sampled_curve(Vec (*gamma)(double), double t0, double t1, int verts,
                              const Domain& dom) {
    HorizontalCurve c;
    for (int k = 0; k < verts; ++k)
        c.vertices.push_back(gamma(t0 + (t1 - t0) * k / (verts - 1.0)));
    c.horizontality_residual = horizontality_residual(dom, c.vertices);
    return c;
}

}  // namespace

TEST_CASE("complex tangent projector on the unit sphere") {
    const Domain ball = make_fixture("ball2");
    const Vec q = v4(1.0, 0.0, 0.0, 0.0);
    const Mat P = complex_tangent_projector(ball, q);

    // T^J at (1,0,0,0) is span{x2, y2}: coordinates 1 and 3 in (x1,x2,y1,y2)
    Mat expected = Mat::Zero(4, 4);
    expected(1, 1) = expected(3, 3) = 1.0;
    CHECK((P - expected).cwiseAbs().maxCoeff() <= 1e-10);

    SUBCASE("idempotent and J-invariant at random boundary points") {
        const std::vector<Vec> pts = sphere3_samples(12, 3);
        for (const auto& p : pts) {
            const Mat Pr = complex_tangent_projector(ball, p);
            CHECK((Pr * Pr - Pr).cwiseAbs().maxCoeff() <= 1e-10);
            const Mat J = ball.J()(p);
            CHECK((Pr * J * Pr - J * Pr).cwiseAbs().maxCoeff() <= 1e-8);
            CHECK(std::abs(Pr.trace() - 2.0) <= 1e-9);  // rank 2n - 2
        }
    }
    SUBCASE("kernel covectors vanish on the projected velocity") {
        const CounterRng rng(7);
        const std::vector<Vec> pts = sphere3_samples(8, 5);
        std::uint64_t k = 0;
        for (const auto& p : pts) {
            const Mat Pr = complex_tangent_projector(ball, p);
            Vec v(4);
            for (int c = 0; c < 4; ++c) v[c] = rng.normal(k++);
            const Vec pv = Pr * v;
            CHECK(std::abs(ball.grad_at(p).dot(pv)) <= 1e-8);
            CHECK(std::abs(dc_rho(ball, p, pv)) <= 1e-8);
        }
    }
    SUBCASE("off-boundary points rejected, degenerate gradient rejected") {
        CHECK_THROWS_AS(complex_tangent_projector(ball, v4(0.5, 0, 0, 0)), std::invalid_argument);
        CHECK_THROWS_AS(contact_projector_at(ball, Vec(Vec::Zero(4))), std::runtime_error);
    }
}

TEST_CASE("Levi length of horizontal curves on the sphere") {
    const Domain ball = make_fixture("ball2");

    SUBCASE("constant curve") {
        HorizontalCurve c;
        c.vertices = {v4(1, 0, 0, 0), v4(1, 0, 0, 0)};
        CHECK(levi_length(ball, c) == 0.0);
    }
    SUBCASE("horizontal great-circle arc has length 2T") {
        const double T = 1.0;
        const HorizontalCurve c = sampled_curve(horizontal_circle, 0.0, T, 65, ball);
        CHECK(c.horizontality_residual <= 1e-3);
        CHECK(levi_length(ball, c) == doctest::Approx(2.0 * T).epsilon(2e-3));
    }
    SUBCASE("the fiber circle is not horizontal") {
        const HorizontalCurve c = sampled_curve(fiber_circle, 0.0, 1.0, 65, ball);
        CHECK(c.horizontality_residual > 0.5);
        CHECK_THROWS_AS(levi_length(ball, c), std::invalid_argument);
    }
    SUBCASE("refinement changes the length by less than 1e-3 relative") {
        const HorizontalCurve coarse = sampled_curve(horizontal_circle, 0.0, 0.8, 65, ball);
        const HorizontalCurve fine = sampled_curve(horizontal_circle, 0.0, 0.8, 129, ball);
        const double a = levi_length(ball, coarse), b = levi_length(ball, fine);
        CHECK(std::abs(a - b) / b <= 1e-3);
    }
}

TEST_CASE("cc distance on the sphere") {
    const Domain ball = make_fixture("ball2");
    CCOptions opts;
    opts.seed = 11;

    SUBCASE("coincident endpoints") {
        const Vec a = v4(1, 0, 0, 0);
        const CCDistanceResult res = cc_distance(ball, a, a, opts);
        CHECK(res.value == 0.0);
    }
    SUBCASE("horizontal great-circle pairs match the arc length") {
        const double T = 0.8;
        const CCDistanceResult res = cc_distance(ball, horizontal_circle(0.0), horizontal_circle(T), opts);
        CHECK(res.curve.horizontality_residual <= opts.horiz_tol);
        CHECK(res.value == doctest::Approx(2.0 * T).epsilon(0.03));
        // refinement trace does not increase beyond solver noise
        CHECK(res.refinement_trace.back().second <=
              res.refinement_trace.front().second + res.solver_tol);
    }
    SUBCASE("symmetry under endpoint swap") {
        const Vec a = horizontal_circle(0.2);
        const Vec b = v4(0.0, std::sqrt(0.5), std::sqrt(0.5), 0.0);
        const CCDistanceResult fwd = cc_distance(ball, a, b, opts);
        const CCDistanceResult rev = cc_distance(ball, b, a, opts);
        CHECK(std::abs(fwd.value - rev.value) <= 2.0 * fwd.solver_tol);
    }
    SUBCASE("vertical pairs connect (contact bracket generates the flow)") {
        const Vec a = v4(1, 0, 0, 0);
        const double th = 0.9;
        const Vec b = v4(std::cos(th), 0.0, std::sin(th), 0.0);  // e^{i th} a: fiber displacement
        const CCDistanceResult res = cc_distance(ball, a, b, opts);
        CHECK(res.curve.horizontality_residual <= opts.horiz_tol);
        CHECK(res.value > 0.5);
        CHECK(std::isfinite(res.value));
    }
    SUBCASE("endpoints off the boundary are rejected") {
        CHECK_THROWS_AS(cc_distance(ball, v4(0.5, 0, 0, 0), v4(1, 0, 0, 0), opts),
                        std::invalid_argument);
    }
}

TEST_CASE("cc distance matrix on a small sphere sample") {
    const Domain ball = make_fixture("ball2");
    CCOptions opts;
    opts.vertices = 9;
    opts.refinements = 2;
    opts.restarts = 1;
    opts.max_iterations = 80;
    opts.seed = 3;
    const std::vector<Vec> pts = sphere3_samples(6, 19);
    const FiniteMetricSpace ms = cc_distance_matrix(ball, pts, opts);

    CHECK(ms.d(0, 0) == 0.0);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) CHECK(ms.d(i, j) == ms.d(j, i));

    // triangle violations bounded by the coarse solver tolerance
    double worst = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t k = 0; k < 6; ++k)
                if (i != j && j != k && i != k)
                    worst = std::max(worst, ms.d(i, j) - ms.d(i, k) - ms.d(k, j));
    const double scale = ms.dist.maxCoeff();
    CHECK(worst <= 0.08 * scale);
}

TEST_CASE("n = 1 parabolic boundary distance") {
    const Domain disk = make_fixture("disk");

    SUBCASE("loop table measures the Levi perimeter of the circle") {
        const BoundaryLoopTable table(disk);
        CHECK(table.total() == doctest::Approx(4.0 * 3.14159265358979324).epsilon(1e-3));
    }
    SUBCASE("distance is the square root of the Levi arc") {
        const double theta = 0.5;
        const CCDistanceResult res =
            cc_distance(disk, v2(1, 0), v2(std::cos(theta), std::sin(theta)));
        CHECK(res.value == doctest::Approx(std::sqrt(2.0 * theta)).epsilon(5e-3));
        CHECK(res.curve.horizontality_residual == 1.0);  // flagged: not horizontal
    }
    SUBCASE("matrix version agrees and is metric") {
        std::vector<Vec> pts;
        for (int i = 0; i < 8; ++i)
            pts.push_back(v2(std::cos(0.7 * i), std::sin(0.7 * i)));
        const FiniteMetricSpace ms = cc_distance_matrix(disk, pts);
        CHECK(check_metric_axioms(ms, 1e-6, 1e-6).ok());
    }
}
