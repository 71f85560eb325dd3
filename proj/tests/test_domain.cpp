#include <doctest.h>

#include "gvlab/domain.hpp"
#include "gvlab/fixtures.hpp"
#include "gvlab/rng.hpp"

#include <cmath>

using namespace gvlab;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

Vec v4(double a, double b, double c, double d) {
    Vec v(4);
    v << a, b, c, d;
    return v;
}

/// Levi form of a J_st-polynomial via the complex Hessian: L(v) = 4 sum
/// rho_{z_j zbar_k} zeta_j zbar_k with zeta the complexified v. Test-side
/// closed forms below use constant complex Hessians.
double levi_from_complex_hessian(const Mat& rho_zzbar, const Vec& v, int n) {
    double total = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const double re_j = v[j], im_j = v[n + j];
            const double re_k = v[k], im_k = v[n + k];
            // Re(zeta_j * conj(zeta_k)) for a real symmetric coefficient matrix
            total += rho_zzbar(j, k) * (re_j * re_k + im_j * im_k);
        }
    return 4.0 * total;
}

}  // namespace

TEST_CASE("d^c rho on the disk matches the symbolic 1-form -2y dx + 2x dy") {
    const Domain disk = make_fixture("disk");
    const Vec p = v2(1.0, 0.0);
    CHECK(dc_rho(disk, p, v2(0, 0)) == 0.0);
    CHECK(dc_rho(disk, p, v2(1, 0)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dc_rho(disk, p, v2(0, 1)) == doctest::Approx(2.0).epsilon(1e-14));

    const CounterRng rng(3);
    for (int i = 0; i < 16; ++i) {
        const Vec q = v2(rng.uniform(2 * i, -1.2, 1.2), rng.uniform(2 * i + 1, -1.2, 1.2));
        const Vec v = v2(rng.uniform(100 + 2 * i, -1, 1), rng.uniform(101 + 2 * i, -1, 1));
        CHECK(dc_rho(disk, q, v) ==
              doctest::Approx(-2.0 * q[1] * v[0] + 2.0 * q[0] * v[1]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(dc_rho(disk, v2(5, 0), v2(1, 0)), std::invalid_argument);
}

TEST_CASE("Levi form agrees with the complex-Hessian closed forms") {
    SUBCASE("|z|^2 on C has Levi form 4 |v|^2") {
        const Domain disk = make_fixture("disk");
        const Mat h = Mat::Identity(1, 1);
        const CounterRng rng(5);
        for (int i = 0; i < 12; ++i) {
            const Vec p = v2(rng.uniform(3 * i, -0.9, 0.9), rng.uniform(3 * i + 1, -0.9, 0.9));
            const Vec v = v2(rng.uniform(200 + 3 * i, -1, 1), rng.uniform(201 + 3 * i, -1, 1));
            CHECK(levi_form(disk, p, v) ==
                  doctest::Approx(levi_from_complex_hessian(h, v, 1)).epsilon(1e-9));
        }
        CHECK(levi_form(disk, v2(0.3, -0.2), v2(0, 0)) == 0.0);
    }
    SUBCASE("Re z^2 is pluriharmonic") {
        const Domain saddle = make_fixture("saddle");
        CHECK(levi_form(saddle, v2(0.2, 0.4), v2(1, 0)) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(levi_form(saddle, v2(-0.1, 0.5), v2(0.3, -0.7)) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("harmonic additions are invisible: indexed fixture has the ball Levi form") {
        const Domain ind = make_fixture("indexed_psh");
        const Mat h = Mat::Identity(2, 2);
        const Vec p = v4(0.2, -0.1, 0.3, 0.1);
        const Vec v = v4(0.5, 1.0, -0.25, 0.75);
        CHECK(levi_form(ind, p, v) ==
              doctest::Approx(levi_from_complex_hessian(h, v, 2)).epsilon(1e-9));
    }
}

TEST_CASE("Levi form is a quadratic form in v") {
    const Domain ball = make_fixture("ball2");
    const Vec p = v4(0.1, 0.2, -0.3, 0.05);
    const Vec v = v4(0.7, -0.2, 0.5, 0.1);
    const double base = levi_form(ball, p, v);
    for (const double a : {2.0, -3.0, 0.25})
        CHECK(levi_form(ball, p, Vec(a * v)) == doctest::Approx(a * a * base).epsilon(1e-12));
}

TEST_CASE("finite-difference route matches the constant-structure route") {
    // same constant field, but declared position-dependent: exercises the
    // central-difference exterior derivative instead of the Hessian formula
    const Domain ball = make_fixture("ball2");
    const Mat J0 = AlmostComplexStructure::standard(2)(Vec::Zero(4));
    const AlmostComplexStructure lying(2, [J0](const Vec&) { return J0; }, /*constant=*/false);
    const Domain ball_fd(ball.rho(), lying, ball.box(), ball.witness(), {}, "ball2_fd", true);

    const Vec p = v4(0.25, -0.15, 0.2, 0.1);
    const Mat a = levi_matrix(ball, p);
    const Mat b = levi_matrix(ball_fd, p);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("finite-difference Levi error shrinks at second order") {
    // |z|^4 on C: complex Hessian 4|z|^2, so L(p, v) = 16 |p|^2 |v|^2
    Polynomial quartic(2);
    quartic.add_power(1.0, 0, 4).add_power(1.0, 1, 4);
    std::vector<int> mixed = {2, 2};
    quartic.add_term(2.0, mixed);
    quartic.add_constant(-1.0);
    // eval-only defining function: Hessian comes from differences
    DefiningFunction rho(1, [quartic](const Vec& p) { return quartic(p); });
    const Domain dom(std::move(rho), AlmostComplexStructure::standard(1), Box::cube(2, -1.5, 1.5),
                     Vec::Zero(2), {}, "quartic", true);

    const Vec p = v2(0.5, 0.3);
    const Vec v = v2(1.0, 0.0);
    const double exact = 16.0 * p.squaredNorm() * v.squaredNorm();
    const auto levi_at_step = [&](double h) {
        const Mat A = dcrho_exterior_derivative(dom, p, h);
        return v.dot(A * (dom.J()(p) * v));
    };
    const double err1 = std::abs(levi_at_step(1e-2) - exact);
    const double err2 = std::abs(levi_at_step(5e-3) - exact);
    CHECK(err2 <= err1 / 3.0);  // O(h^2) contraction, with slack
    CHECK(err2 <= 1e-3);
}

TEST_CASE("strict psh certificates") {
    CHECK(check_strict_psh(make_fixture("ball2"), 5).min_eigenvalue == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(check_strict_psh(make_fixture("indexed_psh"), 5).min_eigenvalue ==
          doctest::Approx(4.0).epsilon(1e-8));
    CHECK(check_strict_psh(make_fixture("saddle"), 7).min_eigenvalue <= 1e-9);
    CHECK(check_strict_psh(make_fixture("two_spheres"), 5).min_eigenvalue < -1.0);
}

TEST_CASE("gradient finite differences agree with analytic gradients") {
    const Domain ball = make_fixture("ball2");
    const CounterRng rng(9);
    for (int i = 0; i < 8; ++i) {
        Vec p(4);
        for (int c = 0; c < 4; ++c) p[c] = rng.uniform(4 * i + c, -1.0, 1.0);
        const Vec g1 = ball.rho().gradient(p);
        const Vec g2 = ball.rho().fd_gradient(p);
        CHECK((g1 - g2).norm() <= 1e-7 * std::max(1.0, g1.norm()));
    }
}

TEST_CASE("boundary projection on model domains") {
    const Domain disk = make_fixture("disk");

    SUBCASE("radial point") {
        const BoundaryPoint bp = boundary_project(disk, v2(0.5, 0.0));
        CHECK(bp.location[0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(bp.location[1]) <= 1e-6);
        CHECK(bp.delta == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(std::abs(disk.rho_at(bp.location)) <= 1e-7);
    }
    SUBCASE("center: equidistant, deterministic tie-break") {
        const BoundaryPoint bp = boundary_project(disk, v2(0.0, 0.0));
        CHECK(bp.delta == doctest::Approx(1.0).epsilon(1e-6));
        const BoundaryPoint again = boundary_project(disk, v2(0.0, 0.0));
        CHECK((bp.location - again.location).norm() == 0.0);
    }
    SUBCASE("first-order optimality: offset is normal to the boundary") {
        const BoundaryPoint bp = boundary_project(disk, v2(0.3, 0.4));
        const Vec r = bp.base - bp.location;
        Vec tangent(2);
        const Vec g = disk.grad_at(bp.location);
        tangent << -g[1], g[0];
        CHECK(std::abs(r.dot(tangent)) / r.norm() / tangent.norm() <= 1e-5);
    }
    SUBCASE("ball in C^2") {
        const Domain ball = make_fixture("ball2");
        const BoundaryPoint bp = boundary_project(ball, v4(0.3, 0.0, 0.4, 0.0));
        CHECK((bp.location - v4(0.6, 0.0, 0.8, 0.0)).norm() <= 1e-6);
        CHECK(bp.delta == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("non-interior point rejected") {
        CHECK_THROWS_AS(boundary_project(disk, v2(1.2, 0.0)), std::invalid_argument);
    }
}

TEST_CASE("height examples and monotonicity along the inward normal") {
    const Domain disk = make_fixture("disk");
    CHECK(height(disk, v2(0.96, 0.0)) == doctest::Approx(0.2).epsilon(1e-6));
    const Domain ball = make_fixture("ball2");
    CHECK(height(ball, Vec(Vec::Zero(4))) == doctest::Approx(1.0).epsilon(1e-6));

    double prev = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double h = height(disk, v2(1.0 - 0.1 * k, 0.0));
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("structure audits") {
    SUBCASE("standard structure squares to -I") {
        const AlmostComplexStructure J = AlmostComplexStructure::standard(3);
        J.audit_at(Vec::Zero(6));
        const Mat m = J(Vec::Zero(6));
        CHECK((m * m + Mat::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("sheared structure stays a complex structure exactly") {
        const AlmostComplexStructure J = sheared_structure(2, 0.3);
        const CounterRng rng(13);
        for (int i = 0; i < 8; ++i) {
            Vec p(4);
            for (int c = 0; c < 4; ++c) p[c] = rng.uniform(4 * i + c, -2.0, 2.0);
            J.audit_at(p);  // throws on violation
        }
        CHECK(!J.is_constant());
    }
    SUBCASE("broken field is rejected at domain construction") {
        const AlmostComplexStructure bad(1, [](const Vec&) { return Mat::Identity(2, 2); }, true);
        Polynomial p(2);
        p.add_power(1.0, 0, 2).add_power(1.0, 1, 2).add_constant(-1.0);
        CHECK_THROWS_AS(
            make_polynomial_domain(1, p, bad, Box::cube(2, -1.5, 1.5), Vec::Zero(2)),
            std::runtime_error);
    }
}

TEST_CASE("domain construction validates the witness") {
    Polynomial p(2);
    p.add_power(1.0, 0, 2).add_power(1.0, 1, 2).add_constant(-1.0);
    // witness outside {rho < 0}
    Vec w(2);
    w << 1.4, 0.0;
    CHECK_THROWS_AS(make_polynomial_domain(1, p, AlmostComplexStructure::standard(1),
                                           Box::cube(2, -1.5, 1.5), w),
                    std::invalid_argument);
}
