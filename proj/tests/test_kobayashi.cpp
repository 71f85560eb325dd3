#include <doctest.h>

#include "gvlab/fixtures.hpp"
#include "gvlab/kobayashi.hpp"
#include "gvlab/rng.hpp"
#include "gvlab/sampling.hpp"

#include <cmath>
#include <complex>

using namespace gvlab;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

PolylineCurve radial_segment(double r1, int vertices) {
    PolylineCurve c;
    for (int k = 0; k < vertices; ++k)
        c.vertices.push_back(v2(r1 * k / (vertices - 1.0), 0.0));
    return c;
}

}  // namespace

TEST_CASE("band value from the closed-form arithmetic on the disk") {
    const Domain disk = make_fixture("disk");
    const double delta = 0.1;
    const Vec p = v2(1.0 - delta, 0.0);
    const Vec vx = v2(1.0, 0.0);

    // rho = x^2 + y^2 - 1: d rho(v) = 2(1-delta), d^c rho(v) = 0, |rho| = 2 delta - delta^2
    const double absrho = 2.0 * delta - delta * delta;
    const double expected_b =
        std::sqrt(4.0 * (1.0 - delta) * (1.0 - delta) / (absrho * absrho) + 1.0 / absrho);

    const MetricBand band = band_infinitesimal(disk, p, vx, 2.0);
    CHECK(band.upper == doctest::Approx(2.0 * expected_b).epsilon(1e-12));
    CHECK(band.lower == doctest::Approx(0.5 * expected_b).epsilon(1e-12));

    // exact metric 1/(1 - r^2) sits inside once C >= B/K = sqrt(1 + 3 r^2)
    const double exact = 1.0 / absrho;
    const double c_needed = std::sqrt(1.0 + 3.0 * (1.0 - delta) * (1.0 - delta));
    const MetricBand tight = band_infinitesimal(disk, p, vx, c_needed + 1e-12);
    CHECK(tight.lower <= exact);
    CHECK(exact <= tight.upper);
}

TEST_CASE("band at the ball center is exact") {
    const Domain ball = make_fixture("ball2");
    Vec v = Vec::Zero(4);
    v[1] = 1.0;
    const MetricBand band = band_infinitesimal(ball, Vec(Vec::Zero(4)), v, 1.5);
    CHECK(band.lower == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
    CHECK(band.upper == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(oracle_metric_ball(2, Vec(Vec::Zero(4)), v) == doctest::Approx(1.0));
}

TEST_CASE("band edge cases") {
    const Domain disk = make_fixture("disk");
    const MetricBand zero = band_infinitesimal(disk, v2(0.2, 0.1), v2(0, 0), 3.0);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == 0.0);
    CHECK_THROWS_AS(band_infinitesimal(disk, v2(1.5, 0), v2(1, 0), 2.0), std::invalid_argument);
    CHECK_THROWS_AS(band_infinitesimal(disk, v2(0.2, 0), v2(1, 0), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(band_infinitesimal(make_fixture("two_spheres"), Vec(Vec::Zero(4)), Vec(Vec::Ones(4)), 2.0),
                    std::invalid_argument);
}

TEST_CASE("band homogeneity in v") {
    const Domain disk = make_fixture("disk");
    const Vec p = v2(0.4, -0.3);
    const Vec v = v2(0.6, 0.8);
    const MetricBand base = band_infinitesimal(disk, p, v, 2.0);
    for (const double a : {3.0, -2.0, 0.125}) {
        const MetricBand scaled = band_infinitesimal(disk, p, Vec(a * v), 2.0);
        CHECK(scaled.lower == doctest::Approx(std::abs(a) * base.lower).epsilon(1e-13));
        CHECK(scaled.upper == doctest::Approx(std::abs(a) * base.upper).epsilon(1e-13));
    }
}

TEST_CASE("ball distance oracle") {
    CHECK(oracle_distance_ball(1, v2(0, 0), v2(0, 0)) == 0.0);
    CHECK(oracle_distance_ball(1, v2(0, 0), v2(0.5, 0)) == doctest::Approx(std::atanh(0.5)));
    CHECK(oracle_distance_ball(1, v2(0.3, 0), v2(0.3, 0)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(oracle_distance_ball(1, v2(0, 0), v2(1.0, 0)), std::invalid_argument);

    // Moebius-invariant formula as an independent route on the disk
    const CounterRng rng(17);
    for (int i = 0; i < 24; ++i) {
        const std::complex<double> z(rng.uniform(4 * i, -0.7, 0.7), rng.uniform(4 * i + 1, -0.7, 0.7));
        const std::complex<double> w(rng.uniform(4 * i + 2, -0.7, 0.7),
                                     rng.uniform(4 * i + 3, -0.7, 0.7));
        const double moebius = std::atanh(std::abs((z - w) / (1.0 - std::conj(z) * w)));
        const double lib = oracle_distance_ball(1, v2(z.real(), z.imag()), v2(w.real(), w.imag()));
        CHECK(lib == doctest::Approx(moebius).epsilon(1e-12));
        CHECK(lib == doctest::Approx(oracle_distance_ball(1, v2(w.real(), w.imag()),
                                                          v2(z.real(), z.imag())))
                         .epsilon(1e-12));
    }

    // C^2: distance from the center is atanh of the norm
    Vec q = Vec::Zero(4);
    q[0] = 0.3;
    q[3] = 0.4;
    CHECK(oracle_distance_ball(2, Vec(Vec::Zero(4)), q) == doctest::Approx(std::atanh(0.5)).epsilon(1e-12));
}

TEST_CASE("ball infinitesimal oracle closed forms") {
    // radial direction at radius r: |v| / (1 - r^2); tangential: |v| / sqrt(1 - r^2)
    const double r = 0.6;
    Vec p = Vec::Zero(4);
    p[0] = r;
    Vec radial = Vec::Zero(4);
    radial[0] = 1.0;
    Vec tangential = Vec::Zero(4);
    tangential[1] = 1.0;
    CHECK(oracle_metric_ball(2, p, radial) == doctest::Approx(1.0 / (1 - r * r)).epsilon(1e-12));
    CHECK(oracle_metric_ball(2, p, tangential) ==
          doctest::Approx(1.0 / std::sqrt(1 - r * r)).epsilon(1e-12));
}

TEST_CASE("metric length quadrature") {
    const Domain disk = make_fixture("disk");
    const KobayashiEstimator est = KobayashiEstimator::oracle("disk");

    SUBCASE("constant curve has zero length") {
        PolylineCurve c;
        c.vertices = {v2(0.2, 0.2), v2(0.2, 0.2), v2(0.2, 0.2)};
        CHECK(kob_length(disk, c, est) == 0.0);
    }
    SUBCASE("radial segment converges to the closed form under subdivision") {
        const double expected = std::atanh(0.5);
        double prev_err = 1.0;
        for (const int verts : {3, 5, 9, 17, 33}) {
            const double len = kob_length(disk, radial_segment(0.5, verts), est);
            const double err = std::abs(len - expected);
            CHECK(err <= prev_err + 1e-15);
            prev_err = err;
        }
        CHECK(prev_err <= 2e-5);
    }
    SUBCASE("band strategies are ordered pointwise") {
        const PolylineCurve c = radial_segment(0.8, 17);
        const double lo = kob_length(disk, c, KobayashiEstimator::band(EstimatorStrategy::band_lower, 3.0));
        const double mid =
            kob_length(disk, c, KobayashiEstimator::band(EstimatorStrategy::band_midpoint, 3.0));
        const double hi = kob_length(disk, c, KobayashiEstimator::band(EstimatorStrategy::band_upper, 3.0));
        CHECK(lo < mid);
        CHECK(mid < hi);
    }
    SUBCASE("curve leaving the domain is rejected with the vertex named") {
        PolylineCurve c;
        c.vertices = {v2(0.0, 0.0), v2(1.5, 0.0)};
        CHECK_THROWS_WITH_AS(kob_length(disk, c, est),
                             doctest::Contains("vertex 1"), std::invalid_argument);
    }
}

TEST_CASE("completeness signature: straight segments toward the boundary diverge like |log h|") {
    const Domain disk = make_fixture("disk");
    const KobayashiEstimator lower = KobayashiEstimator::band(EstimatorStrategy::band_lower, 4.0);
    double prev = 0.0;
    for (const double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
        PolylineCurve c;
        const int verts = 4097;  // fine quadrature; lengths blow up near the edge
        for (int k = 0; k < verts; ++k) {
            const double t = static_cast<double>(k) / (verts - 1);
            c.vertices.push_back(v2((1.0 - delta) * t, 0.0));
        }
        const double len = kob_length(disk, c, lower);
        const double log_h = std::abs(std::log(std::sqrt(delta)));
        CHECK(len > prev);
        prev = len;
        const double ratio = len / log_h;
        CHECK(ratio > 0.2);
        CHECK(ratio < 8.0);
    }
}

TEST_CASE("graph distances: two samples joined by one edge") {
    const Domain disk = make_fixture("disk");
    const KobayashiEstimator est = KobayashiEstimator::oracle("disk");
    const std::vector<Vec> samples = {v2(0.0, 0.0), v2(0.3, 0.1)};
    const FiniteMetricSpace ms = kob_distance_graph(disk, samples, 1, est);
    // the single edge carries the refined quadrature of the segment length
    PolylineCurve seg;
    for (int k = 0; k <= 128; ++k)
        seg.vertices.push_back(samples[0] + (k / 128.0) * (samples[1] - samples[0]));
    CHECK(ms.d(0, 1) == doctest::Approx(kob_length(disk, seg, est)).epsilon(1e-6));
}

TEST_CASE("graph distances dominate the oracle and satisfy the metric axioms") {
    const Domain disk = make_fixture("disk");
    const KobayashiEstimator est = KobayashiEstimator::oracle("disk");
    std::vector<Vec> samples = sunflower_disk(150, 0.9);
    samples.push_back(v2(0.0, 0.0));
    samples.push_back(v2(0.5, 0.0));
    const FiniteMetricSpace ms = kob_distance_graph(disk, samples, 8, est);

    const MetricAxiomReport axioms = check_metric_axioms(ms, 1e-9, 1e-9);
    CHECK(axioms.ok());

    // dominance up to the (refined) edge quadrature tolerance
    const std::size_t i0 = samples.size() - 2, i1 = samples.size() - 1;
    CHECK(ms.d(i0, i1) >= std::atanh(0.5) * (1.0 - 1e-4));
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = i + 1; j < ms.size(); ++j) {
            const double oracle = oracle_distance_ball(1, samples[i], samples[j]);
            CHECK(ms.d(i, j) >= oracle * (1.0 - 1e-4) - 1e-12);
        }
}

TEST_CASE("disconnected graphs are rejected with component sizes") {
    const Domain disk = make_fixture("disk");
    const KobayashiEstimator est = KobayashiEstimator::oracle("disk");
    const std::vector<Vec> samples = {v2(-0.8, 0.0), v2(-0.78, 0.0), v2(0.8, 0.0), v2(0.78, 0.0)};
    CHECK_THROWS_WITH_AS(kob_distance_graph(disk, samples, 1, est),
                         doctest::Contains("disconnected"), std::runtime_error);
}

TEST_CASE("band constant fit") {
    const Domain ball = make_fixture("ball2");
    SUBCASE("center-only samples need no slack") {
        Vec v = Vec::Zero(4);
        v[2] = 1.0;
        const double C = fit_band_constant(ball, {{Vec(Vec::Zero(4)), v}});
        CHECK(C == doctest::Approx(1.0));
    }
    SUBCASE("normal direction at radius 0.9 on the disk") {
        const Domain disk = make_fixture("disk");
        const double C = fit_band_constant(disk, {{v2(0.9, 0.0), v2(1.0, 0.0)}});
        const double c_star = std::sqrt(1.0 + 3.0 * 0.81);
        CHECK(C >= c_star - 1e-12);
        CHECK(C <= c_star * std::pow(2.0, 1.0 / 32.0) + 1e-12);
        // sandwich holds at the returned constant
        const MetricBand band = band_infinitesimal(disk, v2(0.9, 0.0), v2(1.0, 0.0), C);
        const double exact = 1.0 / (1.0 - 0.81);
        CHECK(band.lower <= exact);
        CHECK(exact <= band.upper);
    }
    SUBCASE("no oracle for the fixture") {
        const Domain ind = make_fixture("indexed_psh");
        Vec v = Vec::Zero(4);
        v[0] = 1.0;
        CHECK_THROWS_AS(fit_band_constant(ind, {{Vec(Vec::Zero(4)), v}}), std::invalid_argument);
    }
}
