#include "gvlab/checks.hpp"

#include "gvlab/carnot.hpp"
#include "gvlab/collar_metrics.hpp"
#include "gvlab/fixtures.hpp"
#include "gvlab/kobayashi.hpp"
#include "gvlab/morse.hpp"
#include "gvlab/rng.hpp"
#include "gvlab/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace gvlab::checks {

namespace {

FiniteMetricSpace euclidean_space(const std::vector<Vec>& pts) {
    const std::size_t n = pts.size();
    Mat d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (pts[i] - pts[j]).norm();
    return FiniteMetricSpace::from_matrix(std::move(d));
}

Vec disk_point(double radius, double angle) {
    Vec p(2);
    p << radius * std::cos(angle), radius * std::sin(angle);
    return p;
}

constexpr double kGolden = 2.3999632297286533;

}  // namespace

// ---------------------------------------------------------------------------

CheckResult metric_core_exact() {
    CheckResult r;
    r.name = "metric_core_exact";
    r.note = "tree delta = 0 exactly; unit square delta = sqrt(2)-1 to 1e-12; "
             "(A,2A) -> (2,0); (A,A+1) -> rough c = 1";

    // star tree with unit edges
    Mat tree(5, 5);
    tree.setZero();
    for (int leaf = 1; leaf < 5; ++leaf) {
        tree(0, leaf) = tree(leaf, 0) = 1.0;
        for (int other = 1; other < 5; ++other)
            if (other != leaf) tree(leaf, other) = 2.0;
    }
    const DeltaReport tree_report =
        delta_four_point(FiniteMetricSpace::from_matrix(tree), DeltaMode::exhaustive, 0);
    r.values["tree_delta"] = tree_report.delta;

    // unit square corners
    std::vector<Vec> corners = {disk_point(0, 0), disk_point(1, 0)};
    {
        Vec c(2), d(2);
        c << 1.0, 1.0;
        d << 0.0, 1.0;
        corners.push_back(c);
        corners.push_back(d);
    }
    const DeltaReport square_report =
        delta_four_point(euclidean_space(corners), DeltaMode::exhaustive, 0);
    const double square_expected = std::sqrt(2.0) - 1.0;
    r.values["square_delta"] = square_report.delta;
    r.values["square_err"] = std::abs(square_report.delta - square_expected);

    // distortion fits on a small Euclidean space
    const FiniteMetricSpace A = euclidean_space(sunflower_disk(6, 1.0));
    Mat twice = 2.0 * A.dist;
    const DistortionFit scaled =
        fit_distortion(A, FiniteMetricSpace::from_matrix(std::move(twice)), DistortionKind::quasi);
    Mat shifted = A.dist;
    for (Eigen::Index i = 0; i < shifted.rows(); ++i)
        for (Eigen::Index j = 0; j < shifted.cols(); ++j)
            if (i != j) shifted(i, j) += 1.0;
    const DistortionFit rough =
        fit_distortion(A, FiniteMetricSpace::from_matrix(std::move(shifted)), DistortionKind::rough);
    r.values["scaled_lambda"] = scaled.lambda;
    r.values["scaled_c"] = scaled.c;
    r.values["shift_c"] = rough.c;

    r.passed = tree_report.delta == 0.0 && r.values["square_err"] <= 1e-12 &&
               std::abs(scaled.lambda - 2.0) <= 1e-12 && scaled.c <= 1e-12 &&
               std::abs(rough.c - 1.0) <= 1e-12 && scaled.violation_fraction == 0.0;
    return r;
}

// ---------------------------------------------------------------------------

CheckResult kobayashi_oracle_agreement() {
    CheckResult r;
    r.name = "kobayashi_oracle_agreement";
    r.note = "graph estimate of d(0, 0.5) on the disk within 5% at 500 samples "
             "(k = 8); refining to 2000 samples with the log neighbor schedule "
             "reduces the error";

    const Domain disk = make_fixture("disk");
    const KobayashiEstimator est = KobayashiEstimator::oracle("disk");
    const double expected = std::atanh(0.5);

    const auto run = [&](int count) {
        std::vector<Vec> samples = sunflower_disk(count, 0.95);
        samples.push_back(disk_point(0.0, 0.0));
        samples.push_back(disk_point(0.5, 0.0));
        const FiniteMetricSpace ms =
            kob_distance_graph(disk, samples, graph_k_schedule(count), est);
        return ms.d(samples.size() - 2, samples.size() - 1);
    };

    const double d500 = run(500);
    const double d2000 = run(2000);
    r.values["d_500"] = d500;
    r.values["d_2000"] = d2000;
    r.values["expected"] = expected;
    const double err500 = std::abs(d500 - expected) / expected;
    const double err2000 = std::abs(d2000 - expected) / expected;
    r.values["rel_err_500"] = err500;
    r.values["rel_err_2000"] = err2000;
    r.passed = err500 <= 0.05 && err2000 <= err500 + 1e-12;
    return r;
}

// ---------------------------------------------------------------------------

CheckResult band_sandwich(const std::string& fixture, std::uint64_t seed) {
    CheckResult r;
    r.name = "band_sandwich_" + fixture;
    r.note = "fitted band constant C <= 10 with the exact metric inside [B/C, C*B] "
             "at 200 samples down to delta = 1e-3";

    const Domain dom = make_fixture(fixture);
    const int n = dom.dim_complex();
    const CounterRng rng(seed);

    std::vector<std::pair<Vec, Vec>> samples;
    const std::vector<Vec> dirs = n == 1 ? std::vector<Vec>{} : sphere3_samples(200, seed + 1);
    std::uint64_t ctr = 0;
    for (int i = 0; i < 200; ++i) {
        const double delta = 0.5 * std::pow(1e-3 / 0.5, i / 199.0);
        Vec p;
        if (n == 1) {
            p = disk_point(1.0 - delta, kGolden * i);
        } else {
            p = (1.0 - delta) * dirs[static_cast<std::size_t>(i)];
        }
        Vec v(2 * n);
        switch (i % 3) {
            case 0:  // outward radial
                v = p.normalized();
                break;
            case 1: {  // a tangential direction (rotate by J)
                Vec jn = AlmostComplexStructure::standard(n)(p) * p;
                v = jn.normalized();
                break;
            }
            default:
                for (int c = 0; c < 2 * n; ++c) v[c] = rng.normal(ctr++);
                v.normalize();
        }
        samples.emplace_back(std::move(p), std::move(v));
    }

    const double C = fit_band_constant(dom, samples);
    r.values["C"] = C;

    // explicit sandwich post-check at the fitted constant
    double worst = 0.0;
    for (const auto& [p, v] : samples) {
        const MetricBand band = band_infinitesimal(dom, p, v, C);
        const double k = oracle_metric_ball(n, p, v);
        worst = std::max({worst, band.lower - k, k - band.upper});
    }
    r.values["sandwich_excess"] = worst;
    r.passed = C <= 10.0 && worst <= 1e-9;
    return r;
}

// ---------------------------------------------------------------------------

CheckResult length_estimates_disk(std::uint64_t seed) {
    CheckResult r;
    r.name = "length_estimates_disk";
    r.note = "two-sided log-height bounds over 100 normal and 100 horizontal collar "
             "curves with zero violations; fitted C1 <= 4";

    const Domain disk = make_fixture("disk");
    const double eps = disk.collar_eps();
    const KobayashiEstimator est = KobayashiEstimator::oracle("disk");
    const CounterRng rng(seed);

    std::vector<CollarCurve> curves;
    const int kVerts = 65;
    std::uint64_t ctr = 0;
    for (int i = 0; i < 100; ++i) {  // normal curves: fiber segments
        const double angle = kGolden * i;
        const double d0 = rng.uniform(ctr++, 1e-3, 0.95 * eps);
        double d1 = rng.uniform(ctr++, 1e-3, 0.95 * eps);
        if (std::abs(d1 - d0) < 1e-4) d1 = std::min(0.95 * eps, d1 + 5e-3);
        PolylineCurve c;
        for (int k = 0; k < kVerts; ++k) {
            const double t = static_cast<double>(k) / (kVerts - 1);
            const double delta = d0 * std::pow(d1 / d0, t);
            c.vertices.push_back(disk_point(1.0 - delta, angle));
        }
        curves.push_back({std::move(c), /*normal=*/true});
    }
    for (int i = 0; i < 100; ++i) {  // horizontal curves: fixed-height arcs
        const double delta = rng.uniform(ctr++, 1e-3, 0.95 * eps);
        const double a0 = kGolden * (i + 37);
        const double span = rng.uniform(ctr++, 0.2, 1.2);
        PolylineCurve c;
        for (int k = 0; k < kVerts; ++k) {
            const double t = static_cast<double>(k) / (kVerts - 1);
            c.vertices.push_back(disk_point(1.0 - delta, a0 + span * t));
        }
        curves.push_back({std::move(c), /*normal=*/false});
    }

    const LengthEstimateReport rep = verify_length_estimates(disk, curves, est);
    r.values["C1"] = rep.C1;
    r.values["C2"] = rep.C2;
    r.values["violations"] = static_cast<double>(rep.violations_at_fit);
    r.passed = rep.violations_at_fit == 0 && rep.C1 <= 4.0;
    return r;
}

// ---------------------------------------------------------------------------

CheckResult gromov_delta_g_disk(std::uint64_t seed) {
    (void)seed;  // sampling is the deterministic spiral
    CheckResult r;
    r.name = "gromov_delta_g_disk";
    r.note = "four-point delta of the g matrix <= 2.0 and stable (+20%) under sample "
             "doubling; Euclidean control delta grows >= 1.8x with diameter";

    const Domain disk = make_fixture("disk");
    const BoundaryDistance bdist(disk);

    std::vector<Vec> s100 = sunflower_disk(100, 0.95);
    std::vector<Vec> s200 = s100;
    for (auto& p : sunflower_disk(100, 0.95, 1.0)) s200.push_back(p);

    const DeltaReport d100 = verify_gromov_inequality_g(disk, s100, bdist);
    const DeltaReport d200 = verify_gromov_inequality_g(disk, s200, bdist);
    r.values["delta_100"] = d100.delta;
    r.values["delta_200"] = d200.delta;

    const DeltaReport e1 =
        delta_four_point(euclidean_space(square_grid(10, 1.0)), DeltaMode::exhaustive, 0);
    const DeltaReport e2 =
        delta_four_point(euclidean_space(square_grid(10, 2.0)), DeltaMode::exhaustive, 0);
    const double growth = e2.delta / e1.delta;
    r.values["euclid_delta_L1"] = e1.delta;
    r.values["euclid_delta_L2"] = e2.delta;
    r.values["euclid_growth"] = growth;

    r.passed = d100.delta <= 2.0 && d200.delta <= 1.2 * d100.delta + 1e-12 &&
               d200.delta >= d100.delta - 1e-12 && growth >= 1.8;
    return r;
}

// ---------------------------------------------------------------------------

CheckResult qi_kobayashi_vs_g_disk(std::uint64_t seed) {
    (void)seed;
    CheckResult r;
    r.name = "qi_kobayashi_vs_g_disk";
    r.note = "quasi-isometry fit between the graph metric and g on 80 shared samples: "
             "lambda <= 8, zero violations; graph delta stable under refinement";

    const Domain disk = make_fixture("disk");
    const BoundaryDistance bdist(disk);
    const KobayashiEstimator est = KobayashiEstimator::oracle("disk");

    const std::vector<Vec> s80 = sunflower_disk(80, 0.93);
    const FiniteMetricSpace kob80 = kob_distance_graph(disk, s80, 8, est);
    const FiniteMetricSpace g80 = g_metric_matrix(disk, s80, bdist);

    const DistortionFit fit = fit_distortion(kob80, g80, DistortionKind::quasi);
    r.values["lambda"] = fit.lambda;
    r.values["c"] = fit.c;
    r.values["violation_fraction"] = fit.violation_fraction;

    std::vector<Vec> s160 = s80;
    for (auto& p : sunflower_disk(80, 0.93, 1.0)) s160.push_back(p);
    const double delta80 = delta_four_point(kob80, DeltaMode::exhaustive, 0).delta;
    const double delta160 =
        delta_four_point(kob_distance_graph(disk, s160, 8, est), DeltaMode::exhaustive, 0).delta;
    r.values["kob_delta_80"] = delta80;
    r.values["kob_delta_160"] = delta160;

    r.passed = fit.lambda <= 8.0 && fit.violation_fraction == 0.0 && std::isfinite(delta80) &&
               delta160 <= 1.2 * delta80 + 0.05;
    return r;
}

// ---------------------------------------------------------------------------

CheckResult rough_g_vs_d_disk(std::uint64_t seed) {
    (void)seed;
    CheckResult r;
    r.name = "rough_g_vs_d_disk";
    r.note = "rough-isometry constant between g and d on 60 collar samples: c <= 3";

    const Domain disk = make_fixture("disk");
    const double eps = disk.collar_eps();
    const BoundaryDistance bdist(disk);
    const CollarDModel model(disk);

    std::vector<Vec> samples;
    for (int i = 0; i < 60; ++i) {
        const double delta = 2e-3 * std::pow(0.98 * eps / 2e-3, i / 59.0);
        samples.push_back(disk_point(1.0 - delta, kGolden * i));
    }
    const FiniteMetricSpace g = g_metric_matrix(disk, samples, bdist);
    Mat dmat(60, 60);
    dmat.setZero();
    for (int i = 0; i < 60; ++i)
        for (int j = i + 1; j < 60; ++j) {
            const double v = model.d_metric(samples[static_cast<std::size_t>(i)],
                                            samples[static_cast<std::size_t>(j)]);
            dmat(i, j) = dmat(j, i) = v;
        }
    const DistortionFit fit =
        fit_distortion(g, FiniteMetricSpace::from_matrix(std::move(dmat)), DistortionKind::rough);
    r.values["c"] = fit.c;
    r.values["violation_fraction"] = fit.violation_fraction;
    r.passed = fit.c <= 3.0 && fit.violation_fraction == 0.0;
    return r;
}

// ---------------------------------------------------------------------------

CheckResult morse_suite(std::uint64_t seed) {
    CheckResult r;
    r.name = "morse_suite";
    r.note = "ball: one index-0 critical point, connected verdict; indexed fixture: "
             "index-1 point, component count jumps 1 -> 2; two-sphere control refused "
             "with 2 components; counts stable under grid doubling";

    bool ok = true;

    {  // ball
        const Domain ball = make_fixture("ball2");
        const auto cps = find_critical_points(ball, 64, seed);
        r.values["ball_critical_points"] = static_cast<double>(cps.size());
        ok = ok && cps.size() == 1;
        if (!cps.empty()) {
            r.values["ball_index"] = cps.front().index;
            r.values["ball_value"] = cps.front().value;
            ok = ok && cps.front().index == 0 && std::abs(cps.front().value + 1.0) <= 1e-6 &&
                 cps.front().nondegenerate && index_bound_check(ball, cps.front());
        }
        const ConnectednessVerdict verdict = boundary_connectedness(ball, 24);
        r.values["ball_components"] = verdict.components;
        ok = ok && !verdict.refused && verdict.connected && verdict.components == 1 &&
             verdict.trace.counts.back() == 1;
    }

    {  // indexed fixture
        const Domain ind = make_fixture("indexed_psh");
        const auto cps = find_critical_points(ind, 64, seed + 1);
        r.values["indexed_critical_points"] = static_cast<double>(cps.size());
        ok = ok && cps.size() == 1;
        if (!cps.empty()) {
            const CriticalPoint& cp = cps.front();
            r.values["indexed_index"] = cp.index;
            ok = ok && cp.index == 1 && cp.nondegenerate && index_bound_check(ind, cp);
            // real-coordinate Hessian spectrum {-2, 2, 2, 6}
            Vec expect(4);
            expect << -2.0, 2.0, 2.0, 6.0;
            ok = ok && (cp.hessian_eigenvalues - expect).cwiseAbs().maxCoeff() <= 1e-6;
        }
        const Box local = Box::cube(4, -0.6, 0.6);
        const ComponentTrace t24 = component_counts(ind, {0.9, 1.1}, 24, &local);
        const ComponentTrace t48 = component_counts(ind, {0.9, 1.1}, 48, &local);
        r.values["indexed_above"] = t24.counts[0];
        r.values["indexed_below"] = t24.counts[1];
        ok = ok && t24.counts[0] == 1 && t24.counts[1] == 2 && t48.counts[0] == 1 &&
             t48.counts[1] == 2;
    }

    {  // non-psh two-sphere control
        const Domain control = make_fixture("two_spheres");
        const ConnectednessVerdict verdict = boundary_connectedness(control, 24);
        r.values["control_components"] = verdict.components;
        r.values["control_min_levi_eig"] = verdict.certificate.min_eigenvalue;
        ok = ok && verdict.refused && verdict.certificate.min_eigenvalue < 0.0 &&
             verdict.components == 2;
        const ComponentTrace t48 = component_counts(control, {0.0}, 48);
        ok = ok && t48.counts[0] == 2;
    }

    r.passed = ok;
    return r;
}

// ---------------------------------------------------------------------------

S3ChordOracle::S3ChordOracle(int samples, int k_neighbors, double residual_cut, std::uint64_t seed)
    : pts_(sphere3_samples(samples, seed)), graph_(static_cast<std::size_t>(samples)),
      k_(k_neighbors), cut_(residual_cut) {
    const std::size_t n = pts_.size();
    const auto hopf = [](const Vec& m) {  // J m in the (x, y) block layout
        Vec jm(4);
        jm << -m[2], -m[3], m[0], m[1];
        return jm;
    };
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < n; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) cand.emplace_back(-pts_[i].dot(pts_[j]), j);  // closer = larger dot
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), cand.size());
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
        for (std::size_t t = 0; t < k; ++t) {
            const std::size_t j = cand[t].second;
            if (j < i) continue;  // add each undirected edge once
            const Vec chord = pts_[j] - pts_[i];
            Vec mid = pts_[i] + pts_[j];
            mid /= mid.norm();
            const double resid = std::abs(chord.dot(hopf(mid))) / chord.norm();
            if (resid > cut_) continue;
            const double arc = std::acos(std::clamp(pts_[i].dot(pts_[j]), -1.0, 1.0));
            graph_.add_edge(i, j, 2.0 * arc);  // sqrt of the Levi form is 2 on the sphere
        }
    }
}

std::vector<std::size_t> S3ChordOracle::near_horizontal_neighbors(const std::vector<Vec>& pts,
                                                                  const Vec& from) const {
    const auto hopf = [](const Vec& m) {
        Vec jm(4);
        jm << -m[2], -m[3], m[0], m[1];
        return jm;
    };
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t j = 0; j < pts.size(); ++j) cand.emplace_back(-from.dot(pts[j]), j);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    std::vector<std::size_t> picked;
    std::vector<std::pair<double, std::size_t>> fallback;
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t j = cand[t].second;
        const Vec chord = pts[j] - from;
        if (chord.norm() < 1e-12) continue;
        Vec mid = from + pts[j];
        mid /= mid.norm();
        const double resid = std::abs(chord.dot(hopf(mid))) / chord.norm();
        if (resid <= cut_)
            picked.push_back(j);
        else
            fallback.emplace_back(resid, j);
    }
    std::sort(fallback.begin(), fallback.end());
    for (std::size_t t = 0; picked.size() < 4 && t < fallback.size(); ++t)
        picked.push_back(fallback[t].second);
    return picked;
}

double S3ChordOracle::distance(const Vec& a, const Vec& b) const {
    const std::size_t n = pts_.size();
    WeightedGraph g = graph_;
    g.adj.resize(n + 2);
    const auto attach = [&](const Vec& q, std::size_t index) {
        for (const std::size_t j : near_horizontal_neighbors(pts_, q)) {
            const double arc = std::acos(std::clamp(q.dot(pts_[j]), -1.0, 1.0));
            g.add_edge(index, j, 2.0 * arc);
        }
    };
    attach(a, n);
    attach(b, n + 1);
    const std::vector<double> dist = dijkstra(g, n);
    return dist[n + 1];
}

CheckResult cc_oracle_s3(std::uint64_t seed) {
    CheckResult r;
    r.name = "cc_oracle_s3";
    r.note = "constrained-path solver vs brute-force chord oracle on S^3 within 5% on "
             "10 pairs; symmetry within 2 solver tolerances; unitary-rotated pairs "
             "within 2%";

    const Domain ball = make_fixture("ball2");
    const S3ChordOracle oracle(6144, 160, 0.12, 20240501u);
    const Mat U = real_unitary(2, 77);

    const CounterRng rng(seed);
    std::uint64_t ctr = 0;
    double max_rel = 0.0, max_sym = 0.0, max_rot = 0.0;
    bool ok = true;
    for (int pair = 0; pair < 10; ++pair) {
        Vec a(4), b(4);
        for (;;) {
            for (int c = 0; c < 4; ++c) a[c] = rng.normal(ctr++);
            for (int c = 0; c < 4; ++c) b[c] = rng.normal(ctr++);
            a /= a.norm();
            b /= b.norm();
            const double gap = (a - b).norm();
            if (gap > 0.5 && gap < 1.9) break;
        }
        CCOptions opts;
        opts.seed = seed + 1000 + static_cast<std::uint64_t>(pair);
        const CCDistanceResult fwd = cc_distance(ball, a, b, opts);
        const CCDistanceResult rev = cc_distance(ball, b, a, opts);
        const CCDistanceResult rot = cc_distance(ball, Vec(U * a), Vec(U * b), opts);
        const double dp = oracle.distance(a, b);

        const double rel = std::abs(fwd.value - dp) / dp;
        const double sym = std::abs(fwd.value - rev.value);
        const double rotgap = std::abs(fwd.value - rot.value) / fwd.value;
        max_rel = std::max(max_rel, rel);
        max_sym = std::max(max_sym, sym);
        max_rot = std::max(max_rot, rotgap);
        ok = ok && rel <= 0.05 && sym <= 2.0 * fwd.solver_tol && rotgap <= 0.02;
    }
    r.values["max_rel_err_vs_oracle"] = max_rel;
    r.values["max_symmetry_gap"] = max_sym;
    r.values["max_rotation_gap"] = max_rot;
    r.passed = ok;
    return r;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_all(const std::string& fixture, std::uint64_t seed) {
    std::vector<CheckResult> out;
    out.push_back(metric_core_exact());
    if (fixture == "disk") {
        out.push_back(kobayashi_oracle_agreement());
        out.push_back(band_sandwich("disk", seed));
        out.push_back(length_estimates_disk(seed));
        out.push_back(gromov_delta_g_disk(seed));
        out.push_back(qi_kobayashi_vs_g_disk(seed));
        out.push_back(rough_g_vs_d_disk(seed));
    } else if (fixture == "ball2") {
        out.push_back(band_sandwich("ball2", seed));
        out.push_back(morse_suite(seed));
        out.push_back(cc_oracle_s3(seed));
    } else {
        out.push_back(morse_suite(seed));
    }
    return out;
}

}  // namespace gvlab::checks
