#include "gvlab/morse.hpp"

#include "gvlab/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gvlab {

namespace {

struct NewtonResult {
    Vec x;
    double grad_norm = std::numeric_limits<double>::infinity();
    bool converged = false;
};

/// Levenberg-damped Newton for grad rho = 0, polished to machine stall so
/// near-degenerate Hessians can be classified reliably.
NewtonResult damped_newton(const Domain& dom, Vec x0) {
    const int d = dom.dim_real();
    NewtonResult res;
    Vec x = std::move(x0);
    Vec g = dom.grad_at(x);
    double mu = 1e-3;
    double best = g.norm();
    int stall = 0;
    for (int it = 0; it < 300 && stall < 8; ++it) {
        const Mat H = dom.hess_at(x);
        const double hscale = std::max(1e-12, H.cwiseAbs().maxCoeff());
        bool accepted = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            const Mat M = H + mu * hscale * Mat::Identity(d, d);
            const Vec step = M.fullPivLu().solve(-g);
            const Vec xn = x + step;
            if (!dom.box().contains(xn, 0.05 * dom.box().diagonal())) {
                mu *= 10.0;
                continue;
            }
            const Vec gn = dom.grad_at(xn);
            if (gn.norm() < g.norm()) {
                x = xn;
                g = gn;
                mu = std::max(1e-12, mu / 3.0);
                accepted = true;
                break;
            }
            mu *= 10.0;
        }
        if (!accepted) break;
        if (g.norm() > 0.999 * best)
            ++stall;
        else
            stall = 0;
        best = std::min(best, g.norm());
        if (g.norm() == 0.0) break;
    }
    res.x = x;
    res.grad_norm = g.norm();
    res.converged = true;
    return res;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const Domain& dom, int restarts,
                                                std::uint64_t seed) {
    const int d = dom.dim_real();
    const double critical_tol = 1e-8 * dom.gradient_scale();
    const double dedup_radius = 1e-4 * dom.box().diagonal();
    const CounterRng rng(seed);

    std::vector<CriticalPoint> found;
    std::uint64_t ctr = 0;
    for (int r = 0; r < restarts; ++r) {
        Vec start(d);
        for (int i = 0; i < d; ++i) start[i] = rng.uniform(ctr++, dom.box().lo[i], dom.box().hi[i]);
        const NewtonResult nr = damped_newton(dom, start);
        if (nr.grad_norm > critical_tol) continue;
        if (!dom.box().contains(nr.x)) continue;
        bool dup = false;
        for (const auto& cp : found) dup = dup || (cp.location - nr.x).norm() < dedup_radius;
        if (dup) continue;

        CriticalPoint cp;
        cp.location = nr.x;
        cp.value = dom.rho_at(nr.x);
        Eigen::SelfAdjointEigenSolver<Mat> es(dom.hess_at(nr.x));
        cp.hessian_eigenvalues = es.eigenvalues();
        const double hscale = std::max(cp.hessian_eigenvalues.cwiseAbs().maxCoeff(), 1e-12);
        cp.index = 0;
        for (int i = 0; i < d; ++i)
            if (cp.hessian_eigenvalues[i] < 0.0) ++cp.index;
        cp.nondegenerate = cp.hessian_eigenvalues.cwiseAbs().minCoeff() > 1e-6 * hscale;
        found.push_back(std::move(cp));
    }
    std::sort(found.begin(), found.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.value > b.value; });
    return found;
}

bool index_bound_check(const Domain& dom, const CriticalPoint& cp) {
    if (!cp.nondegenerate)
        throw std::invalid_argument("index_bound_check: degenerate critical point");
    return cp.index <= dom.dim_complex();
}

NormalFormFit normal_form_fit(const Domain& dom, const CriticalPoint& cp) {
    if (!cp.nondegenerate)
        throw std::invalid_argument("normal_form_fit: degenerate critical point");
    const int d = dom.dim_real();
    Eigen::SelfAdjointEigenSolver<Mat> es(dom.hess_at(cp.location));
    const Vec lambda = es.eigenvalues();
    const Mat Q = es.eigenvectors();

    NormalFormFit fit;
    std::vector<int> signs(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) signs[static_cast<std::size_t>(i)] = lambda[i] < 0.0 ? -1 : 1;
    std::sort(signs.begin(), signs.end(), std::greater<int>());
    fit.a_signs = signs;

    // model value at location + Q u, with w_k = u_k * sqrt(|lambda_k| / 2)
    const auto model = [&](const Vec& w) {
        double s = cp.value;
        for (int k = 0; k < d; ++k) s += (lambda[k] < 0.0 ? -1.0 : 1.0) * w[k] * w[k];
        return s;
    };
    const auto point_of = [&](const Vec& w) {
        Vec u(d);
        for (int k = 0; k < d; ++k) u[k] = w[k] / std::sqrt(std::abs(lambda[k]) / 2.0);
        return Vec(cp.location + Q * u);
    };

    // direction set: axes and coordinate-plane diagonals
    std::vector<Vec> dirs;
    for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e[i] = 1.0;
        dirs.push_back(e);
        dirs.push_back(-e);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Vec e = Vec::Zero(d);
            e[i] = e[j] = std::sqrt(0.5);
            dirs.push_back(e);
            e[j] = -std::sqrt(0.5);
            dirs.push_back(e);
        }

    const double r0 = 0.05 * dom.box().diagonal();
    for (int m = 0; m < 5; ++m) {
        const double r = r0 / static_cast<double>(1 << m);
        double worst = 0.0;
        for (const auto& dir : dirs) {
            const Vec w = r * dir;
            const Vec z = point_of(w);
            if (!dom.box().contains(z)) continue;
            const double resid = std::abs(dom.rho_at(z) - model(w));
            worst = std::max(worst, resid / (r * r * r));
        }
        fit.ball_trace.emplace_back(r, worst);
        fit.max_residual_ratio = std::max(fit.max_residual_ratio, worst);
    }
    return fit;
}

namespace {

struct UnionFind {
    std::vector<std::int32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n, -1) {}
    std::int32_t find(std::int32_t a) {
        while (parent[static_cast<std::size_t>(a)] >= 0) {
            const std::int32_t p = parent[static_cast<std::size_t>(a)];
            const std::int32_t gp = parent[static_cast<std::size_t>(p)] >= 0
                                        ? parent[static_cast<std::size_t>(p)]
                                        : p;
            parent[static_cast<std::size_t>(a)] = gp;
            a = p;
        }
        return a;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }
};

}  // namespace

ComponentTrace component_counts(const Domain& dom, const std::vector<double>& levels, int grid_res,
                                const Box* region, const std::vector<double>* known_critical_values) {
    if (grid_res < 2) throw std::invalid_argument("component_counts: grid_res must be >= 2");
    const Box& box = region ? *region : dom.box();
    const int d = dom.dim_real();
    if (d > 4) throw std::invalid_argument("component_counts: grids supported up to R^4");

    ComponentTrace trace;
    trace.grid_res = grid_res;

    std::size_t ncells = 1;
    for (int i = 0; i < d; ++i) ncells *= static_cast<std::size_t>(grid_res);
    Vec cell(d);
    for (int i = 0; i < d; ++i) cell[i] = (box.hi[i] - box.lo[i]) / grid_res;
    const double r_cell = 0.5 * cell.norm();

    // precompute rho and the per-cell variation estimate once; the band uses
    // the local gradient and local Hessian norm so flat regions between
    // separated sheets are not over-masked
    std::vector<float> rho_val(ncells), band_val(ncells);
    {
        Vec p(d);
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        for (std::size_t c = 0; c < ncells; ++c) {
            for (int i = 0; i < d; ++i)
                p[i] = box.lo[i] + (idx[static_cast<std::size_t>(i)] + 0.5) * cell[i];
            rho_val[c] = static_cast<float>(dom.rho_at(p));
            const double gn = dom.grad_at(p).norm();
            const double hn = dom.hess_at(p).cwiseAbs().rowwise().sum().maxCoeff();
            band_val[c] = static_cast<float>(gn * r_cell + 0.5 * hn * r_cell * r_cell);
            int k = 0;
            while (k < d && ++idx[static_cast<std::size_t>(k)] == grid_res) {
                idx[static_cast<std::size_t>(k)] = 0;
                ++k;
            }
        }
    }

    std::vector<std::size_t> stride(static_cast<std::size_t>(d));
    stride[0] = 1;
    for (int i = 1; i < d; ++i)
        stride[static_cast<std::size_t>(i)] =
            stride[static_cast<std::size_t>(i - 1)] * static_cast<std::size_t>(grid_res);

    for (double t : levels) {
        std::vector<bool> mask(ncells);
        for (std::size_t c = 0; c < ncells; ++c)
            mask[c] = std::abs(rho_val[c] + t) <= band_val[c];

        UnionFind uf(ncells);
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        for (std::size_t c = 0; c < ncells; ++c) {
            if (mask[c]) {
                for (int i = 0; i < d; ++i) {
                    if (idx[static_cast<std::size_t>(i)] == 0) continue;
                    const std::size_t nb = c - stride[static_cast<std::size_t>(i)];
                    if (mask[nb]) uf.unite(static_cast<std::int32_t>(c), static_cast<std::int32_t>(nb));
                }
            }
            int k = 0;
            while (k < d && ++idx[static_cast<std::size_t>(k)] == grid_res) {
                idx[static_cast<std::size_t>(k)] = 0;
                ++k;
            }
        }
        int count = 0;
        for (std::size_t c = 0; c < ncells; ++c)
            if (mask[c] && uf.parent[c] < 0) ++count;
        trace.levels.push_back(t);
        trace.counts.push_back(count);
    }

    if (known_critical_values && known_critical_values->size() > 1) {
        double rho_min = rho_val[0], rho_max = rho_val[0];
        for (const float v : rho_val) {
            rho_min = std::min(rho_min, static_cast<double>(v));
            rho_max = std::max(rho_max, static_cast<double>(v));
        }
        const double resolvable = (rho_max - rho_min) / grid_res;
        auto vals = *known_critical_values;
        std::sort(vals.begin(), vals.end());
        for (std::size_t i = 0; i + 1 < vals.size(); ++i)
            if (vals[i + 1] - vals[i] < resolvable)
                trace.warnings.push_back("grid too coarse to separate critical values " +
                                         std::to_string(vals[i]) + " and " +
                                         std::to_string(vals[i + 1]));
    }
    return trace;
}

ConnectednessVerdict boundary_connectedness(const Domain& dom, int grid_res) {
    ConnectednessVerdict verdict;
    verdict.certificate = check_strict_psh(dom, 7);
    if (verdict.certificate.min_eigenvalue <= 0.0) {
        verdict.refused = true;
        verdict.refusal_reason =
            "strict plurisubharmonicity certificate failed (min Levi eigenvalue " +
            std::to_string(verdict.certificate.min_eigenvalue) + ")";
    }

    // level-0 component count
    const ComponentTrace at_zero = component_counts(dom, {0.0}, grid_res);
    verdict.components = at_zero.counts.front();
    verdict.connected = !verdict.refused && verdict.components == 1;

    // replay the level walk from the boundary down toward the minimum,
    // stopping at a margin the grid can still resolve
    double rho_min = 0.0;
    {
        const int probe = 9;
        std::vector<int> idx(static_cast<std::size_t>(dom.dim_real()), 0);
        Vec p(dom.dim_real());
        const int d = dom.dim_real();
        std::size_t total = 1;
        for (int i = 0; i < d; ++i) total *= probe;
        for (std::size_t c = 0; c < total; ++c) {
            for (int i = 0; i < d; ++i)
                p[i] = dom.box().lo[i] +
                       (idx[static_cast<std::size_t>(i)] + 0.5) * (dom.box().hi[i] - dom.box().lo[i]) / probe;
            rho_min = std::min(rho_min, dom.rho_at(p));
            int k = 0;
            while (k < d && ++idx[static_cast<std::size_t>(k)] == probe) {
                idx[static_cast<std::size_t>(k)] = 0;
                ++k;
            }
        }
    }
    std::vector<double> walk;
    const int kLevels = 9;
    for (int i = 0; i <= kLevels; ++i) walk.push_back(-rho_min * 0.85 * i / kLevels);
    verdict.trace = component_counts(dom, walk, grid_res);
    return verdict;
}

}  // namespace gvlab
