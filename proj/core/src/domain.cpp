#include "gvlab/domain.hpp"

#include "gvlab/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace gvlab {

// ---------------------------------------------------------------------------
// DefiningFunction
// ---------------------------------------------------------------------------

DefiningFunction::DefiningFunction(int dim_complex, EvalFn eval, GradFn grad, HessFn hess,
                                   double fd_step)
    : n_(dim_complex),
      eval_(std::move(eval)),
      grad_(std::move(grad)),
      hess_(std::move(hess)),
      fd_step_(fd_step) {
    if (n_ < 1) throw std::invalid_argument("DefiningFunction: dim_complex must be >= 1");
    if (!eval_) throw std::invalid_argument("DefiningFunction: eval required");
    if (fd_step_ <= 0.0) throw std::invalid_argument("DefiningFunction: fd_step must be > 0");
}

Vec DefiningFunction::gradient(const Vec& p) const {
    if (grad_) return grad_(p);
    return fd_gradient(p);
}

Mat DefiningFunction::hessian(const Vec& p) const {
    if (hess_) {
        Mat h = hess_(p);
        return 0.5 * (h + h.transpose());
    }
    return fd_hessian(p);
}

Vec DefiningFunction::fd_gradient(const Vec& p, double step) const {
    const double h = step > 0.0 ? step : fd_step_;
    const int d = dim_real();
    Vec g(d);
    Vec q = p;
    for (int i = 0; i < d; ++i) {
        const double pi = p[i];
        q[i] = pi + h;
        const double fp = eval_(q);
        q[i] = pi - h;
        const double fm = eval_(q);
        q[i] = pi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Mat DefiningFunction::fd_hessian(const Vec& p, double step) const {
    const double h = step > 0.0 ? step : fd_step_;
    const int d = dim_real();
    Mat H(d, d);
    if (grad_) {
        // central differences of the analytic gradient
        Vec q = p;
        for (int i = 0; i < d; ++i) {
            const double pi = p[i];
            q[i] = pi + h;
            const Vec gp = grad_(q);
            q[i] = pi - h;
            const Vec gm = grad_(q);
            q[i] = pi;
            H.col(i) = (gp - gm) / (2.0 * h);
        }
    } else {
        const double f0 = eval_(p);
        Vec q = p;
        for (int i = 0; i < d; ++i) {
            const double pi = p[i];
            q[i] = pi + h;
            const double fp = eval_(q);
            q[i] = pi - h;
            const double fm = eval_(q);
            q[i] = pi;
            H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        }
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const double pi = p[i], pj = p[j];
                q[i] = pi + h; q[j] = pj + h;
                const double fpp = eval_(q);
                q[j] = pj - h;
                const double fpm = eval_(q);
                q[i] = pi - h; q[j] = pj + h;
                const double fmp = eval_(q);
                q[j] = pj - h;
                const double fmm = eval_(q);
                q[i] = pi; q[j] = pj;
                H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            }
    }
    return 0.5 * (H + H.transpose());
}

// ---------------------------------------------------------------------------
// AlmostComplexStructure
// ---------------------------------------------------------------------------

AlmostComplexStructure AlmostComplexStructure::standard(int dim_complex) {
    const int d = 2 * dim_complex;
    Mat J = Mat::Zero(d, d);
    for (int k = 0; k < dim_complex; ++k) {
        J(dim_complex + k, k) = 1.0;   // J dx_k = dy_k
        J(k, dim_complex + k) = -1.0;  // J dy_k = -dx_k
    }
    AlmostComplexStructure acs(dim_complex, [J](const Vec&) { return J; }, /*constant=*/true);
    acs.standard_ = true;
    return acs;
}

AlmostComplexStructure::AlmostComplexStructure(int dim_complex, Field field, bool constant,
                                               bool audit_every_eval)
    : n_(dim_complex), field_(std::move(field)), constant_(constant),
      audit_every_eval_(audit_every_eval) {
    if (n_ < 1) throw std::invalid_argument("AlmostComplexStructure: dim_complex must be >= 1");
    if (!field_) throw std::invalid_argument("AlmostComplexStructure: matrix field required");
}

Mat AlmostComplexStructure::operator()(const Vec& p) const {
    if (audit_every_eval_) audit_at(p);
    return field_(p);
}

void AlmostComplexStructure::audit_at(const Vec& p) const {
    const Mat J = field_(p);
    const int d = dim_real();
    if (J.rows() != d || J.cols() != d)
        throw std::runtime_error("AlmostComplexStructure: field has wrong shape");
    const double err = (J * J + Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > 1e-10)
        throw std::runtime_error("AlmostComplexStructure: J(p)^2 deviates from -I by " +
                                 std::to_string(err));
}

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

Domain::Domain(DefiningFunction rho, AlmostComplexStructure J, Box box, Vec witness, DomainOptions opts,
               std::string name, bool region_type)
    : rho_(std::move(rho)),
      J_(std::move(J)),
      box_(std::move(box)),
      witness_(std::move(witness)),
      boundary_tol_(opts.boundary_tol),
      projection_tol_(opts.projection_tol),
      collar_eps_(opts.collar_eps),
      name_(std::move(name)),
      region_type_(region_type) {
    if (rho_.dim_complex() != J_.dim_complex())
        throw std::invalid_argument("Domain: rho and J dimensions differ");
    if (box_.dim() != rho_.dim_real())
        throw std::invalid_argument("Domain: box dimension mismatch");
    if (witness_.size() != rho_.dim_real())
        throw std::invalid_argument("Domain: witness dimension mismatch");
    if (!box_.contains(witness_))
        throw std::invalid_argument("Domain: witness outside box");
    if (!(rho_(witness_) < 0.0))
        throw std::invalid_argument("Domain: witness is not interior ({rho < 0} certificate)");

    if (opts.fd_step > 0.0)
        rho_.set_fd_step(opts.fd_step);
    else
        rho_.set_fd_step(1e-4 * box_.diagonal());

    // J audit and scale estimates on deterministic sample points
    const CounterRng rng(0x9d0dull);
    const int d = dim_real();
    std::uint64_t ctr = 0;
    double gs = 0.0, hs = 0.0;
    for (int s = 0; s < 2 * d + 3; ++s) {
        Vec p(d);
        for (int i = 0; i < d; ++i) p[i] = rng.uniform(ctr++, box_.lo[i], box_.hi[i]);
        J_.audit_at(p);
        gs = std::max(gs, rho_.gradient(p).norm());
        Eigen::SelfAdjointEigenSolver<Mat> es(rho_.hessian(p));
        hs = std::max(hs, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    grad_scale_ = std::max(gs, 1e-12);
    hess_scale_ = std::max(hs, 1e-12);

    // nondegenerate boundary spot check: grad must not vanish where |rho| is small
    for (int s = 0; s < 4 * d; ++s) {
        Vec p(d);
        for (int i = 0; i < d; ++i) p[i] = rng.uniform(ctr++, box_.lo[i], box_.hi[i]);
        if (std::abs(rho_(p)) < 1e-3 * grad_scale_ && rho_.gradient(p).norm() < 1e-8 * grad_scale_)
            throw std::invalid_argument("Domain: gradient vanishes near {rho = 0}");
    }
}

double Domain::collar_eps() const {
    if (collar_eps_ > 0.0) return collar_eps_;
    collar_eps_ = 0.1 * boundary_project(*this, witness_).delta;
    return collar_eps_;
}

// ---------------------------------------------------------------------------
// Levi form machinery
// ---------------------------------------------------------------------------

double dc_rho(const Domain& dom, const Vec& p, const Vec& v) {
    if (!dom.box().contains(p, 1e-12 * dom.box().diagonal()))
        throw std::invalid_argument("dc_rho: point outside box");
    return -dom.grad_at(p).dot(dom.J()(p) * v);
}

Mat dcrho_exterior_derivative(const Domain& dom, const Vec& p, double step) {
    if (!dom.box().contains(p, 1e-12 * dom.box().diagonal()))
        throw std::invalid_argument("levi_form: point outside box");
    const int d = dom.dim_real();
    if (dom.J().is_constant()) {
        // alpha(q) = -J^T grad rho(q); d alpha matrix = J^T H - H J
        const Mat J = dom.J()(p);
        Mat H = dom.hess_at(p);
        if (step > 0.0) H = dom.rho().fd_hessian(p, step);
        return J.transpose() * H - H * J;
    }
    // central differences of alpha_j(q) = -(J(q)^T grad rho(q))_j over each
    // coordinate direction; A = M - M^T antisymmetrizes the quotient
    const double h = step > 0.0 ? step : dom.rho().fd_step();
    Mat M(d, d);
    Vec q = p;
    for (int i = 0; i < d; ++i) {
        const double pi = p[i];
        q[i] = pi + h;
        const Vec ap = -(dom.J()(q).transpose() * dom.grad_at(q));
        q[i] = pi - h;
        const Vec am = -(dom.J()(q).transpose() * dom.grad_at(q));
        q[i] = pi;
        M.row(i) = ((ap - am) / (2.0 * h)).transpose();
    }
    return M - M.transpose();
}

Mat levi_matrix(const Domain& dom, const Vec& p, double step) {
    const Mat A = dcrho_exterior_derivative(dom, p, step);
    const Mat AJ = A * dom.J()(p);
    return 0.5 * (AJ + AJ.transpose());
}

double levi_form(const Domain& dom, const Vec& p, const Vec& v) {
    const Mat A = dcrho_exterior_derivative(dom, p);
    return v.dot(A * (dom.J()(p) * v));
}

PshCertificate check_strict_psh(const Domain& dom, const Box& region, int grid_res) {
    if (grid_res < 1) throw std::invalid_argument("check_strict_psh: grid_res must be >= 1");
    const int d = dom.dim_real();
    PshCertificate cert;
    cert.min_eigenvalue = std::numeric_limits<double>::infinity();
    cert.worst_point = region.center();

    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    Vec p(d);
    for (;;) {
        for (int i = 0; i < d; ++i) {
            const double t = grid_res == 1 ? 0.5
                                           : static_cast<double>(idx[static_cast<std::size_t>(i)]) /
                                                 (grid_res - 1);
            p[i] = region.lo[i] + t * (region.hi[i] - region.lo[i]);
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(levi_matrix(dom, p));
        const double mu = es.eigenvalues().minCoeff();
        if (mu < cert.min_eigenvalue) {
            cert.min_eigenvalue = mu;
            cert.worst_point = p;
        }
        int k = 0;
        while (k < d && ++idx[static_cast<std::size_t>(k)] == grid_res) {
            idx[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == d) break;
    }
    return cert;
}

PshCertificate check_strict_psh(const Domain& dom, int grid_res) {
    return check_strict_psh(dom, dom.box(), grid_res);
}

// ---------------------------------------------------------------------------
// Boundary projection
// ---------------------------------------------------------------------------

namespace {

/// First-order root steps along the gradient until |rho| <= tol.
/// Returns false if the iteration stalls or leaves the (slightly inflated) box.
bool flow_to_boundary(const Domain& dom, Vec& q, double tol) {
    const double slack = 0.05 * dom.box().diagonal();
    for (int it = 0; it < 200; ++it) {
        const double r = dom.rho_at(q);
        if (std::abs(r) <= tol) return true;
        const Vec g = dom.grad_at(q);
        const double g2 = g.squaredNorm();
        if (g2 < 1e-30) return false;
        Vec step = -(r / g2) * g;
        // damp huge steps far from the boundary
        const double cap = 0.25 * dom.box().diagonal();
        if (step.norm() > cap) step *= cap / step.norm();
        Vec qn = q + step;
        int bt = 0;
        while (std::abs(dom.rho_at(qn)) > std::abs(r) && bt < 30) {
            step *= 0.5;
            qn = q + step;
            ++bt;
        }
        if (bt == 30) return false;
        q = qn;
        if (!dom.box().contains(q, slack)) return false;
    }
    return std::abs(dom.rho_at(q)) <= tol;
}

struct ProjectionCandidate {
    Vec location;
    double delta = std::numeric_limits<double>::infinity();
    bool ok = false;
};

ProjectionCandidate project_from(const Domain& dom, const Vec& base, const Vec& start) {
    ProjectionCandidate cand;
    const double tol = dom.boundary_tol() * std::max(1.0, dom.gradient_scale());
    Vec q = start;
    if (!flow_to_boundary(dom, q, tol)) return cand;

    // tangential descent of |q - base|^2 constrained to {rho = 0}
    for (int it = 0; it < 300; ++it) {
        const Vec r = q - base;
        Vec g = dom.grad_at(q);
        const double gn = g.norm();
        if (gn < 1e-30) return cand;
        g /= gn;
        const Vec tang = r - r.dot(g) * g;
        const double rn = std::max(r.norm(), 1e-30);
        if (tang.norm() <= dom.projection_tol() * rn) break;
        double s = 1.0;
        const double f0 = r.squaredNorm();
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            Vec qn = q - s * tang;
            if (flow_to_boundary(dom, qn, tol) && (qn - base).squaredNorm() < f0) {
                q = qn;
                moved = true;
                break;
            }
            s *= 0.5;
        }
        if (!moved) break;
    }
    cand.location = q;
    cand.delta = (q - base).norm();
    cand.ok = true;
    return cand;
}

bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - 1e-14) return true;
        if (a[i] > b[i] + 1e-14) return false;
    }
    return false;
}

}  // namespace

BoundaryPoint boundary_project(const Domain& dom, const Vec& p) {
    if (!(dom.rho_at(p) < 0.0))
        throw std::invalid_argument("boundary_project: point is not interior");
    const int d = dom.dim_real();
    const double h = 1e-3 * dom.box().diagonal();

    // multistart: unperturbed flow plus one nudge per coordinate direction
    std::vector<Vec> starts;
    starts.reserve(static_cast<std::size_t>(2 * d + 1));
    starts.push_back(p);
    for (int i = 0; i < d; ++i) {
        Vec q = p;
        q[i] += h;
        starts.push_back(q);
        q[i] = p[i] - h;
        starts.push_back(q);
    }

    ProjectionCandidate best;
    for (const auto& s : starts) {
        const ProjectionCandidate cand = project_from(dom, p, s);
        if (!cand.ok) continue;
        if (!best.ok) {
            best = cand;
            continue;
        }
        const double tie = dom.projection_tol() * (1.0 + best.delta);
        if (cand.delta < best.delta - tie ||
            (std::abs(cand.delta - best.delta) <= tie && lex_less(cand.location, best.location)))
            best = cand;
    }
    if (!best.ok)
        throw std::runtime_error("boundary_project: flow failed to reach {rho = 0} within budget");

    BoundaryPoint bp;
    bp.location = best.location;
    bp.base = p;
    bp.delta = best.delta;
    return bp;
}

double height(const Domain& dom, const Vec& p) {
    return std::sqrt(boundary_project(dom, p).delta);
}

}  // namespace gvlab
