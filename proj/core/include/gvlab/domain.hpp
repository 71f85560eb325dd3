#pragma once

#include "gvlab/types.hpp"

#include <functional>
#include <optional>

namespace gvlab {

/// Smooth scalar field rho on R^{2n} with gradient and Hessian access.
/// Analytic derivatives are used when supplied; otherwise second-order
/// central finite differences with step fd_step.
///
/// Chart convention: coordinates are ordered (x_1..x_n, y_1..y_n), with
/// z_j = x_j + i y_j.
class DefiningFunction {
  public:
    using EvalFn = std::function<double(const Vec&)>;
    using GradFn = std::function<Vec(const Vec&)>;
    using HessFn = std::function<Mat(const Vec&)>;

    DefiningFunction(int dim_complex, EvalFn eval, GradFn grad = {}, HessFn hess = {},
                     double fd_step = 1e-5);

    int dim_complex() const { return n_; }
    int dim_real() const { return 2 * n_; }
    double fd_step() const { return fd_step_; }
    void set_fd_step(double h) { fd_step_ = h; }
    bool has_analytic_gradient() const { return static_cast<bool>(grad_); }
    bool has_analytic_hessian() const { return static_cast<bool>(hess_); }

    double operator()(const Vec& p) const { return eval_(p); }
    Vec gradient(const Vec& p) const;
    Mat hessian(const Vec& p) const;  // symmetrized

    /// Finite-difference derivatives regardless of supplied closures
    /// (used to cross-check analytic ones).
    Vec fd_gradient(const Vec& p, double step = 0.0) const;
    Mat fd_hessian(const Vec& p, double step = 0.0) const;

  private:
    int n_;
    EvalFn eval_;
    GradFn grad_;
    HessFn hess_;
    double fd_step_;
};

/// Matrix field J(p) on R^{2n} with J(p)^2 = -I.
class AlmostComplexStructure {
  public:
    using Field = std::function<Mat(const Vec&)>;

    /// The standard structure: (x, y) block layout, J(dx_k) = dy_k.
    static AlmostComplexStructure standard(int dim_complex);

    AlmostComplexStructure(int dim_complex, Field field, bool constant,
                           bool audit_every_eval = false);

    int dim_complex() const { return n_; }
    int dim_real() const { return 2 * n_; }
    bool is_constant() const { return constant_; }
    bool is_standard() const { return standard_; }

    Mat operator()(const Vec& p) const;

    /// Throws if J(p)^2 deviates from -I by more than 1e-10.
    void audit_at(const Vec& p) const;

  private:
    int n_;
    Field field_;
    bool constant_;
    bool standard_ = false;
    bool audit_every_eval_;
};

/// D = {rho < 0} with its almost complex structure, bounding box, and collar
/// width. Immutable after construction; all geometric operations take it by
/// const reference.
struct DomainOptions {
    double collar_eps = 0.0;     // 0 => 10% of the inradius estimate
    double boundary_tol = 1e-8;
    double projection_tol = 1e-6;
    double fd_step = 0.0;        // 0 => 1e-4 * box diagonal
};

class Domain {
  public:
    using Options = DomainOptions;

    Domain(DefiningFunction rho, AlmostComplexStructure J, Box box, Vec witness,
           DomainOptions opts = {}, std::string name = {}, bool region_type = true);

    const DefiningFunction& rho() const { return rho_; }
    const AlmostComplexStructure& J() const { return J_; }
    const Box& box() const { return box_; }
    const Vec& witness() const { return witness_; }
    const std::string& name() const { return name_; }
    bool region_type() const { return region_type_; }

    int dim_complex() const { return rho_.dim_complex(); }
    int dim_real() const { return rho_.dim_real(); }
    double boundary_tol() const { return boundary_tol_; }
    double projection_tol() const { return projection_tol_; }
    double collar_eps() const;

    double rho_at(const Vec& p) const { return rho_(p); }
    Vec grad_at(const Vec& p) const { return rho_.gradient(p); }
    Mat hess_at(const Vec& p) const { return rho_.hessian(p); }
    bool is_interior(const Vec& p) const { return rho_(p) < 0.0; }

    /// Scale estimates sampled over the box at construction.
    double gradient_scale() const { return grad_scale_; }
    double hessian_scale() const { return hess_scale_; }

  private:
    DefiningFunction rho_;
    AlmostComplexStructure J_;
    Box box_;
    Vec witness_;
    double boundary_tol_;
    double projection_tol_;
    mutable double collar_eps_;  // lazily computed when 0
    double grad_scale_ = 1.0;
    double hess_scale_ = 1.0;
    std::string name_;
    bool region_type_;
};

/// d^c rho at p applied to v: -<grad rho(p), J(p) v>.
double dc_rho(const Domain& dom, const Vec& p, const Vec& v);

/// Antisymmetric coefficient matrix A of d(d^c rho) at p, so that
/// d(d^c rho)(u, w) = u^T A w. Finite-difference exterior derivative of the
/// 1-form d^c rho; for constant J the difference quotient collapses to an
/// expression in the Hessian. step = 0 uses the domain default.
Mat dcrho_exterior_derivative(const Domain& dom, const Vec& p, double step = 0.0);

/// Symmetric matrix S with Levi form L(p, v) = v^T S v.
Mat levi_matrix(const Domain& dom, const Vec& p, double step = 0.0);

/// Levi form L(p, v) = d(d^c rho)(p)(v, J(p) v).
double levi_form(const Domain& dom, const Vec& p, const Vec& v);

struct PshCertificate {
    double min_eigenvalue = 0.0;
    Vec worst_point;
};

/// Minimal Levi-form eigenvalue over a grid on `region` (grid_res points per
/// axis). Positive value certifies strict plurisubharmonicity at grid scale.
PshCertificate check_strict_psh(const Domain& dom, const Box& region, int grid_res);
PshCertificate check_strict_psh(const Domain& dom, int grid_res = 9);

struct BoundaryPoint {
    Vec location;  // on {rho = 0}
    Vec base;      // the interior point it projects from
    double delta = 0.0;  // Euclidean distance base -> location
};

/// Nearest boundary point by gradient ascent to {rho=0} followed by
/// tangential distance descent; deterministic multistart with lexicographic
/// tie-break for non-unique projections.
BoundaryPoint boundary_project(const Domain& dom, const Vec& p);

/// h(p) = sqrt(dist(p, boundary)).
double height(const Domain& dom, const Vec& p);

}  // namespace gvlab
