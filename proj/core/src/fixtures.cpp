#include "gvlab/fixtures.hpp"

namespace gvlab {

namespace {

Domain poly_domain(int n, const Polynomial& poly, Box box, Vec witness, Domain::Options opts,
                   std::string name, bool region_type) {
    DefiningFunction rho(
        n, [poly](const Vec& p) { return poly(p); }, [poly](const Vec& p) { return poly.gradient(p); },
        [poly](const Vec& p) { return poly.hessian(p); });
    return Domain(std::move(rho), AlmostComplexStructure::standard(n), std::move(box),
                  std::move(witness), opts, std::move(name), region_type);
}

Polynomial norm_sq(int n) {
    Polynomial p(2 * n);
    for (int i = 0; i < 2 * n; ++i) p.add_power(1.0, i, 2);
    return p;
}

}  // namespace

Domain make_fixture(const std::string& name, Domain::Options opts) {
    if (name == "disk") {
        Polynomial p = norm_sq(1);
        p.add_constant(-1.0);
        return poly_domain(1, p, Box::cube(2, -1.5, 1.5), Vec::Zero(2), opts, name, true);
    }
    if (name == "ball2") {
        Polynomial p = norm_sq(2);
        p.add_constant(-1.0);
        return poly_domain(2, p, Box::cube(4, -1.5, 1.5), Vec::Zero(4), opts, name, true);
    }
    if (name == "ellipsoid") {
        // |z1|^2 + 2 |z2|^2 - 1 ; variables ordered (x1, x2, y1, y2)
        Polynomial p(4);
        p.add_power(1.0, 0, 2).add_power(2.0, 1, 2).add_power(1.0, 2, 2).add_power(2.0, 3, 2);
        p.add_constant(-1.0);
        return poly_domain(2, p, Box::cube(4, -1.3, 1.3), Vec::Zero(4), opts, name, true);
    }
    if (name == "indexed_psh") {
        // x1^2 + y1^2 + 3 x2^2 - y2^2 - 1 (harmonic 2 Re z2^2 added to the ball)
        Polynomial p(4);
        p.add_power(1.0, 0, 2).add_power(3.0, 1, 2).add_power(1.0, 2, 2).add_power(-1.0, 3, 2);
        p.add_constant(-1.0);
        return poly_domain(2, p, Box::cube(4, -1.5, 1.5), Vec::Zero(4), opts, name, true);
    }
    if (name == "two_spheres") {
        // (r^2 - 1)(r^2 - 4) = r^4 - 5 r^2 + 4, r^2 = sum v_i^2
        Polynomial p(4);
        for (int i = 0; i < 4; ++i) p.add_power(1.0, i, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                std::vector<int> e(4, 0);
                e[static_cast<std::size_t>(i)] = 2;
                e[static_cast<std::size_t>(j)] = 2;
                p.add_term(2.0, std::move(e));
            }
        for (int i = 0; i < 4; ++i) p.add_power(-5.0, i, 2);
        p.add_constant(4.0);
        Vec witness = Vec::Zero(4);
        witness[0] = 1.5811388300841898;  // r^2 = 2.5, between the spheres
        return poly_domain(2, p, Box::cube(4, -2.5, 2.5), witness, opts, name, false);
    }
    if (name == "saddle") {
        // Re(z^2) = x^2 - y^2, pluriharmonic (Levi form vanishes)
        Polynomial p(2);
        p.add_power(1.0, 0, 2).add_power(-1.0, 1, 2);
        Vec witness(2);
        witness << 0.0, 0.5;
        return poly_domain(1, p, Box::cube(2, -1.0, 1.0), witness, opts, name, false);
    }
    if (name == "index3") {
        // x1^2 - x2^2 - y1^2 - y2^2, Morse index 3 at the origin, not psh
        Polynomial p(4);
        p.add_power(1.0, 0, 2).add_power(-1.0, 1, 2).add_power(-1.0, 2, 2).add_power(-1.0, 3, 2);
        Vec witness = Vec::Zero(4);
        witness[1] = 0.5;
        return poly_domain(2, p, Box::cube(4, -1.0, 1.0), witness, opts, name, false);
    }
    throw std::invalid_argument("make_fixture: unknown fixture '" + name + "'");
}

std::vector<std::string> fixture_names() {
    return {"disk", "ball2", "ellipsoid", "indexed_psh", "two_spheres", "saddle", "index3"};
}

Domain make_polynomial_domain(int dim_complex, const Polynomial& rho, AlmostComplexStructure J,
                              Box box, Vec witness, Domain::Options opts, std::string name,
                              bool region_type) {
    DefiningFunction f(
        dim_complex, [rho](const Vec& p) { return rho(p); },
        [rho](const Vec& p) { return rho.gradient(p); },
        [rho](const Vec& p) { return rho.hessian(p); });
    return Domain(std::move(f), std::move(J), std::move(box), std::move(witness), opts,
                  std::move(name), region_type);
}

AlmostComplexStructure sheared_structure(int dim_complex, double strength) {
    const int d = 2 * dim_complex;
    Mat J0 = Mat::Zero(d, d);
    for (int k = 0; k < dim_complex; ++k) {
        J0(dim_complex + k, k) = 1.0;
        J0(k, dim_complex + k) = -1.0;
    }
    Mat E = Mat::Zero(d, d);
    E(0, d - 1) = 1.0;  // nilpotent: E^2 = 0, so (I + aE)^{-1} = I - aE exactly
    auto field = [J0, E, d, strength](const Vec& p) {
        const double a = strength * p[0];
        const Mat T = Mat::Identity(d, d) + a * E;
        const Mat Tinv = Mat::Identity(d, d) - a * E;
        return Mat(T * J0 * Tinv);
    };
    return AlmostComplexStructure(dim_complex, field, /*constant=*/false);
}

}  // namespace gvlab
