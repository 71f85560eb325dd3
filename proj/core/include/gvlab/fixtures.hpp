#pragma once

#include "gvlab/domain.hpp"
#include "gvlab/polynomial.hpp"

namespace gvlab {

/// Builtin model domains.
///   disk        n=1  |z|^2 - 1
///   ball2       n=2  |z1|^2 + |z2|^2 - 1
///   ellipsoid   n=2  |z1|^2 + 2 |z2|^2 - 1
///   indexed_psh n=2  |z1|^2 + |z2|^2 + 2 Re(z2^2) - 1   (index-1 critical point)
///   two_spheres n=2  (|z|^2 - 1)(|z|^2 - 4)             (non-psh control, two boundary spheres)
///   saddle      n=1  Re(z^2) = x^2 - y^2                (pluriharmonic control)
///   index3      n=2  x1^2 - x2^2 - y1^2 - y2^2          (non-psh control, index 3)
Domain make_fixture(const std::string& name, Domain::Options opts = {});

std::vector<std::string> fixture_names();

/// Domain from a defining polynomial (analytic derivatives).
Domain make_polynomial_domain(int dim_complex, const Polynomial& rho, AlmostComplexStructure J,
                              Box box, Vec witness, Domain::Options opts = {},
                              std::string name = {}, bool region_type = true);

/// Non-integrable-looking test structure: J = T J_st T^{-1} with
/// T(p) = I + strength * p_0 * E and E a nilpotent shear, so J(p)^2 = -I
/// holds exactly while J varies with position.
AlmostComplexStructure sheared_structure(int dim_complex, double strength);

}  // namespace gvlab
