#pragma once

#include "gvlab/types.hpp"

#include <cstdint>

namespace gvlab {

/// Sparse multivariate polynomial with analytic gradient and Hessian.
/// Variables are the real chart coordinates (x_1..x_n, y_1..y_n).
class Polynomial {
  public:
    struct Term {
        double coef = 0.0;
        std::vector<int> exponents;  // one entry per variable
    };

    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    int nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }

    /// Adds coef * prod_i v_i^e_i; exponents must have nvars entries.
    Polynomial& add_term(double coef, std::vector<int> exponents);

    /// Convenience: adds coef * v_index^power.
    Polynomial& add_power(double coef, int index, int power);
    Polynomial& add_constant(double coef) { return add_power(coef, 0, 0); }

    double operator()(const Vec& p) const;
    Vec gradient(const Vec& p) const;
    Mat hessian(const Vec& p) const;

    /// Textual form, e.g. "1*x1^2 + 1*y1^2 - 1" (variables x1..xn, y1..yn).
    std::string to_string() const;

    /// Parses the textual form; nvars = 2*dim_complex.
    static Polynomial parse(const std::string& text, int dim_complex);

  private:
    int nvars_ = 0;
    std::vector<Term> terms_;
};

}  // namespace gvlab
