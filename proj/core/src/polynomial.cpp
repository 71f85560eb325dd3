#include "gvlab/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace gvlab {

Polynomial& Polynomial::add_term(double coef, std::vector<int> exponents) {
    if (static_cast<int>(exponents.size()) != nvars_)
        throw std::invalid_argument("Polynomial: exponent list has wrong length");
    for (int e : exponents)
        if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
    terms_.push_back({coef, std::move(exponents)});
    return *this;
}

Polynomial& Polynomial::add_power(double coef, int index, int power) {
    std::vector<int> e(static_cast<std::size_t>(nvars_), 0);
    if (power > 0) e[static_cast<std::size_t>(index)] = power;
    return add_term(coef, std::move(e));
}

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace

double Polynomial::operator()(const Vec& p) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        double m = t.coef;
        for (int v = 0; v < nvars_; ++v)
            if (t.exponents[static_cast<std::size_t>(v)] != 0)
                m *= ipow(p[v], t.exponents[static_cast<std::size_t>(v)]);
        s += m;
    }
    return s;
}

Vec Polynomial::gradient(const Vec& p) const {
    Vec g = Vec::Zero(nvars_);
    for (const auto& t : terms_) {
        for (int v = 0; v < nvars_; ++v) {
            const int ev = t.exponents[static_cast<std::size_t>(v)];
            if (ev == 0) continue;
            double m = t.coef * ev * ipow(p[v], ev - 1);
            for (int w = 0; w < nvars_; ++w) {
                if (w == v) continue;
                const int ew = t.exponents[static_cast<std::size_t>(w)];
                if (ew != 0) m *= ipow(p[w], ew);
            }
            g[v] += m;
        }
    }
    return g;
}

Mat Polynomial::hessian(const Vec& p) const {
    Mat h = Mat::Zero(nvars_, nvars_);
    for (const auto& t : terms_) {
        for (int v = 0; v < nvars_; ++v) {
            const int ev = t.exponents[static_cast<std::size_t>(v)];
            if (ev == 0) continue;
            // diagonal
            if (ev >= 2) {
                double m = t.coef * ev * (ev - 1) * ipow(p[v], ev - 2);
                for (int w = 0; w < nvars_; ++w) {
                    if (w == v) continue;
                    const int ew = t.exponents[static_cast<std::size_t>(w)];
                    if (ew != 0) m *= ipow(p[w], ew);
                }
                h(v, v) += m;
            }
            // off-diagonal, each unordered pair once
            for (int w = v + 1; w < nvars_; ++w) {
                const int ew = t.exponents[static_cast<std::size_t>(w)];
                if (ew == 0) continue;
                double m = t.coef * ev * ew * ipow(p[v], ev - 1) * ipow(p[w], ew - 1);
                for (int u = 0; u < nvars_; ++u) {
                    if (u == v || u == w) continue;
                    const int eu = t.exponents[static_cast<std::size_t>(u)];
                    if (eu != 0) m *= ipow(p[u], eu);
                }
                h(v, w) += m;
                h(w, v) += m;
            }
        }
    }
    return h;
}

namespace {

std::string var_name(int index, int n) {
    return index < n ? "x" + std::to_string(index + 1) : "y" + std::to_string(index - n + 1);
}

int var_index(const std::string& name, int n) {
    if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y'))
        throw std::invalid_argument("Polynomial: bad variable '" + name + "'");
    const int k = std::stoi(name.substr(1));
    if (k < 1 || k > n) throw std::invalid_argument("Polynomial: variable index out of range in '" + name + "'");
    return name[0] == 'x' ? k - 1 : n + k - 1;
}

}  // namespace

std::string Polynomial::to_string() const {
    const int n = nvars_ / 2;
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        double c = t.coef;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            c = std::abs(c);
        }
        os << c;
        for (int v = 0; v < nvars_; ++v) {
            const int e = t.exponents[static_cast<std::size_t>(v)];
            if (e == 0) continue;
            os << "*" << var_name(v, n);
            if (e > 1) os << "^" << e;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

Polynomial Polynomial::parse(const std::string& text, int dim_complex) {
    const int nvars = 2 * dim_complex;
    Polynomial poly(nvars);
    std::size_t i = 0;
    const auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    bool any = false;
    while (i < text.size()) {
        double sign = 1.0;
        if (text[i] == '+' || text[i] == '-') {
            if (text[i] == '-') sign = -1.0;
            ++i;
            skip_ws();
        } else if (any) {
            throw std::invalid_argument("Polynomial: expected '+' or '-' near position " +
                                        std::to_string(i));
        }
        double coef = 1.0;
        bool saw_coef = false;
        if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
            std::size_t used = 0;
            coef = std::stod(text.substr(i), &used);
            i += used;
            saw_coef = true;
        }
        std::vector<int> exps(static_cast<std::size_t>(nvars), 0);
        bool saw_var = false;
        for (;;) {
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip_ws();
            }
            if (i >= text.size() || (text[i] != 'x' && text[i] != 'y')) break;
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            const int v = var_index(text.substr(i, j - i), dim_complex);
            i = j;
            int e = 1;
            skip_ws();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip_ws();
                std::size_t used = 0;
                e = std::stoi(text.substr(i), &used);
                i += used;
            }
            exps[static_cast<std::size_t>(v)] += e;
            saw_var = true;
        }
        if (!saw_coef && !saw_var)
            throw std::invalid_argument("Polynomial: empty term near position " + std::to_string(i));
        poly.add_term(sign * coef, std::move(exps));
        any = true;
        skip_ws();
    }
    if (!any) throw std::invalid_argument("Polynomial: empty expression");
    return poly;
}

}  // namespace gvlab
