#include "gvlab/sampling.hpp"

#include <Eigen/QR>

#include <complex>

namespace gvlab {

Mat real_unitary(int dim_complex, std::uint64_t seed) {
    const int n = dim_complex;
    const CounterRng rng(seed);
    Eigen::MatrixXcd G(n, n);
    std::uint64_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            G(i, j) = std::complex<double>(rng.normal(k++), rng.normal(k++));
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
    Eigen::MatrixXcd U = qr.householderQ();
    const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const std::complex<double> d = R(j, j);
        if (std::abs(d) > 0.0) U.col(j) *= d / std::abs(d);
    }
    Mat out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = U.real();
    out.topRightCorner(n, n) = -U.imag();
    out.bottomLeftCorner(n, n) = U.imag();
    out.bottomRightCorner(n, n) = U.real();
    return out;
}

}  // namespace gvlab
