#include "cdsim/util.hpp"

#include <cstdio>

#include "cdsim/spectral.hpp"

namespace cdsim::util {

Matrix random_hermitian(int dim, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> gauss(0.0, scale);
    Matrix A(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A(i, j) = Complex(gauss(rng), gauss(rng));
    return hermitize(A);
}

Matrix random_hamiltonian(int dim, std::mt19937_64& rng, double spread, double mix) {
    Matrix H = random_hermitian(dim, rng, mix * spread);
    for (int i = 0; i < dim; ++i) H(i, i) += Complex(spread * i, 0.0);
    return H;
}

Matrix random_density(int dim, std::mt19937_64& rng) {
    Matrix A = random_hermitian(dim, rng);
    Matrix rho = A * A.adjoint();
    rho /= rho.trace();
    return rho;
}

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace cdsim::util
