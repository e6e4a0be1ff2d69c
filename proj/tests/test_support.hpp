#pragma once

#include <random>

#include "spinsim/types.hpp"

namespace spinsim::testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Matrix random_complex(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix out(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) out(r, c) = Complex(normal(gen), normal(gen));
    return out;
}

/// Random Hermitian matrix, rescaled so the Gershgorin bound on the spectral
/// radius is about `radius`.
inline Matrix random_hermitian(int dim, std::mt19937_64& gen, double radius = 3.0) {
    Matrix a = random_complex(dim, gen);
    Matrix h = 0.5 * (a + a.adjoint());
    const double bound = h.cwiseAbs().rowwise().sum().maxCoeff();
    return h * (radius / bound);
}

inline Vector random_state(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector psi(dim);
    for (int k = 0; k < dim; ++k) psi[k] = Complex(normal(gen), normal(gen));
    return psi / psi.norm();
}

/// Random mixed density matrix (full rank, unit trace).
inline Matrix random_density(int dim, std::mt19937_64& gen) {
    Matrix a = random_complex(dim, gen);
    Matrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

/// Plain Kronecker product, the independent oracle for embeddings and
/// partial traces.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace spinsim::testing
