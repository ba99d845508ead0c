// Shared helpers for the unit tests.
#pragma once

#include "tlscool/quantum_core.hpp"

#include <random>

namespace tlscool::test {

inline Matrix random_matrix(int d, std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

inline Matrix random_hermitian(int d, std::mt19937& rng) {
    const Matrix a = random_matrix(d, rng);
    return 0.5 * (a + a.adjoint());
}

// Full-rank random state: A A† / Tr.
inline DensityMatrix random_state(const SpaceDims& space, std::mt19937& rng) {
    const Matrix a = random_matrix(space.dim(), rng);
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    return {rho, space};
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace tlscool::test
