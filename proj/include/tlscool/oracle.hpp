// oracle.hpp — Brute-force references for small dimensions
//
// Everything here is deliberately independent of the production code paths:
// the superoperator is assembled from Kronecker products, the Hamiltonian is
// diagonalized numerically, and evolution uses a dense matrix exponential.

#pragma once

#include "tlscool/dissipation.hpp"
#include "tlscool/polariton.hpp"
#include "tlscool/quantum_core.hpp"

#include <Eigen/Dense>

namespace tlscool::oracle {

// Builds are capped at d = 16 (nmax = 7).
inline constexpr int kMaxDim = 16;

struct JcSpectrum {
    Eigen::VectorXd eigenvalues;  // ascending
    Matrix eigenvectors;          // columns, product basis
};

JcSpectrum dense_diagonalize_jc(const SystemParams& params, const SpaceDims& space);

// Column-stacked vectorization: vec(ρ)[i + d j] = ρ(i, j).
Eigen::VectorXcd vectorize(const Matrix& rho);
Matrix unvectorize(const Eigen::VectorXcd& v, int d);

struct Superoperator {
    Matrix matrix;  // d² × d²
    int d = 0;

    Matrix apply(const Matrix& rho) const { return unvectorize(matrix * vectorize(rho), d); }
};

// Throws std::invalid_argument when d > kMaxDim.
Superoperator build_superoperator(const Generator& generator);

// exp(S t) vec(ρ₀) by scaling and squaring.
Matrix expm_evolve(const Superoperator& s, const Matrix& rho0, double t);

}  // namespace tlscool::oracle
