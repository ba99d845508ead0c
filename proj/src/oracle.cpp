#include "tlscool/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/core.h>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>

namespace tlscool::oracle {

JcSpectrum dense_diagonalize_jc(const SystemParams& params, const SpaceDims& space) {
    const Operator h = jc_hamiltonian(params, space);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense_diagonalize_jc: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXcd vectorize(const Matrix& rho) {
    return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Matrix unvectorize(const Eigen::VectorXcd& v, int d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

Superoperator build_superoperator(const Generator& generator) {
    const int d = generator.space().dim();
    if (d > kMaxDim)
        throw std::invalid_argument(fmt::format("build_superoperator: d = {} exceeds the oracle cap {}", d, kMaxDim));
    const Matrix id = Matrix::Identity(d, d);
    const Matrix& h = generator.hamiltonian().matrix;
    const Complex i(0.0, 1.0);

    // vec(A X B) = (Bᵀ ⊗ A) vec(X)
    Matrix s = -i * (Matrix(Eigen::kroneckerProduct(id, h)) - Matrix(Eigen::kroneckerProduct(h.transpose(), id)));
    for (const Dissipator& k : generator.dissipators()) {
        const Matrix o = Matrix(k.jump);
        const Matrix ood = o.adjoint() * o;
        s += 0.5 * k.rate *
             (2.0 * Matrix(Eigen::kroneckerProduct(o.conjugate(), o)) - Matrix(Eigen::kroneckerProduct(id, ood)) -
              Matrix(Eigen::kroneckerProduct(ood.transpose(), id)));
    }
    return {std::move(s), d};
}

Matrix expm_evolve(const Superoperator& s, const Matrix& rho0, double t) {
    if (s.d > kMaxDim) throw std::invalid_argument("expm_evolve: dimension exceeds the oracle cap");
    if (t == 0.0) return rho0;
    const Matrix prop = (s.matrix * t).exp();
    return unvectorize(prop * vectorize(rho0), s.d);
}

}  // namespace tlscool::oracle
