#include "tlscool/quantum_core.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

#include <atomic>
#include <cmath>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace tlscool {

namespace {
std::atomic<bool> g_warnings{true};
std::mutex g_warn_mutex;
}  // namespace

void warn(const std::string& message) {
    if (!g_warnings.load()) return;
    std::lock_guard lock(g_warn_mutex);
    std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }

SpaceDims::SpaceDims(int nmax) : nmax_(nmax) {
    if (nmax < 2) throw std::invalid_argument(fmt::format("SpaceDims: nmax must be >= 2, got {}", nmax));
}

Operator::Operator(Matrix m, SpaceDims s) : matrix(std::move(m)), space(s) {
    if (matrix.rows() != space.dim() || matrix.cols() != space.dim())
        throw std::invalid_argument(fmt::format("Operator: matrix is {}x{}, space dimension is {}",
                                                matrix.rows(), matrix.cols(), space.dim()));
}

Operator Operator::operator*(const Operator& rhs) const {
    if (!(space == rhs.space)) throw std::invalid_argument("Operator product: space mismatch");
    return {matrix * rhs.matrix, space};
}

DensityMatrix::DensityMatrix(Matrix m, SpaceDims s) : matrix_(std::move(m)), space_(s) {
    if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim())
        throw std::invalid_argument(fmt::format("DensityMatrix: matrix is {}x{}, space dimension is {}",
                                                matrix_.rows(), matrix_.cols(), space_.dim()));
}

double DensityMatrix::min_eigenvalue() const {
    // Eigen reads only the lower triangle; symmetrize so that the value is
    // well defined for slightly non-Hermitian inputs.
    const Matrix h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const {
    // Tr(ρ²) = Σ_ij ρ_ij ρ_ji
    return (matrix_.cwiseProduct(matrix_.transpose())).sum().real();
}

Validity DensityMatrix::validity() const {
    Validity v;
    v.trace_error = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    v.hermiticity_error = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    v.min_eigenvalue = min_eigenvalue();
    return v;
}

void DensityMatrix::check_valid(double trace_tol, double herm_tol, double eig_floor) const {
    const Validity v = validity();
    if (v.trace_error > trace_tol)
        throw std::runtime_error(fmt::format("density matrix trace error {:.3e} exceeds {:.1e}", v.trace_error, trace_tol));
    if (v.hermiticity_error > herm_tol)
        throw std::runtime_error(
            fmt::format("density matrix Hermiticity error {:.3e} exceeds {:.1e}", v.hermiticity_error, herm_tol));
    if (v.min_eigenvalue < eig_floor)
        throw std::runtime_error(
            fmt::format("density matrix eigenvalue {:.3e} below {:.1e}", v.min_eigenvalue, eig_floor));
}

Operator identity(const SpaceDims& space) { return {Matrix::Identity(space.dim(), space.dim()), space}; }

Operator build_ladder(const SpaceDims& space) {
    Matrix b = Matrix::Zero(space.dim(), space.dim());
    for (int n = 1; n <= space.nmax(); ++n) {
        const double amp = std::sqrt(static_cast<double>(n));
        for (TlsLevel s : {TlsLevel::Down, TlsLevel::Up}) b(space.index(n - 1, s), space.index(n, s)) = amp;
    }
    return {std::move(b), space};
}

TlsOperators build_tls_ops(const SpaceDims& space) {
    const int d = space.dim();
    Matrix sm = Matrix::Zero(d, d);
    Matrix sz = Matrix::Zero(d, d);
    for (int n = 0; n <= space.nmax(); ++n) {
        const int down = space.index(n, TlsLevel::Down);
        const int up = space.index(n, TlsLevel::Up);
        sm(down, up) = 1.0;
        sz(down, down) = -1.0;
        sz(up, up) = 1.0;
    }
    Matrix sp = sm.adjoint();
    return {Operator{std::move(sm), space}, Operator{std::move(sp), space}, Operator{std::move(sz), space}};
}

Operator top_level_projector(const SpaceDims& space) {
    Matrix p = Matrix::Zero(space.dim(), space.dim());
    for (TlsLevel s : {TlsLevel::Down, TlsLevel::Up}) {
        const int i = space.index(space.nmax(), s);
        p(i, i) = 1.0;
    }
    return {std::move(p), space};
}

double truncated_tail_weight(int nmax, double n_th) {
    if (n_th <= 0.0) return 0.0;
    // P(n > nmax) = q^{nmax+1} with q = n_th / (n_th + 1)
    const double log_q = std::log(n_th) - std::log1p(n_th);
    return std::exp((nmax + 1) * log_q);
}

Matrix tls_thermal_factor(double omega_z, double theta) {
    if (theta <= 0.0) throw std::invalid_argument("tls_thermal_factor: theta must be positive");
    // p_up / p_down = exp(-omega_z theta)
    const double boltz = std::exp(-omega_z * theta);
    Matrix f = Matrix::Zero(2, 2);
    f(0, 0) = 1.0 / (1.0 + boltz);
    f(1, 1) = boltz / (1.0 + boltz);
    return f;
}

Matrix tls_ground_factor() {
    Matrix f = Matrix::Zero(2, 2);
    f(0, 0) = 1.0;
    return f;
}

DensityMatrix thermal_resonator_state(const SpaceDims& space, double n_th, const Matrix& tls_factor) {
    if (!(n_th >= 0.0)) throw std::invalid_argument("thermal_resonator_state: n_th must be >= 0");
    if (tls_factor.rows() != 2 || tls_factor.cols() != 2)
        throw std::invalid_argument("thermal_resonator_state: TLS factor must be 2x2");

    const double tail = truncated_tail_weight(space.nmax(), n_th);
    if (tail > 1e-4)
        warn(fmt::format("thermal state with n_th = {:.4g} loses tail weight {:.3e} at nmax = {}", n_th, tail,
                         space.nmax()));

    std::vector<double> pops(space.nmax() + 1, 0.0);
    if (n_th == 0.0) {
        pops[0] = 1.0;
    } else {
        const double log_q = std::log(n_th) - std::log1p(n_th);
        double total = 0.0;
        for (int n = 0; n <= space.nmax(); ++n) total += pops[n] = std::exp(n * log_q);
        for (double& p : pops) p /= total;
    }

    Matrix rho = Matrix::Zero(space.dim(), space.dim());
    for (int n = 0; n <= space.nmax(); ++n)
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t)
                rho(2 * n + s, 2 * n + t) = pops[n] * tls_factor(s, t);
    return {std::move(rho), space};
}

Complex expectation(const Matrix& rho, const Matrix& op) {
    if (rho.rows() != op.rows() || rho.cols() != op.cols())
        throw std::invalid_argument(fmt::format("expectation: state is {}x{}, operator is {}x{}", rho.rows(),
                                                rho.cols(), op.rows(), op.cols()));
    // Tr(Oρ) = Σ_ij O_ij ρ_ji
    return op.cwiseProduct(rho.transpose()).sum();
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
    if (!(rho.space() == op.space)) throw std::invalid_argument("expectation: space mismatch");
    return expectation(rho.matrix(), op.matrix);
}

Matrix rotate(const Matrix& u, const Matrix& m) { return u * m * u.adjoint(); }

}  // namespace tlscool
