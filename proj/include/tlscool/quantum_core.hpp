// quantum_core.hpp — Truncated resonator ⊗ TLS space, operators, density matrices

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <string>

namespace tlscool {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

enum class TlsLevel : int { Down = 0, Up = 1 };

// Product space of a Fock ladder truncated at nmax and a two-level system.
// Flattening is Fock-major, TLS-minor: index(n, s) = 2 n + s, with
// s = 0 for |↓⟩ and s = 1 for |↑⟩. Every module relies on this ordering.
class SpaceDims {
public:
    explicit SpaceDims(int nmax);

    int nmax() const { return nmax_; }
    int dim() const { return 2 * (nmax_ + 1); }
    int index(int n, TlsLevel s) const { return 2 * n + static_cast<int>(s); }
    int fock_of(int index) const { return index / 2; }
    TlsLevel tls_of(int index) const { return static_cast<TlsLevel>(index % 2); }

    bool operator==(const SpaceDims&) const = default;

private:
    int nmax_;
};

struct Operator {
    Matrix matrix;
    SpaceDims space;

    Operator(Matrix m, SpaceDims s);

    Operator adjoint() const { return {matrix.adjoint(), space}; }
    Operator operator*(const Operator& rhs) const;
};

struct TlsOperators {
    Operator sigma_minus;
    Operator sigma_plus;
    Operator sigma_z;
};

// Hermiticity/trace/positivity diagnostics of a candidate density matrix.
struct Validity {
    double trace_error = 0.0;      // |Tr ρ - 1|
    double hermiticity_error = 0.0; // max |ρ - ρ†|
    double min_eigenvalue = 0.0;

    bool ok(double trace_tol = 1e-10, double herm_tol = 1e-10, double eig_floor = -1e-8) const {
        return trace_error <= trace_tol && hermiticity_error <= herm_tol && min_eigenvalue >= eig_floor;
    }
};

class DensityMatrix {
public:
    DensityMatrix(Matrix m, SpaceDims s);

    const Matrix& matrix() const { return matrix_; }
    Matrix& matrix() { return matrix_; }
    const SpaceDims& space() const { return space_; }

    Validity validity() const;
    // Throws std::runtime_error naming the violated bound.
    void check_valid(double trace_tol = 1e-10, double herm_tol = 1e-10, double eig_floor = -1e-8) const;

    double purity() const;
    double min_eigenvalue() const;

private:
    Matrix matrix_;
    SpaceDims space_;
};

Operator identity(const SpaceDims& space);

// b ⊗ I_TLS
Operator build_ladder(const SpaceDims& space);

// I_Fock ⊗ {σ₋, σ₊, σ_z}, with σ_z|↑⟩ = +|↑⟩.
TlsOperators build_tls_ops(const SpaceDims& space);

// Projector onto the highest retained Fock level (both TLS states).
Operator top_level_projector(const SpaceDims& space);

// Weight of the Bose-Einstein distribution above nmax before renormalization.
double truncated_tail_weight(int nmax, double n_th);

// Diagonal 2x2 TLS thermal factor at frequency omega_z and theta = ħω_m/(k_B T).
Matrix tls_thermal_factor(double omega_z, double theta);
Matrix tls_ground_factor();

// Truncated, renormalized Bose-Einstein resonator state ⊗ the given 2x2 TLS
// density matrix. Warns on stderr when the truncated tail exceeds 1e-4.
DensityMatrix thermal_resonator_state(const SpaceDims& space, double n_th, const Matrix& tls_factor);

// Tr(O ρ)
Complex expectation(const DensityMatrix& rho, const Operator& op);
Complex expectation(const Matrix& rho, const Matrix& op);

// Change of basis ρ → U ρ U†.
Matrix rotate(const Matrix& u, const Matrix& m);

void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace tlscool
