// polariton.hpp — Jaynes-Cummings doublet basis of the resonator-TLS system
//
// All energies and rates are in units of the resonator frequency ω_m.

#pragma once

#include "tlscool/quantum_core.hpp"

#include <optional>
#include <vector>

namespace tlscool {

struct SystemParams {
    double omega_z = 0.9;      // TLS frequency
    double lambda = 0.05;      // JC coupling
    double g = 0.05;           // optomechanical coupling
    double kappa = 0.15;       // cavity damping
    double gamma_m = 1e-6;     // resonator damping
    double gamma_tau = 2.5e-4; // TLS damping
    double delta_l = -1.0;     // drive detuning Δ_L
    double theta = 0.0959853;  // ħω_m / (k_B T)
    // Cavity-rate detuning Δ_b. Unset means Δ_b = Δ_L.
    std::optional<double> delta_b;

    double detuning() const { return 1.0 - omega_z; }  // δω = ω_m - ω_z
    double resolved_delta_b() const { return delta_b.value_or(delta_l); }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

enum class Branch { Ground, Plus, Minus, Top };

const char* to_string(Branch b);

struct Mixing {
    double cos_half = 1.0;  // cos(δ_n/2)
    double sin_half = 0.0;  // sin(δ_n/2)
};

struct PolaritonLevel {
    int manifold;  // excitation number: n for |n,±⟩, 0 for the ground singlet
    Branch branch;
    double energy;
};

// Eigenbasis of H_JC on the truncated space, ordered as
//   0           |0,↓⟩ ground singlet
//   2n-1, 2n    |n,+⟩, |n,-⟩ for n = 1..nmax
//   2 nmax + 1  |nmax,↑⟩, the unpaired top state of the truncated n = nmax+1 manifold
// transform() is the real orthogonal U with rows holding the polariton states
// in product coordinates, so ρ_polariton = U ρ_product U†.
class PolaritonBasis {
public:
    PolaritonBasis(const SystemParams& params, const SpaceDims& space);

    const SpaceDims& space() const { return space_; }
    const SystemParams& params() const { return params_; }
    int dim() const { return space_.dim(); }

    const std::vector<PolaritonLevel>& levels() const { return levels_; }
    int index(int manifold, Branch branch) const;
    double energy(int manifold, Branch branch) const { return levels_[index(manifold, branch)].energy; }

    // ω_n = sqrt(δω² + 4 λ² n)
    double splitting(int n) const;
    const Mixing& mixing(int n) const { return mixing_.at(n); }

    const Matrix& transform() const { return transform_; }
    Matrix to_polariton(const Matrix& product) const { return rotate(transform_, product); }
    Matrix to_product(const Matrix& polariton) const { return transform_.adjoint() * polariton * transform_; }

private:
    SystemParams params_;
    SpaceDims space_;
    std::vector<PolaritonLevel> levels_;
    std::vector<Mixing> mixing_;  // indexed by n; entry 0 unused
    Matrix transform_;
};

// H_JC = b†b + (ω_z/2) σ_z + λ(σ₊ b + b† σ₋) in the product basis.
Operator jc_hamiltonian(const SystemParams& params, const SpaceDims& space);

PolaritonBasis build_polariton_basis(const SystemParams& params, const SpaceDims& space);

// Matrix elements of b and σ₋ between manifold n and n-1:
//   ladder = A^{(n)}_{β,α} = ⟨n-1,β| b |n,α⟩, tls = σ^{(n)}_{β,α} = ⟨n-1,β| σ₋ |n,α⟩.
struct TransitionCoefficient {
    int manifold;  // n of the initial state
    int from;      // polariton index of |n,α⟩
    int to;        // polariton index of |n-1,β⟩
    double ladder;
    double tls;
};

std::vector<TransitionCoefficient> transition_coefficients(const PolaritonBasis& basis);

// σ_z in the polariton basis, V = U σ_z U†.
Operator pulse_matrix(const PolaritonBasis& basis);

}  // namespace tlscool
