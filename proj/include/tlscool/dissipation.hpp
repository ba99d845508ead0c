// dissipation.hpp — Lindblad generators for the resonator-TLS system
//
// Dissipator convention: a rate Γ attached to jump operator o contributes
//   (Γ/2) 𝓛(o)ρ,   𝓛(o)ρ = 2 o ρ o† - ρ o† o - o† o ρ.

#pragma once

#include "tlscool/polariton.hpp"
#include "tlscool/quantum_core.hpp"

#include <string>
#include <vector>

namespace tlscool {

// Transitions with |ω| below this carry no thermal dissipator.
inline constexpr double kZeroFrequency = 1e-9;

// 1 / (exp(ω θ) - 1). Throws std::invalid_argument unless ω > 0 and θ > 0.
double bose_occupation(double omega, double theta);

struct CavityRates {
    double minus = 0.0;  // Γ₋ = g²κ / (κ²/4 + (ω + Δ_b)²), phonon-lowering
    double plus = 0.0;   // Γ₊ = g²κ / (κ²/4 + (ω - Δ_b)²), phonon-raising
};

CavityRates cavity_rates(double omega, const SystemParams& params);

// One polariton jump |n,α⟩ → |n-1,β⟩ with its rates.
struct Transition {
    TransitionCoefficient coeff;
    double omega = 0.0;   // ω_{nαβ} = ω_{n,α} - ω_{n-1,β}
    double n_th = 0.0;    // Bose factor at |ω|; zero when |ω| < kZeroFrequency
    double gamma0 = 0.0;  // |A|² γ_m + |σ|² γ_τ
    CavityRates cavity;
};

struct TransitionTable {
    SpaceDims space;
    std::vector<Transition> entries;
};

TransitionTable build_transition_table(const PolaritonBasis& basis, const SystemParams& params);

enum class BasisTag { Polariton, BareProduct };

const char* to_string(BasisTag tag);

struct Dissipator {
    SparseMatrix jump;
    double rate = 0.0;
    std::string label;
};

// dρ/dt = -i[H, ρ] + Σ_k (Γ_k/2) 𝓛(o_k) ρ
class Generator {
public:
    Generator(Operator hamiltonian, std::vector<Dissipator> dissipators, BasisTag basis);

    const Operator& hamiltonian() const { return hamiltonian_; }
    const std::vector<Dissipator>& dissipators() const { return dissipators_; }
    BasisTag basis() const { return basis_; }
    const SpaceDims& space() const { return hamiltonian_.space; }

    // Direct (unoptimized) evaluation of dρ/dt.
    Matrix apply(const Matrix& rho) const;

    // The same generator expressed in another basis: X → U X U†.
    Generator in_basis(const Matrix& u, BasisTag tag) const;

    bool hamiltonian_is_diagonal(double tol = 1e-12) const;

private:
    Operator hamiltonian_;
    std::vector<Dissipator> dissipators_;
    BasisTag basis_;
};

// Secular polariton master equation with diagonal H_τ:
//   Σ (Γ₀/2)[(n_th+1)𝓛(O) + n_th 𝓛(O†)] + Σ |A|²[(Γ₋/2)𝓛(O) + (Γ₊/2)𝓛(O†)],
// O = |n-1,β⟩⟨n,α|. Transitions with ω < 0 use |ω| and exchange O ↔ O† in the
// thermal part.
Generator build_polariton_generator(const PolaritonBasis& basis, const TransitionTable& table,
                                    const SystemParams& params);

// Bare-product-basis reference model: H_JC with independent thermal baths on b
// and σ₋ and cavity cooling of b at the bare resonator frequency.
Generator build_simple_generator(const SystemParams& params, const SpaceDims& space);

}  // namespace tlscool
