#include "tlscool/polariton.hpp"

#include <fmt/core.h>

#include <cmath>
#include <stdexcept>

namespace tlscool {

void SystemParams::validate() const {
    auto require = [](bool ok, const char* field, const char* rule, double value) {
        if (!ok) throw std::invalid_argument(fmt::format("{} must be {}, got {}", field, rule, value));
    };
    require(std::isfinite(omega_z), "omega_z", "finite", omega_z);
    require(std::isfinite(delta_l), "delta_l", "finite", delta_l);
    require(lambda >= 0.0 && std::isfinite(lambda), "lambda", ">= 0", lambda);
    require(g >= 0.0 && std::isfinite(g), "g", ">= 0", g);
    require(kappa >= 0.0 && std::isfinite(kappa), "kappa", ">= 0", kappa);
    require(gamma_m >= 0.0 && std::isfinite(gamma_m), "gamma_m", ">= 0", gamma_m);
    require(gamma_tau >= 0.0 && std::isfinite(gamma_tau), "gamma_tau", ">= 0", gamma_tau);
    require(theta > 0.0 && std::isfinite(theta), "theta", "> 0", theta);
    if (delta_b) require(std::isfinite(*delta_b), "delta_b", "finite", *delta_b);
    // Γ∓ has a pole at κ = 0 on resonance; only reject the genuinely singular case.
    require(kappa > 0.0 || g == 0.0, "kappa", "> 0 when g > 0", kappa);
}

const char* to_string(Branch b) {
    switch (b) {
        case Branch::Ground: return "g";
        case Branch::Plus: return "+";
        case Branch::Minus: return "-";
        case Branch::Top: return "top";
    }
    return "?";
}

namespace {

// cos/sin(δ_n/2) from cos(δ_n/2) = sqrt((ω_n + δω) / 2ω_n). The larger of the
// two is taken from its square root and the other from 2cs = 2λ√n / ω_n,
// which avoids cancellation when |δω| ≫ λ√n.
Mixing doublet_mixing(double detuning, double lambda, int n) {
    const double coupling = lambda * std::sqrt(static_cast<double>(n));
    const double omega_n = std::sqrt(detuning * detuning + 4.0 * coupling * coupling);
    if (omega_n == 0.0) return {1.0, 0.0};
    Mixing m;
    if (detuning >= 0.0) {
        m.cos_half = std::sqrt((omega_n + detuning) / (2.0 * omega_n));
        m.sin_half = coupling / (omega_n * m.cos_half);
    } else {
        m.sin_half = std::sqrt((omega_n - detuning) / (2.0 * omega_n));
        m.cos_half = coupling / (omega_n * m.sin_half);
    }
    return m;
}

}  // namespace

PolaritonBasis::PolaritonBasis(const SystemParams& params, const SpaceDims& space)
    : params_(params), space_(space), transform_(Matrix::Zero(space.dim(), space.dim())) {
    params_.validate();
    const int nmax = space.nmax();
    const double wz = params.omega_z;
    const double dw = params.detuning();

    levels_.reserve(space.dim());
    mixing_.resize(nmax + 1);

    levels_.push_back({0, Branch::Ground, -0.5 * wz});
    transform_(0, space.index(0, TlsLevel::Down)) = 1.0;

    for (int n = 1; n <= nmax; ++n) {
        // Manifold {|n,↓⟩, |n-1,↑⟩}: diag (n - ω_z/2, n - 1 + ω_z/2), off-diag λ√n.
        const double a = n - 0.5 * wz;
        const double b = (n - 1) + 0.5 * wz;
        const double off = params.lambda * std::sqrt(static_cast<double>(n));
        const double mean = 0.5 * (a + b);
        const double half = std::sqrt(0.25 * (a - b) * (a - b) + off * off);

        const Mixing m = doublet_mixing(dw, params.lambda, n);
        mixing_[n] = m;

        const int plus = 2 * n - 1;
        const int minus = 2 * n;
        levels_.push_back({n, Branch::Plus, mean + half});
        levels_.push_back({n, Branch::Minus, mean - half});

        // |n,+⟩ = c|n,↓⟩ + s|n-1,↑⟩,  |n,-⟩ = s|n,↓⟩ - c|n-1,↑⟩
        const int down = space.index(n, TlsLevel::Down);
        const int up = space.index(n - 1, TlsLevel::Up);
        transform_(plus, down) = m.cos_half;
        transform_(plus, up) = m.sin_half;
        transform_(minus, down) = m.sin_half;
        transform_(minus, up) = -m.cos_half;
    }

    levels_.push_back({nmax + 1, Branch::Top, nmax + 0.5 * wz});
    transform_(space.dim() - 1, space.index(nmax, TlsLevel::Up)) = 1.0;

    for (int n = 1; n <= nmax; ++n)
        if (levels_[2 * n - 1].energy < levels_[2 * n].energy)
            throw std::logic_error(fmt::format("polariton branch ordering violated at n = {}", n));
}

int PolaritonBasis::index(int manifold, Branch branch) const {
    switch (branch) {
        case Branch::Ground:
            if (manifold == 0) return 0;
            break;
        case Branch::Plus:
            if (manifold >= 1 && manifold <= space_.nmax()) return 2 * manifold - 1;
            break;
        case Branch::Minus:
            if (manifold >= 1 && manifold <= space_.nmax()) return 2 * manifold;
            break;
        case Branch::Top:
            if (manifold == space_.nmax() + 1) return space_.dim() - 1;
            break;
    }
    throw std::out_of_range(fmt::format("no polariton level ({}, {})", manifold, to_string(branch)));
}

double PolaritonBasis::splitting(int n) const {
    const double dw = params_.detuning();
    return std::sqrt(dw * dw + 4.0 * params_.lambda * params_.lambda * n);
}

Operator jc_hamiltonian(const SystemParams& params, const SpaceDims& space) {
    const Operator b = build_ladder(space);
    const TlsOperators tls = build_tls_ops(space);
    Matrix h = b.matrix.adjoint() * b.matrix + 0.5 * params.omega_z * tls.sigma_z.matrix +
               params.lambda * (tls.sigma_plus.matrix * b.matrix + b.matrix.adjoint() * tls.sigma_minus.matrix);
    return {std::move(h), space};
}

PolaritonBasis build_polariton_basis(const SystemParams& params, const SpaceDims& space) {
    return PolaritonBasis(params, space);
}

std::vector<TransitionCoefficient> transition_coefficients(const PolaritonBasis& basis) {
    const SpaceDims& space = basis.space();
    const Matrix b = basis.to_polariton(build_ladder(space).matrix);
    const Matrix sm = basis.to_polariton(build_tls_ops(space).sigma_minus.matrix);

    const auto& levels = basis.levels();
    std::vector<TransitionCoefficient> out;
    for (int from = 0; from < basis.dim(); ++from) {
        const int n = levels[from].manifold;
        if (n == 0) continue;
        for (int to = 0; to < basis.dim(); ++to) {
            if (levels[to].manifold != n - 1) continue;
            out.push_back({n, from, to, b(to, from).real(), sm(to, from).real()});
        }
    }
    return out;
}

Operator pulse_matrix(const PolaritonBasis& basis) {
    return {basis.to_polariton(build_tls_ops(basis.space()).sigma_z.matrix), basis.space()};
}

}  // namespace tlscool
