#include "tlscool/dissipation.hpp"

#include <fmt/core.h>

#include <cmath>
#include <stdexcept>

namespace tlscool {

double bose_occupation(double omega, double theta) {
    if (!(omega > 0.0)) throw std::invalid_argument(fmt::format("bose_occupation: omega must be > 0, got {}", omega));
    if (!(theta > 0.0)) throw std::invalid_argument(fmt::format("bose_occupation: theta must be > 0, got {}", theta));
    return 1.0 / std::expm1(omega * theta);
}

CavityRates cavity_rates(double omega, const SystemParams& params) {
    const double num = params.g * params.g * params.kappa;
    if (num == 0.0) return {};
    const double delta_b = params.resolved_delta_b();
    const double k2 = 0.25 * params.kappa * params.kappa;
    return {num / (k2 + (omega + delta_b) * (omega + delta_b)), num / (k2 + (omega - delta_b) * (omega - delta_b))};
}

TransitionTable build_transition_table(const PolaritonBasis& basis, const SystemParams& params) {
    TransitionTable table{basis.space(), {}};
    const auto& levels = basis.levels();
    for (const TransitionCoefficient& c : transition_coefficients(basis)) {
        Transition t;
        t.coeff = c;
        t.omega = levels[c.from].energy - levels[c.to].energy;
        if (std::abs(t.omega) >= kZeroFrequency) t.n_th = bose_occupation(std::abs(t.omega), params.theta);
        t.gamma0 = c.ladder * c.ladder * params.gamma_m + c.tls * c.tls * params.gamma_tau;
        t.cavity = cavity_rates(t.omega, params);
        table.entries.push_back(t);
    }
    return table;
}

const char* to_string(BasisTag tag) { return tag == BasisTag::Polariton ? "polariton" : "bare-product"; }

Generator::Generator(Operator hamiltonian, std::vector<Dissipator> dissipators, BasisTag basis)
    : hamiltonian_(std::move(hamiltonian)), dissipators_(std::move(dissipators)), basis_(basis) {
    const int d = hamiltonian_.space.dim();
    for (const Dissipator& k : dissipators_) {
        if (!(k.rate >= 0.0) || !std::isfinite(k.rate))
            throw std::invalid_argument(fmt::format("dissipator '{}' has invalid rate {}", k.label, k.rate));
        if (k.jump.rows() != d || k.jump.cols() != d)
            throw std::invalid_argument(fmt::format("dissipator '{}' has wrong dimension", k.label));
    }
}

Matrix Generator::apply(const Matrix& rho) const {
    const Complex i(0.0, 1.0);
    const Matrix& h = hamiltonian_.matrix;
    Matrix out = -i * (h * rho - rho * h);
    for (const Dissipator& k : dissipators_) {
        const Matrix o = Matrix(k.jump);
        const Matrix od = o.adjoint();
        const Matrix ood = od * o;
        out += 0.5 * k.rate * (2.0 * o * rho * od - rho * ood - ood * rho);
    }
    return out;
}

Generator Generator::in_basis(const Matrix& u, BasisTag tag) const {
    if (u.rows() != space().dim() || u.cols() != space().dim())
        throw std::invalid_argument("Generator::in_basis: transform has wrong dimension");
    const SparseMatrix us = u.sparseView();
    const SparseMatrix ud = us.adjoint();
    std::vector<Dissipator> rotated;
    rotated.reserve(dissipators_.size());
    for (const Dissipator& k : dissipators_) {
        SparseMatrix j = us * k.jump * ud;
        j.prune(Complex(0.0, 0.0));
        rotated.push_back({std::move(j), k.rate, k.label});
    }
    return {Operator{rotate(u, hamiltonian_.matrix), space()}, std::move(rotated), tag};
}

bool Generator::hamiltonian_is_diagonal(double tol) const {
    const Matrix& h = hamiltonian_.matrix;
    Matrix off = h;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() <= tol;
}

namespace {

SparseMatrix single_entry(int d, int row, int col) {
    SparseMatrix m(d, d);
    m.insert(row, col) = 1.0;
    m.makeCompressed();
    return m;
}

void push_if_positive(std::vector<Dissipator>& out, SparseMatrix jump, double rate, std::string label) {
    if (rate > 0.0) out.push_back({std::move(jump), rate, std::move(label)});
}

}  // namespace

Generator build_polariton_generator(const PolaritonBasis& basis, const TransitionTable& table,
                                    const SystemParams& /*params*/) {
    if (!(table.space == basis.space()))
        throw std::invalid_argument("build_polariton_generator: transition table was built for a different space");
    const int d = basis.dim();

    Matrix h = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) h(k, k) = basis.levels()[k].energy;

    std::vector<Dissipator> dissipators;
    for (const Transition& t : table.entries) {
        const auto& c = t.coeff;
        if (c.from < 0 || c.from >= d || c.to < 0 || c.to >= d)
            throw std::invalid_argument("build_polariton_generator: transition index outside basis");
        const std::string tag = fmt::format("n={} {}->{}", c.manifold, c.from, c.to);
        const SparseMatrix down = single_entry(d, c.to, c.from);  // O
        const SparseMatrix up = single_entry(d, c.from, c.to);    // O†

        if (std::abs(t.omega) >= kZeroFrequency) {
            const bool emitting = t.omega > 0.0;
            push_if_positive(dissipators, emitting ? down : up, t.gamma0 * (t.n_th + 1.0), "thermal-emit " + tag);
            push_if_positive(dissipators, emitting ? up : down, t.gamma0 * t.n_th, "thermal-absorb " + tag);
        }
        const double a2 = c.ladder * c.ladder;
        push_if_positive(dissipators, down, a2 * t.cavity.minus, "cavity-minus " + tag);
        push_if_positive(dissipators, up, a2 * t.cavity.plus, "cavity-plus " + tag);
    }
    return {Operator{std::move(h), basis.space()}, std::move(dissipators), BasisTag::Polariton};
}

Generator build_simple_generator(const SystemParams& params, const SpaceDims& space) {
    params.validate();
    const SparseMatrix b = build_ladder(space).matrix.sparseView();
    const SparseMatrix bd = b.adjoint();
    const SparseMatrix sm = build_tls_ops(space).sigma_minus.matrix.sparseView();
    const SparseMatrix sp = sm.adjoint();

    std::vector<Dissipator> dissipators;
    const double n_m = bose_occupation(1.0, params.theta);
    push_if_positive(dissipators, b, params.gamma_m * (n_m + 1.0), "resonator-emit");
    push_if_positive(dissipators, bd, params.gamma_m * n_m, "resonator-absorb");

    const double wz = params.omega_z;
    if (std::abs(wz) >= kZeroFrequency) {
        const double n_z = bose_occupation(std::abs(wz), params.theta);
        const bool emitting = wz > 0.0;
        push_if_positive(dissipators, emitting ? sm : sp, params.gamma_tau * (n_z + 1.0), "tls-emit");
        push_if_positive(dissipators, emitting ? sp : sm, params.gamma_tau * n_z, "tls-absorb");
    }

    const CavityRates cav = cavity_rates(1.0, params);
    push_if_positive(dissipators, b, cav.minus, "cavity-minus");
    push_if_positive(dissipators, bd, cav.plus, "cavity-plus");

    return {jc_hamiltonian(params, space), std::move(dissipators), BasisTag::BareProduct};
}

}  // namespace tlscool
