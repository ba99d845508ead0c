#include "tlscool/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace tlscool {

const char* to_string(Method m) { return m == Method::Rk4 ? "rk4" : "dopri5"; }

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument(fmt::format("integrator dt must be > 0, got {}", dt));
    if (!(rel_tol > 0.0)) throw std::invalid_argument(fmt::format("integrator rel_tol must be > 0, got {}", rel_tol));
    if (!(abs_tol > 0.0)) throw std::invalid_argument(fmt::format("integrator abs_tol must be > 0, got {}", abs_tol));
    if (guard_interval < 1)
        throw std::invalid_argument(fmt::format("integrator guard_interval must be >= 1, got {}", guard_interval));
    if (!(resolution > 0.0)) throw std::invalid_argument("integrator resolution must be > 0");
}

namespace {

struct RecycleEntry {
    int out_row;
    int out_col;
    int in_row;
    int in_col;
    Complex coef;
};

bool same_operator(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.nonZeros() != b.nonZeros()) return false;
    const SparseMatrix diff = a - b;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
            if (it.value() != Complex(0.0, 0.0)) return false;
    return true;
}

}  // namespace

// Compiled form of a generator:
//   L ρ = -i(H_eff ρ - ρ H_eff†) + Σ r J ρ J†,   H_eff = H - i K,   K = Σ (r/2) J†J.
// Jumps with few nonzeros contribute explicit (out, in) index pairs; larger
// ones are applied as sparse-dense products.
//
// The rotating frame is taken with respect to D = diag(H):
//   ρ̃ = e^{iDs} ρ e^{-iDs},   dρ̃/ds = e^{iDs} L_{H-D}(ρ) e^{-iDs}.
struct Propagator::Kernel {
    SparseMatrix heff;  // lab frame, H - iK
    SparseMatrix hrot;  // rotating frame, (H - D) - iK
    SparseMatrix heff_adj, hrot_adj;
    std::vector<RecycleEntry> recycle;
    struct WideJump {
        SparseMatrix jump;
        SparseMatrix adjoint;
        double rate;
    };
    std::vector<WideJump> wide_jumps;
    Eigen::VectorXd energies;  // diag(H), shifted to min 0
    bool rotating = false;
    double max_frequency = 0.0;  // largest |eigenvalue| of H
    double max_coupling = 0.0;   // largest |eigenvalue| of H - D
    double max_decay = 0.0;

    // Fast rotating path, used when K is diagonal and every jump is narrow:
    // the decay term is phase-free and every other entry carries its own
    // beat frequency.
    bool fast = false;
    Eigen::VectorXd kdiag;
    std::vector<double> recycle_beat;
    struct Coupling {
        int row;
        int col;
        Complex value;
        double beat;
    };
    std::vector<Coupling> couplings;  // off-diagonal entries of H

    Matrix lab, work, wide_tmp;
    Eigen::VectorXcd phase;

    Kernel(const Generator& g, bool interaction_picture) {
        const int d = g.space().dim();

        // Merge identical jump operators.
        std::vector<std::pair<SparseMatrix, double>> merged;
        for (const Dissipator& k : g.dissipators()) {
            if (k.rate == 0.0) continue;
            auto it = std::find_if(merged.begin(), merged.end(),
                                   [&](const auto& m) { return same_operator(m.first, k.jump); });
            if (it == merged.end())
                merged.emplace_back(k.jump, k.rate);
            else
                it->second += k.rate;
        }

        SparseMatrix kmat(d, d);
        for (const auto& [jump, rate] : merged) {
            SparseMatrix jdj = SparseMatrix(jump.adjoint()) * jump;
            kmat += (0.5 * rate) * jdj;

            if (jump.nonZeros() <= d) {
                std::vector<std::tuple<int, int, Complex>> nz;
                for (int r = 0; r < jump.outerSize(); ++r)
                    for (SparseMatrix::InnerIterator it(jump, r); it; ++it)
                        nz.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
                // r J_ab ρ_bd conj(J_cd) → out(a, c)
                for (const auto& [a, b, jab] : nz)
                    for (const auto& [c, dd, jcd] : nz)
                        recycle.push_back({a, c, b, dd, rate * jab * std::conj(jcd)});
            } else {
                wide_jumps.push_back({jump, SparseMatrix(jump.adjoint()), rate});
            }
        }
        std::sort(recycle.begin(), recycle.end(), [](const RecycleEntry& x, const RecycleEntry& y) {
            return std::tie(x.out_col, x.out_row, x.in_col, x.in_row) <
                   std::tie(y.out_col, y.out_row, y.in_col, y.in_row);
        });
        std::vector<RecycleEntry> compact;
        for (const RecycleEntry& e : recycle) {
            if (!compact.empty()) {
                RecycleEntry& last = compact.back();
                if (last.out_row == e.out_row && last.out_col == e.out_col && last.in_row == e.in_row &&
                    last.in_col == e.in_col) {
                    last.coef += e.coef;
                    continue;
                }
            }
            compact.push_back(e);
        }
        recycle = std::move(compact);

        kmat.prune(Complex(0.0, 0.0));
        const SparseMatrix kdis = Complex(0.0, -1.0) * kmat;
        const Matrix& hd = g.hamiltonian().matrix;
        const SparseMatrix h = hd.sparseView();
        heff = h + kdis;
        heff_adj = heff.adjoint();

        Matrix off = hd;
        off.diagonal().setZero();
        hrot = SparseMatrix(off.sparseView()) + kdis;
        hrot_adj = hrot.adjoint();

        for (int k = 0; k < d; ++k) max_decay = std::max(max_decay, 2.0 * std::abs(kmat.coeff(k, k)));
        Eigen::SelfAdjointEigenSolver<Matrix> es(hd, Eigen::EigenvaluesOnly);
        max_frequency = es.eigenvalues().cwiseAbs().maxCoeff();
        if (off.cwiseAbs().maxCoeff() > 0.0) {
            Eigen::SelfAdjointEigenSolver<Matrix> ev(off, Eigen::EigenvaluesOnly);
            max_coupling = ev.eigenvalues().cwiseAbs().maxCoeff();
        }

        rotating = interaction_picture;
        if (rotating) {
            energies = hd.diagonal().real();
            energies.array() -= energies.minCoeff();

            bool k_diagonal = true;
            for (int r = 0; r < kmat.outerSize(); ++r)
                for (SparseMatrix::InnerIterator it(kmat, r); it; ++it)
                    if (it.row() != it.col()) k_diagonal = false;
            fast = k_diagonal && wide_jumps.empty();
            if (fast) {
                kdiag = kmat.diagonal().real();
                auto beat = [&](double w) { return std::abs(w) < 1e-12 ? 0.0 : w; };
                for (const RecycleEntry& e : recycle)
                    recycle_beat.push_back(beat(energies(e.out_row) - energies(e.out_col) - energies(e.in_row) +
                                                energies(e.in_col)));
                for (int l = 0; l < d; ++l)
                    for (int k = 0; k < d; ++k)
                        if (k != l && hd(k, l) != Complex(0.0, 0.0))
                            couplings.push_back({k, l, hd(k, l), beat(energies(k) - energies(l))});
            }
        }

        lab.resize(d, d);
        work.resize(d, d);
        wide_tmp.resize(d, d);
        phase.resize(d);
    }

    // out = -i(A ρ - ρ A†) + Σ r J ρ J†
    void lindblad(const SparseMatrix& a, const SparseMatrix& a_adj, const Matrix& rho, Matrix& out) {
        const Complex i(0.0, 1.0);
        out.noalias() = -i * (a * rho);
        work.noalias() = rho * a_adj;
        out.noalias() += i * work;
        for (const RecycleEntry& e : recycle) out(e.out_row, e.out_col) += e.coef * rho(e.in_row, e.in_col);
        for (const WideJump& w : wide_jumps) {
            wide_tmp.noalias() = w.jump * rho;
            work.noalias() = wide_tmp * w.adjoint;
            out.noalias() += w.rate * work;
        }
    }

    void rhs_fast(double s, const Matrix& rho, Matrix& out) {
        const int d = static_cast<int>(energies.size());
        for (int l = 0; l < d; ++l)
            for (int k = 0; k < d; ++k) out(k, l) = -(kdiag(k) + kdiag(l)) * rho(k, l);
        for (std::size_t n = 0; n < recycle.size(); ++n) {
            const RecycleEntry& e = recycle[n];
            const Complex c = recycle_beat[n] == 0.0 ? e.coef : e.coef * std::polar(1.0, recycle_beat[n] * s);
            out(e.out_row, e.out_col) += c * rho(e.in_row, e.in_col);
        }
        // -i(Ṽρ - ρṼ†), Ṽ_kl = V_kl e^{i(E_k - E_l)s}
        const Complex i(0.0, 1.0);
        for (const Coupling& c : couplings) {
            const Complex v = c.beat == 0.0 ? c.value : c.value * std::polar(1.0, c.beat * s);
            out.row(c.row) -= (i * v) * rho.row(c.col);
            out.col(c.row) += (i * std::conj(v)) * rho.col(c.col);
        }
    }

    // Right-hand side at local time s.
    void rhs(double s, const Matrix& rho, Matrix& out) {
        if (!rotating) {
            lindblad(heff, heff_adj, rho, out);
            return;
        }
        if (fast) {
            rhs_fast(s, rho, out);
            return;
        }
        const int d = static_cast<int>(energies.size());
        for (int k = 0; k < d; ++k) phase(k) = std::polar(1.0, energies(k) * s);
        // lab(k,l) = conj(φ_k) φ_l ρ̃(k,l)
        for (int l = 0; l < d; ++l)
            for (int k = 0; k < d; ++k) lab(k, l) = std::conj(phase(k)) * phase(l) * rho(k, l);
        lindblad(hrot, hrot_adj, lab, out);
        for (int l = 0; l < d; ++l)
            for (int k = 0; k < d; ++k) out(k, l) *= phase(k) * std::conj(phase(l));
    }

    // ρ̃(s) → ρ(s)
    void to_lab(double s, Matrix& rho) {
        if (!rotating) return;
        const int d = static_cast<int>(energies.size());
        for (int k = 0; k < d; ++k) phase(k) = std::polar(1.0, energies(k) * s);
        for (int l = 0; l < d; ++l)
            for (int k = 0; k < d; ++k) rho(k, l) *= std::conj(phase(k)) * phase(l);
    }
};

Propagator::Propagator(const Generator& generator, IntegratorConfig config)
    : config_(config), space_(generator.space()) {
    config_.validate();
    kernel_ = std::make_unique<Kernel>(generator, config_.interaction_picture);
    if (config_.method == Method::Rk4) {
        const double scale = stiffness_scale();
        if (config_.dt * scale > config_.resolution)
            throw std::invalid_argument(fmt::format(
                "dt = {} does not resolve the fastest {} scale {:.4g} (dt * scale = {:.3g} > {})", config_.dt,
                config_.interaction_picture ? "decay/coupling" : "frequency", scale, config_.dt * scale, config_.resolution));
    }
}

Propagator::~Propagator() = default;
Propagator::Propagator(Propagator&&) noexcept = default;
Propagator& Propagator::operator=(Propagator&&) noexcept = default;

double Propagator::stiffness_scale() const {
    return kernel_->rotating ? std::max(kernel_->max_decay, kernel_->max_coupling) : kernel_->max_frequency;
}

void Propagator::check_guards(const Matrix& rho, long step, double time) const {
    const DensityMatrix state(rho, space_);
    StepReport report{step, time, {}};
    report.validity.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
    report.validity.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    report.validity.min_eigenvalue = state.min_eigenvalue();
    const GuardLimits& g = config_.guards;
    auto fail = [&](const char* what, double value, double limit) {
        throw PropagationError(fmt::format("{} {:.3e} violates limit {:.1e} at step {} (t = {:.6g})", what, value,
                                           limit, step, time),
                               report);
    };
    if (!(report.validity.trace_error <= g.trace)) fail("trace drift", report.validity.trace_error, g.trace);
    if (!(report.validity.hermiticity_error <= g.hermiticity))
        fail("Hermiticity drift", report.validity.hermiticity_error, g.hermiticity);
    if (!(report.validity.min_eigenvalue >= g.min_eigenvalue))
        fail("minimum eigenvalue", report.validity.min_eigenvalue, g.min_eigenvalue);
}

Matrix Propagator::advance_rk4(Matrix rho, double duration) {
    Kernel& k = *kernel_;
    const double dt = config_.dt;
    long full = static_cast<long>(std::floor(duration / dt));
    double last = duration - full * dt;
    // Fold a remainder lost to rounding into the final full step.
    if (last <= 1e-12 * dt) {
        last = 0.0;
    } else if (full > 0 && last >= dt * (1.0 - 1e-12)) {
        ++full;
        last = 0.0;
    }
    const long steps = full + (last > 0.0 ? 1 : 0);

    const int d = space_.dim();
    Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
    double s = 0.0;
    for (long n = 0; n < steps; ++n) {
        const double h = (n < full) ? dt : last;
        k.rhs(s, rho, k1);
        tmp.noalias() = rho + (0.5 * h) * k1;
        k.rhs(s + 0.5 * h, tmp, k2);
        tmp.noalias() = rho + (0.5 * h) * k2;
        k.rhs(s + 0.5 * h, tmp, k3);
        tmp.noalias() = rho + h * k3;
        k.rhs(s + h, tmp, k4);
        rho.noalias() += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s = (n + 1 == steps) ? duration : (n + 1) * dt;
        ++total_steps_;
        if ((n + 1) % config_.guard_interval == 0) check_guards(rho, n + 1, s);
    }
    k.to_lab(duration, rho);
    return rho;
}

Matrix Propagator::advance_adaptive(Matrix rho, double duration) {
    // Dormand-Prince 5(4) with first-same-as-last.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    Kernel& k = *kernel_;
    const int d = space_.dim();
    Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d), y(d, d), err(d, d);
    double s = 0.0;
    double h = std::min(config_.dt, duration);
    long accepted = 0;
    if (duration > 0.0) k.rhs(s, rho, k1);
    while (s < duration) {
        const bool final_step = s + h >= duration * (1.0 - 1e-14);
        if (final_step) h = duration - s;
        y.noalias() = rho + h * (a21 * k1);
        k.rhs(s + c2 * h, y, k2);
        y.noalias() = rho + h * (a31 * k1 + a32 * k2);
        k.rhs(s + c3 * h, y, k3);
        y.noalias() = rho + h * (a41 * k1 + a42 * k2 + a43 * k3);
        k.rhs(s + c4 * h, y, k4);
        y.noalias() = rho + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        k.rhs(s + c5 * h, y, k5);
        y.noalias() = rho + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        k.rhs(s + h, y, k6);
        y.noalias() = rho + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k.rhs(s + h, y, k7);
        err.noalias() = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double norm = 0.0;
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) {
                const double scale = config_.abs_tol + config_.rel_tol * std::max(std::abs(rho(i, j)), std::abs(y(i, j)));
                norm = std::max(norm, std::abs(err(i, j)) / scale);
            }

        if (norm <= 1.0) {
            s = final_step ? duration : s + h;
            rho.swap(y);
            k1.swap(k7);
            ++accepted;
            ++total_steps_;
            if (accepted % config_.guard_interval == 0) check_guards(rho, accepted, s);
        }
        const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        h *= factor;
        if (h < 1e-14 * std::max(1.0, duration))
            throw PropagationError(fmt::format("adaptive step size underflow at t = {:.6g}", s), {accepted, s, {}});
    }
    k.to_lab(duration, rho);
    return rho;
}

DensityMatrix Propagator::advance(const DensityMatrix& rho, double duration) {
    if (!(duration >= 0.0)) throw std::invalid_argument(fmt::format("propagate: negative duration {}", duration));
    if (!(rho.space() == space_)) throw std::invalid_argument("propagate: state and generator spaces differ");
    if (duration == 0.0) return rho;
    Matrix out = config_.method == Method::Rk4 ? advance_rk4(rho.matrix(), duration)
                                               : advance_adaptive(rho.matrix(), duration);
    check_guards(out, -1, duration);
    return {std::move(out), space_};
}

DensityMatrix propagate(const DensityMatrix& rho, const Generator& generator, double duration,
                        const IntegratorConfig& config) {
    if (duration == 0.0) return rho;
    Propagator p(generator, config);
    return p.advance(rho, duration);
}

ConvergenceReport convergence_sweep(const std::function<double(double)>& run, std::vector<double> dt_list,
                                    double tolerance) {
    std::sort(dt_list.begin(), dt_list.end(), std::greater<>());
    dt_list.erase(std::unique(dt_list.begin(), dt_list.end()), dt_list.end());
    if (dt_list.size() < 2) throw std::invalid_argument("convergence_sweep needs at least two distinct dt values");
    for (double dt : dt_list)
        if (!(dt > 0.0)) throw std::invalid_argument("convergence_sweep: dt values must be positive");

    ConvergenceReport report;
    report.tolerance = tolerance;
    report.dts = dt_list;
    for (double dt : dt_list) report.values.push_back(run(dt));

    const auto& v = report.values;
    for (std::size_t i = 0; i + 2 < v.size(); ++i) {
        const double coarse = std::abs(v[i] - v[i + 1]);
        const double fine = std::abs(v[i + 1] - v[i + 2]);
        const double ratio = dt_list[i] / dt_list[i + 1];
        report.observed_orders.push_back(fine > 0.0 ? std::log(coarse / fine) / std::log(ratio)
                                                    : std::numeric_limits<double>::infinity());
    }
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (std::abs(v[i] - v[i + 1]) < tolerance) {
            report.converged_dt = dt_list[i];
            break;
        }
    return report;
}

}  // namespace tlscool
