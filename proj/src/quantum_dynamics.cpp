#include "spinsim/quantum_dynamics.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

namespace spinsim {

namespace {

constexpr double kWarnCourant = 0.05;
constexpr double kMaxCourant = 0.5;

void check_step_size(double dt, double spectral_bound) {
    const double courant = dt * spectral_bound;
    if (courant > kMaxCourant)
        throw NumericalError("step-size violation: dt * spectral_radius = " +
                             std::to_string(courant) + " exceeds 0.5");
    if (courant > kWarnCourant)
        std::fprintf(stderr, "spinsim: warning: dt * spectral_radius = %.3g > 0.05; "
                             "results may be inaccurate\n", courant);
}

void require_hermitian(const Matrix& H, const char* what) {
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, H.cwiseAbs().maxCoeff()))
        throw NumericalError(std::string(what) + " requires a Hermitian matrix");
}

double form_scale(DampedForm form, double lambda) {
    return form == DampedForm::LLG ? 1.0 / (1.0 + lambda * lambda) : 1.0;
}

// Stage derivative of the damped flow; <H> taken self-consistently from the
// (possibly un-normalized) stage state, so the flow conserves the norm for
// any input.
void pure_rhs(const Vector& psi, const Matrix& H, double lambda, double scale, Vector& hpsi,
              Vector& out) {
    hpsi.noalias() = H * psi;
    const double nrm2 = psi.squaredNorm();
    const double h_exp = psi.dot(hpsi).real() / nrm2;
    out = scale * (Complex(0.0, -1.0) * hpsi - lambda * (hpsi - h_exp * psi));
}

struct SampleSchedule {
    long n_steps;
    double dt_last;  // partial final step, 0 when t_end is a step multiple
};

SampleSchedule make_schedule(double t_end, double dt) {
    if (t_end < 0.0) throw ConfigError("t_end must be non-negative");
    const long whole = static_cast<long>(std::floor(t_end / dt + 1e-9));
    const double rem = t_end - whole * dt;
    return {whole, rem > 1e-9 * std::max(1.0, t_end) ? rem : 0.0};
}

template <typename State, typename Rhs, typename PostStep, typename Observe>
void rk4_drive(State& y, double t_end, const IntegratorConfig& cfg, Rhs&& rhs,
               PostStep&& post_step, Observe&& observe) {
    const auto schedule = make_schedule(t_end, cfg.dt);
    const long total = schedule.n_steps + (schedule.dt_last > 0.0 ? 1 : 0);

    State k1 = y, k2 = y, k3 = y, k4 = y, work = y;
    observe(0.0, y, 0);
    for (long step = 0; step < total; ++step) {
        const double dt = (step < schedule.n_steps) ? cfg.dt : schedule.dt_last;
        const double t = step * cfg.dt;  // exact while on the uniform grid
        rhs(y, t, step, k1);
        work = y + (0.5 * dt) * k1;
        rhs(work, t + 0.5 * dt, step, k2);
        work = y + (0.5 * dt) * k2;
        rhs(work, t + 0.5 * dt, step, k3);
        work = y + dt * k3;
        rhs(work, t + dt, step, k4);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        post_step(y);
        const bool last = step + 1 == total;
        if (last || ((step + 1) % cfg.sample_every == 0))
            observe(last ? t_end : (step + 1) * cfg.dt, y, step + 1);
    }
}

template <typename HamiltonianAt>
void evolve_pure_impl(Vector& psi, HamiltonianAt&& h_at, double lambda, DampedForm form,
                      const IntegratorConfig& cfg, double t_end, const PureObserver& observer) {
    cfg.validate();
    const double scale = form_scale(form, lambda);
    Vector hpsi(psi.size());
    double last_norm = psi.norm();

    auto rhs = [&](const Vector& y, double t, std::uint64_t step, Vector& out) {
        pure_rhs(y, h_at(t, step), lambda, scale, hpsi, out);
    };
    auto post = [&](Vector& y) {
        last_norm = y.norm();
        if (!std::isfinite(last_norm))
            throw NumericalError("pure-state evolution produced non-finite amplitudes");
        if (cfg.renormalize_each_step) y /= last_norm;
    };
    auto observe = [&](double t, const Vector& y, long) {
        if (observer) observer(t, y, last_norm);
    };
    rk4_drive(psi, t_end, cfg, rhs, post, observe);
}

template <typename HamiltonianAt>
void evolve_density_impl(Matrix& rho, HamiltonianAt&& h_at, double lambda, DampedForm form,
                         const IntegratorConfig& cfg, double t_end,
                         const DensityObserver& observer) {
    cfg.validate();
    const double scale = form_scale(form, lambda);

    auto rhs = [&](const Matrix& y, double t, std::uint64_t step, Matrix& out) {
        out = scale * liouville_rhs(y, h_at(t, step), lambda);
    };
    auto post = [&](Matrix& y) {
        const double trace = y.trace().real();
        if (!std::isfinite(y.cwiseAbs().sum()))
            throw NumericalError("density evolution produced non-finite entries");
        if (cfg.renormalize_each_step) y /= trace;
    };
    auto observe = [&](double t, const Matrix& y, long) {
        if (observer) observer(t, y);
    };
    rk4_drive(rho, t_end, cfg, rhs, post, observe);
}

}  // namespace

void IntegratorConfig::validate() const {
    if (dt <= 0.0) throw ConfigError("integrator dt must be positive");
    if (sample_every < 1) throw ConfigError("sample_every must be at least 1");
}

Vector tdse_rhs_ll(const Vector& psi, const Matrix& H, double lambda) {
    if (H.rows() != psi.size()) throw DimensionError("state/Hamiltonian dimension mismatch");
    Vector hpsi(psi.size()), out(psi.size());
    pure_rhs(psi, H, lambda, 1.0, hpsi, out);
    return out;
}

Vector tdse_rhs_llg(const Vector& psi, const Matrix& H, double lambda) {
    return tdse_rhs_ll(psi, H, lambda) / (1.0 + lambda * lambda);
}

void evolve_pure(Vector& psi, const HamiltonianBuilder& hamiltonian, double lambda,
                 DampedForm form, const IntegratorConfig& cfg, double t_end,
                 const PureObserver& observer, const NoiseProvider& noise) {
    check_step_size(cfg.dt, hamiltonian.spectral_radius_bound());
    if (!hamiltonian.time_dependent() && !noise) {
        const Matrix& h_static = hamiltonian.static_part();
        evolve_pure_impl(
            psi, [&](double, std::uint64_t) -> const Matrix& { return h_static; }, lambda,
            form, cfg, t_end, observer);
        return;
    }

    Matrix scratch;
    std::vector<Vec3> fields;
    std::uint64_t fields_step = ~std::uint64_t{0};
    std::uint64_t assembled_step = ~std::uint64_t{0};
    double assembled_t = std::nan("");
    auto h_at = [&](double t, std::uint64_t step) -> const Matrix& {
        if (noise && step != fields_step) {
            fields = noise(step);
            fields_step = step;
        }
        // RK4 revisits stage times; skip identical rebuilds.
        if (step == assembled_step && (!hamiltonian.time_dependent() || t == assembled_t))
            return scratch;
        hamiltonian.assemble(t, noise ? &fields : nullptr, scratch);
        assembled_step = step;
        assembled_t = t;
        return scratch;
    };
    evolve_pure_impl(psi, h_at, lambda, form, cfg, t_end, observer);
}

void evolve_pure(Vector& psi, const Matrix& H, double lambda, DampedForm form,
                 const IntegratorConfig& cfg, double t_end, const PureObserver& observer) {
    check_step_size(cfg.dt, H.cwiseAbs().rowwise().sum().maxCoeff());
    evolve_pure_impl(
        psi, [&](double, std::uint64_t) -> const Matrix& { return H; }, lambda, form, cfg,
        t_end, observer);
}

Vector closed_form_propagate(const Vector& psi0, const Matrix& H, double lambda, double t) {
    require_hermitian(H, "closed_form_propagate");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed in closed_form_propagate");

    const Eigen::VectorXd& energies = solver.eigenvalues();
    const double e_min = energies.minCoeff();

    Vector coeff = solver.eigenvectors().adjoint() * psi0;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) {
        // Shift by E_min: the discarded global factor e^{-lambda E_min t} is
        // restored by the final normalization.
        const double decay = -lambda * (energies[k] - e_min) * t;
        coeff[k] *= std::exp(Complex(decay, -energies[k] * t));
    }
    Vector psi = solver.eigenvectors() * coeff;
    const double norm = psi.norm();
    if (norm == 0.0 || !std::isfinite(norm))
        throw NumericalError("closed-form propagation produced a degenerate state");
    return psi / norm;
}

Matrix liouville_rhs(const Matrix& rho, const Matrix& H, double lambda) {
    if (rho.rows() != H.rows()) throw DimensionError("density/Hamiltonian dimension mismatch");
    Matrix rho_h = rho * H;
    Matrix inner = rho_h - rho_h.adjoint();  // [rho, H] for Hermitian rho, H
    return Complex(0.0, 1.0) * inner - lambda * (rho * inner - inner * rho);
}

void evolve_density(Matrix& rho, const HamiltonianBuilder& hamiltonian, double lambda,
                    DampedForm form, const IntegratorConfig& cfg, double t_end,
                    const DensityObserver& observer) {
    check_step_size(cfg.dt, hamiltonian.spectral_radius_bound());
    Matrix scratch;
    auto h_at = [&](double t, std::uint64_t) -> const Matrix& {
        if (!hamiltonian.time_dependent()) return hamiltonian.static_part();
        hamiltonian.assemble(t, nullptr, scratch);
        return scratch;
    };
    evolve_density_impl(rho, h_at, lambda, form, cfg, t_end, observer);
}

void evolve_density(Matrix& rho, const Matrix& H, double lambda, DampedForm form,
                    const IntegratorConfig& cfg, double t_end, const DensityObserver& observer) {
    check_step_size(cfg.dt, H.cwiseAbs().rowwise().sum().maxCoeff());
    evolve_density_impl(
        rho, [&](double, std::uint64_t) -> const Matrix& { return H; }, lambda, form, cfg,
        t_end, observer);
}

double expectation_rhs_check(const Vector& psi, const Matrix& op, const Matrix& H,
                             double lambda) {
    const Vector dpsi = tdse_rhs_ll(psi, H, lambda);
    const Vector op_psi = op * psi;
    const Complex lhs = dpsi.dot(op_psi) + psi.dot(op * dpsi);

    const Matrix commutator = op * H - H * op;
    const Matrix anticomm = op * H + H * op;
    const double h_exp = psi.dot(H * psi).real();
    const double op_exp = psi.dot(op_psi).real();
    const Complex rhs = Complex(0.0, -1.0) * psi.dot(commutator * psi) -
                        lambda * (psi.dot(anticomm * psi) - 2.0 * h_exp * op_exp);
    return std::abs(lhs - rhs);
}

Matrix thermal_state(const Matrix& H, double beta) {
    require_hermitian(H, "thermal_state");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed in thermal_state");

    const Eigen::VectorXd& energies = solver.eigenvalues();
    const double e_min = energies.minCoeff();
    Eigen::VectorXd weights(energies.size());
    for (Eigen::Index k = 0; k < energies.size(); ++k)
        weights[k] = std::exp(-beta * (energies[k] - e_min));
    weights /= weights.sum();
    return solver.eigenvectors() * weights.asDiagonal().toDenseMatrix().cast<Complex>() *
           solver.eigenvectors().adjoint();
}

StatisticalRunReport evolve_statistical(Matrix& rho, const Matrix& H, double lambda,
                                        const IntegratorConfig& cfg, double t_end,
                                        const DensityObserver& observer) {
    cfg.validate();
    check_step_size(cfg.dt, H.cwiseAbs().rowwise().sum().maxCoeff());
    require_hermitian(H, "evolve_statistical");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed in evolve_statistical");

    const Eigen::VectorXd& energies = solver.eigenvalues();
    const double e_min = energies.minCoeff();

    const auto schedule = make_schedule(t_end, cfg.dt);
    const long total = schedule.n_steps + (schedule.dt_last > 0.0 ? 1 : 0);

    StatisticalRunReport report;
    if (observer) observer(0.0, rho);

    Matrix propagator(H.rows(), H.cols());
    double propagator_dt = -1.0;
    for (long step = 0; step < total; ++step) {
        const double dt = (step < schedule.n_steps) ? cfg.dt : schedule.dt_last;
        if (dt != propagator_dt) {
            Vector phases(energies.size());
            for (Eigen::Index k = 0; k < energies.size(); ++k)
                phases[k] = std::exp(Complex(-lambda * (energies[k] - e_min) * dt,
                                             -energies[k] * dt));
            propagator = solver.eigenvectors() * phases.asDiagonal() *
                         solver.eigenvectors().adjoint();
            propagator_dt = dt;
        }

        // Self-consistency loop on <H> inside U(dt); the trace renormalization
        // cancels the scalar e^{lambda <H> dt}, so the candidate state is the
        // same in every pass and the loop settles once <H> reproduces itself.
        double h_guess = (rho * H).trace().real();
        bool converged = false;
        int iterations = 0;
        Matrix candidate;
        while (iterations < 100) {
            ++iterations;
            const double scalar = std::exp(lambda * (h_guess - e_min) * dt);
            candidate = (scalar * propagator) * rho * (scalar * propagator).adjoint();
            candidate /= candidate.trace().real();
            const double h_next = (candidate * H).trace().real();
            if (std::abs(h_next - h_guess) < 1e-12) {
                converged = true;
                break;
            }
            h_guess = h_next;
        }
        if (!converged) report.converged = false;
        report.max_iterations = std::max(report.max_iterations, iterations);
        rho = std::move(candidate);

        const bool last = step + 1 == total;
        if (observer && (last || ((step + 1) % cfg.sample_every == 0)))
            observer(last ? t_end : (step + 1) * cfg.dt, rho);
    }
    if (!report.converged)
        throw NumericalError("evolve_statistical fixed point failed to converge within 100 "
                             "iterations (worst step took " +
                             std::to_string(report.max_iterations) + ")");
    return report;
}

}  // namespace spinsim
