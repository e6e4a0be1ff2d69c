#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "spinsim/observables.hpp"
#include "spinsim/quantum_dynamics.hpp"
#include "spinsim/spin_algebra.hpp"
#include "test_support.hpp"

using namespace spinsim;
namespace st = spinsim::testing;

TEST_CASE("tdse_rhs_ll: Hermitian limit, stationary states, norm conservation") {
    auto gen = st::rng(11);
    const Matrix h = st::random_hermitian(5, gen);
    const Vector psi = st::random_state(5, gen);

    // lambda = 0: plain Schroedinger flow
    const Vector rhs0 = tdse_rhs_ll(psi, h, 0.0);
    CHECK((rhs0 - Complex(0, -1) * (h * psi)).norm() < 1e-13);

    // eigenstate: dissipative term vanishes
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const Vector ground = solver.eigenvectors().col(0);
    const Vector rhs_g = tdse_rhs_ll(ground, h, 0.8);
    CHECK((rhs_g - Complex(0, -solver.eigenvalues()[0]) * ground).norm() < 1e-12);

    // Re<psi|dpsi/dt> = 0 for random psi, H, lambda
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix hr = st::random_hermitian(2 + rep % 6, gen);
        const Vector pr = st::random_state(2 + rep % 6, gen);
        const double lambda = 0.1 + 0.2 * (rep % 5);
        CHECK(std::abs(pr.dot(tdse_rhs_ll(pr, hr, lambda)).real()) < 1e-12);
    }

    CHECK_THROWS_AS(tdse_rhs_ll(psi, st::random_hermitian(3, gen), 0.1), DimensionError);
}

TEST_CASE("tdse_rhs_llg is the LL right side over (1 + lambda^2)") {
    auto gen = st::rng(12);
    const Matrix h = st::random_hermitian(4, gen);
    const Vector psi = st::random_state(4, gen);
    CHECK((tdse_rhs_llg(psi, h, 0.0) - tdse_rhs_ll(psi, h, 0.0)).norm() == 0.0);
    CHECK((tdse_rhs_llg(psi, h, 1.0) - 0.5 * tdse_rhs_ll(psi, h, 1.0)).norm() < 1e-15);
    const double lam = 0.37;
    CHECK((tdse_rhs_llg(psi, h, lam) * (1 + lam * lam) - tdse_rhs_ll(psi, h, lam)).norm() <
          1e-14);
}

TEST_CASE("unitary evolution conserves energy to 1e-9 over t = 10") {
    auto gen = st::rng(13);
    const Matrix h = st::random_hermitian(6, gen, 2.0);
    Vector psi = st::random_state(6, gen);
    const double e0 = psi.dot(h * psi).real();

    double max_drift = 0.0;
    IntegratorConfig cfg;
    evolve_pure(psi, h, 0.0, DampedForm::LL, cfg, 10.0,
                [&](double, const Vector& state, double) {
                    max_drift = std::max(max_drift,
                                         std::abs(state.dot(h * state).real() - e0));
                });
    CHECK(max_drift < 1e-9);
}

TEST_CASE("spin-1/2 in -B sz from the x axis: <sigma_z>(t) = tanh(lambda B t)") {
    const auto set = build_spin_matrices(HalfInteger(1));
    const double b = 1.3, lambda = 0.4;
    const Matrix h = -b * set.sz;

    Vector psi(2);
    psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);

    IntegratorConfig cfg;
    double worst = 0.0;
    evolve_pure(psi, h, lambda, DampedForm::LL, cfg, 3.0,
                [&](double t, const Vector& state, double) {
                    const double sigma_z = 2.0 * state.dot(set.sz * state).real();
                    worst = std::max(worst, std::abs(sigma_z - std::tanh(lambda * b * t)));
                });
    CHECK(worst < 1e-8);
}

TEST_CASE("norm conservation: drift below 1e-6/unit time unrenormalized, 1e-12 renormalized") {
    auto gen = st::rng(14);
    const Matrix h = st::random_hermitian(5, gen, 1.5);
    const double t_end = 5.0;

    IntegratorConfig raw;
    raw.renormalize_each_step = false;
    Vector psi = st::random_state(5, gen);
    double worst_raw = 0.0;
    evolve_pure(psi, h, 0.5, DampedForm::LL, raw, t_end,
                [&](double, const Vector& state, double) {
                    worst_raw = std::max(worst_raw, std::abs(state.norm() - 1.0));
                });
    CHECK(worst_raw < 1e-6 * t_end);

    IntegratorConfig renorm;
    Vector psi2 = st::random_state(5, gen);
    double worst_step = 0.0;
    evolve_pure(psi2, h, 0.5, DampedForm::LL, renorm, t_end,
                [&](double, const Vector&, double step_norm) {
                    worst_step = std::max(worst_step, std::abs(step_norm - 1.0));
                });
    CHECK(worst_step < 1e-12);
}

TEST_CASE("closed-form propagator: identity at t = 0, unitary at lambda = 0, ground-state limit") {
    auto gen = st::rng(15);
    const Matrix h = st::random_hermitian(6, gen);
    const Vector psi0 = st::random_state(6, gen);

    CHECK((closed_form_propagate(psi0, h, 0.7, 0.0) - psi0).norm() < 1e-13);

    const Vector unitary = closed_form_propagate(psi0, h, 0.0, 3.0);
    for (int k = 0; k < 6; ++k)
        CHECK(std::abs(unitary.cwiseAbs()[k] - psi0.cwiseAbs()[k]) > -1.0);  // defined
    CHECK(std::abs(unitary.norm() - 1.0) < 1e-13);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const Vector in_eigbasis_before = solver.eigenvectors().adjoint() * psi0;
    const Vector in_eigbasis_after = solver.eigenvectors().adjoint() * unitary;
    for (int k = 0; k < 6; ++k)
        CHECK(std::abs(std::abs(in_eigbasis_after[k]) - std::abs(in_eigbasis_before[k])) <
              1e-12);

    // large lambda t: converges to the lowest eigenstate present in psi0
    const Vector relaxed = closed_form_propagate(psi0, h, 1.0, 400.0);
    const Vector ground = solver.eigenvectors().col(0);
    CHECK(std::abs(std::abs(ground.dot(relaxed)) - 1.0) < 1e-10);

    Matrix non_hermitian = st::random_complex(4, gen);
    CHECK_THROWS_AS(closed_form_propagate(st::random_state(4, gen), non_hermitian, 0.1, 1.0),
                    NumericalError);
}

TEST_CASE("oracle equivalence: RK4 matches the closed form to 1e-8 at t = 10") {
    auto gen = st::rng(16);
    for (int rep = 0; rep < 5; ++rep) {
        const int dim = 2 + rep;
        const Matrix h = st::random_hermitian(dim, gen, 3.0);
        Vector psi = st::random_state(dim, gen);
        const Vector expected = closed_form_propagate(psi, h, 0.3, 10.0);

        IntegratorConfig cfg;
        evolve_pure(psi, h, 0.3, DampedForm::LL, cfg, 10.0);
        CHECK((psi - expected).norm() < 1e-8);
    }
}

TEST_CASE("time-rescaling: LLG at t equals LL at t/(1+lambda^2)") {
    auto gen = st::rng(17);
    const double lambda = 0.7, t = 4.0;
    const Matrix h = st::random_hermitian(5, gen, 2.5);
    const Vector psi0 = st::random_state(5, gen);

    Vector llg = psi0;
    IntegratorConfig cfg;
    evolve_pure(llg, h, lambda, DampedForm::LLG, cfg, t);

    const Vector rescaled = closed_form_propagate(psi0, h, lambda, t / (1 + lambda * lambda));
    CHECK((llg - rescaled).norm() < 1e-8);

    Vector ll = psi0;
    IntegratorConfig cfg_ll;
    cfg_ll.dt = cfg.dt / (1 + lambda * lambda);
    evolve_pure(ll, h, lambda, DampedForm::LL, cfg_ll, t / (1 + lambda * lambda));
    CHECK((llg - ll).norm() < 1e-8);
}

TEST_CASE("liouville_rhs: stationary, pure-state equivalence, anticommutator form") {
    auto gen = st::rng(18);
    const Matrix h = st::random_hermitian(4, gen);

    // rho commuting with H: a function of H is stationary
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    Matrix stationary = Matrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k)
        stationary += (0.1 + 0.2 * k) * solver.eigenvectors().col(k) *
                      solver.eigenvectors().col(k).adjoint();
    stationary /= stationary.trace().real();
    CHECK(liouville_rhs(stationary, h, 0.9).cwiseAbs().maxCoeff() < 1e-13);

    // pure rho: double-commutator form equals the anticommutator form
    const Vector psi = st::random_state(4, gen);
    const Matrix rho = psi * psi.adjoint();
    const double lambda = 0.45;
    const Matrix comm = rho * h - h * rho;  // [rho, H]
    const Matrix anti = rho * h + h * rho;
    const Matrix alt = Complex(0, 1) * comm - lambda * (anti - 2.0 * rho * h * rho);
    const Matrix direct = liouville_rhs(rho, h, lambda);
    CHECK((direct - alt).cwiseAbs().maxCoeff() < 1e-12);

    // trace of the derivative vanishes
    CHECK(std::abs(liouville_rhs(st::random_density(4, gen), h, 0.3).trace()) < 1e-13);
}

TEST_CASE("density propagation matches the pure-state path to 1e-8 over t = 10") {
    auto gen = st::rng(19);
    const double lambda = 0.3;
    for (int rep = 0; rep < 3; ++rep) {
        const int dim = 3 + rep;
        const Matrix h = st::random_hermitian(dim, gen, 2.0);
        const Vector psi0 = st::random_state(dim, gen);

        Vector psi = psi0;
        IntegratorConfig cfg;
        evolve_pure(psi, h, lambda, DampedForm::LL, cfg, 10.0);

        Matrix rho = psi0 * psi0.adjoint();
        evolve_density(rho, h, lambda, DampedForm::LL, cfg, 10.0);

        CHECK((rho - psi * psi.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("expectation_rhs_check residuals") {
    auto gen = st::rng(20);
    const auto set = build_spin_matrices(HalfInteger(1));
    const Matrix op = embed_site_operator(2, 1, set.sz, 2);

    for (int rep = 0; rep < 10; ++rep) {
        const Matrix h = st::random_hermitian(4, gen);
        const Vector psi = st::random_state(4, gen);
        CHECK(expectation_rhs_check(psi, op, h, 0.0) < 1e-10);   // Ehrenfest limit
        CHECK(expectation_rhs_check(psi, op, h, 0.3) < 1e-10);
        CHECK(expectation_rhs_check(psi, h, h, 0.7) < 1e-10);    // op = H
    }
}

TEST_CASE("energy dissipation law: d<H>/dt = -2 lambda Var(H) / (1+lambda^2)") {
    auto gen = st::rng(22);
    for (double lambda : {0.1, 0.5, 1.0}) {
        const Matrix h = st::random_hermitian(5, gen, 2.0);
        const Vector psi0 = st::random_state(5, gen);
        const double t_star = 0.4, delta = 1e-4;
        const double scale = 1.0 + lambda * lambda;

        auto energy_at = [&](double t) {
            // LLG at t = LL at t/scale; the closed form is the LL solution.
            const Vector psi = closed_form_propagate(psi0, h, lambda, t / scale);
            return psi.dot(h * psi).real();
        };
        const Vector psi_star = closed_form_propagate(psi0, h, lambda, t_star / scale);
        const double mean = psi_star.dot(h * psi_star).real();
        const double second = psi_star.dot(h * h * psi_star).real();
        const double variance = second - mean * mean;

        const double measured = (energy_at(t_star + delta) - energy_at(t_star - delta)) /
                                (2.0 * delta);
        const double predicted = -2.0 * lambda * variance / scale;
        CHECK(std::abs(measured - predicted) < 1e-5 * std::abs(predicted));
    }
}

TEST_CASE("monotone energy decay along a damped run") {
    auto gen = st::rng(23);
    const Matrix h = st::random_hermitian(6, gen, 2.0);
    Vector psi = st::random_state(6, gen);
    IntegratorConfig cfg;
    double prev = 1e300;
    bool monotone = true;
    evolve_pure(psi, h, 0.4, DampedForm::LLG, cfg, 8.0,
                [&](double, const Vector& state, double) {
                    const double e = state.dot(h * state).real();
                    if (e > prev + 1e-12) monotone = false;
                    prev = e;
                });
    CHECK(monotone);
}

TEST_CASE("thermal state: limits and the two-level tanh law") {
    auto gen = st::rng(24);
    const Matrix h = st::random_hermitian(5, gen);

    const Matrix infinite_t = thermal_state(h, 0.0);
    CHECK((infinite_t - Matrix::Identity(5, 5) / 5.0).cwiseAbs().maxCoeff() < 1e-13);

    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const double beta_cold = 1e3 / solver.eigenvalues().cwiseAbs().maxCoeff();
    const Matrix cold = thermal_state(h, beta_cold);
    const Matrix ground =
        solver.eigenvectors().col(0) * solver.eigenvectors().col(0).adjoint();
    CHECK((cold - ground).cwiseAbs().maxCoeff() < 1e-8);

    const auto set = build_spin_matrices(HalfInteger(1));
    const double b = 0.9;
    const Matrix zeeman = -b * set.sz;
    for (double beta : {0.0, 0.3, 1.0, 4.0, 20.0}) {
        const double sz = (thermal_state(zeeman, beta) * set.sz).trace().real();
        CHECK(std::abs(sz - 0.5 * std::tanh(beta * b / 2.0)) < 1e-12);
    }
}

TEST_CASE("thermal states are positive semidefinite with unit trace") {
    auto gen = st::rng(25);
    const Matrix h = st::random_hermitian(6, gen);
    const Matrix rho = thermal_state(h, 2.5);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-13);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    CHECK(solver.eigenvalues().minCoeff() > -1e-14);
}

TEST_CASE("evolve_statistical: isospectral at lambda = 0") {
    auto gen = st::rng(26);
    const Matrix h = st::random_hermitian(4, gen, 2.0);
    Matrix rho = st::random_density(4, gen);
    Eigen::SelfAdjointEigenSolver<Matrix> before(rho);

    IntegratorConfig cfg;
    const auto report = evolve_statistical(rho, h, 0.0, cfg, 3.0);
    CHECK(report.converged);
    Eigen::SelfAdjointEigenSolver<Matrix> after(rho);
    CHECK((before.eigenvalues() - after.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("evolve_statistical: pure states follow evolve_pure to 1e-7 at t = 5") {
    auto gen = st::rng(27);
    const Matrix h = st::random_hermitian(5, gen, 2.5);
    const Vector psi0 = st::random_state(5, gen);
    const double lambda = 0.35;

    Vector psi = psi0;
    IntegratorConfig cfg;
    evolve_pure(psi, h, lambda, DampedForm::LL, cfg, 5.0);

    Matrix rho = psi0 * psi0.adjoint();
    const auto report = evolve_statistical(rho, h, lambda, cfg, 5.0);
    CHECK(report.converged);
    CHECK((rho - psi * psi.adjoint()).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("evolve_statistical: thermal energy is non-increasing under damping") {
    auto gen = st::rng(28);
    const Matrix h = st::random_hermitian(5, gen, 2.0);
    Matrix rho = thermal_state(h, 0.8);

    IntegratorConfig cfg;
    double prev = 1e300;
    bool monotone = true;
    evolve_statistical(rho, h, 0.5, cfg, 4.0, [&](double, const Matrix& state) {
        const double e = (state * h).trace().real();
        if (e > prev + 1e-12) monotone = false;
        prev = e;
    });
    CHECK(monotone);
}

TEST_CASE("mixed-state statistical vs Liouville evolution: reported, not asserted") {
    auto gen = st::rng(29);
    const Matrix h = st::random_hermitian(4, gen, 2.0);
    const Matrix rho0 = thermal_state(h, 1.1);
    const double lambda = 0.3;
    IntegratorConfig cfg;

    Matrix statistical = rho0;
    evolve_statistical(statistical, h, lambda, cfg, 3.0);
    Matrix liouville = rho0;
    evolve_density(liouville, h, lambda, DampedForm::LL, cfg, 3.0);

    const double gap = (statistical - liouville).cwiseAbs().maxCoeff();
    MESSAGE("mixed-state route disagreement at t=3: ", gap);
    CHECK(std::isfinite(gap));
}

TEST_CASE("step-size guard enforces dt * spectral_radius <= 0.5") {
    auto gen = st::rng(30);
    const Matrix h = st::random_hermitian(4, gen, 30.0);
    Vector psi = st::random_state(4, gen);
    IntegratorConfig coarse;
    coarse.dt = 0.1;  // 30 * 0.1 = 3 > 0.5
    CHECK_THROWS_AS(evolve_pure(psi, h, 0.1, DampedForm::LL, coarse, 1.0), NumericalError);
}

TEST_CASE("integrator config validation") {
    IntegratorConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.dt = 1e-3;
    bad.sample_every = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
