#pragma once

#include <cstdint>
#include <functional>

#include "spinsim/model.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

/// Which damped equation of motion to integrate. LL leaves the precession
/// undamped; LLG divides the whole right side by (1 + lambda^2), i.e. the
/// time rescaling t -> t/(1+lambda^2).
enum class DampedForm { LL, LLG };

/// Fixed-step classical RK4 with per-step renormalization.
struct IntegratorConfig {
    double dt = 1e-3;
    bool renormalize_each_step = true;
    int sample_every = 10;  // observer cadence, in steps

    void validate() const;
};

/// dpsi/dt = -i H psi - lambda (H - <H>) psi with <H> = <psi|H|psi>/<psi|psi>.
/// The norm derivative vanishes identically.
Vector tdse_rhs_ll(const Vector& psi, const Matrix& H, double lambda);

/// LL right side divided by (1 + lambda^2).
Vector tdse_rhs_llg(const Vector& psi, const Matrix& H, double lambda);

/// Called at the sampling cadence with the current time, the state and the
/// norm of the state right after the latest RK4 step (before that step's
/// renormalization; exactly 1 at t = 0).
using PureObserver = std::function<void(double t, const Vector& psi, double step_norm)>;

/// Per-step noise provider; returns one field vector per site, held constant
/// across the step's RK4 stages.
using NoiseProvider = std::function<std::vector<Vec3>(std::uint64_t step)>;

/// Integrates psi under the chosen form up to t_end. Pulse terms are
/// evaluated at the RK4 stage times; <H> is re-evaluated at every stage.
/// Throws NumericalError on non-finite amplitudes or step-size violation.
void evolve_pure(Vector& psi, const HamiltonianBuilder& hamiltonian, double lambda,
                 DampedForm form, const IntegratorConfig& cfg, double t_end,
                 const PureObserver& observer = {}, const NoiseProvider& noise = {});

/// Same integrator for a bare time-independent H.
void evolve_pure(Vector& psi, const Matrix& H, double lambda, DampedForm form,
                 const IntegratorConfig& cfg, double t_end,
                 const PureObserver& observer = {});

/// Exact solution for time-independent H via eigendecomposition:
/// psi(t) = e^{-iHt} e^{-lambda H t} psi0, renormalized. This is the
/// brute-force oracle for the RK4 path.
Vector closed_form_propagate(const Vector& psi0, const Matrix& H, double lambda, double t);

/// drho/dt = i[rho, H] - lambda [rho, [rho, H]]. Traceless, Hermiticity
/// preserving.
Matrix liouville_rhs(const Matrix& rho, const Matrix& H, double lambda);

using DensityObserver = std::function<void(double t, const Matrix& rho)>;

/// RK4 integration of the nonlinear Liouville equation (trace renormalized
/// each step). Exact for pure rho; for mixed rho the equation is adopted
/// unchanged, with evolve_statistical as the alternative route.
void evolve_density(Matrix& rho, const HamiltonianBuilder& hamiltonian, double lambda,
                    DampedForm form, const IntegratorConfig& cfg, double t_end,
                    const DensityObserver& observer = {});

/// Same integrator for a bare time-independent H.
void evolve_density(Matrix& rho, const Matrix& H, double lambda, DampedForm form,
                    const IntegratorConfig& cfg, double t_end,
                    const DensityObserver& observer = {});

/// | d<op>/dt via the product rule on the LL flow  minus
///   -i<[op,H]> - lambda(<[op,H]_+> - 2<H><op>) |, which must vanish for
/// pure states.
double expectation_rhs_check(const Vector& psi, const Matrix& op, const Matrix& H,
                             double lambda);

/// rho = e^{-beta H} / Tr e^{-beta H}, max-shifted for overflow safety.
Matrix thermal_state(const Matrix& H, double beta);

struct StatisticalRunReport {
    int max_iterations = 0;  // worst fixed-point iteration count over the run
    bool converged = true;
};

/// Propagates rho with the per-step propagator U(dt) = e^{-iH dt} e^{-lambda H dt}
/// e^{lambda <H> dt}, <H> = Tr(rho H) iterated to a fixed point each step
/// (tolerance 1e-12, max 100 iterations), trace renormalized each step.
/// Requires time-independent H.
StatisticalRunReport evolve_statistical(Matrix& rho, const Matrix& H, double lambda,
                                        const IntegratorConfig& cfg, double t_end,
                                        const DensityObserver& observer = {});

}  // namespace spinsim
