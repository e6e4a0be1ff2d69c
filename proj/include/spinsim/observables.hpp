#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spinsim/half_integer.hpp"
#include "spinsim/spin_algebra.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

/// <psi|op|psi>.
Complex expectation(const Vector& psi, const Matrix& op);

/// Tr(rho op).
Complex expectation(const Matrix& rho, const Matrix& op);

/// Partial trace of rho over every site but `site` (1-based), by index
/// arithmetic over the site-major Kronecker layout; no full-dimension
/// temporaries.
Matrix reduced_density(const Matrix& rho, int site, int n_sites, int dim_site);

/// Same reduction straight from a pure state, O(dim * dim_site^2).
Matrix reduced_density(const Vector& psi, int site, int n_sites, int dim_site);

/// S(rho) = -Tr(rho log2 rho) in bits; eigenvalues in [-1e-10, 0) are
/// clamped to 0, anything more negative throws NumericalError.
double von_neumann_entropy(const Matrix& rho);

/// Tr(rho^2), in (0, 1]; 1 iff pure.
double purity(const Matrix& rho);

/// Per-site spin expectations, length and entanglement entropy.
struct SiteObservables {
    int site = 1;
    double sx = 0.0, sy = 0.0, sz = 0.0;  // units of hbar
    double entropy = 0.0;                 // bits

    double length() const { return Vec3(sx, sy, sz).norm(); }
};

/// Site observables from the reduced density of each site of a pure state.
std::vector<SiteObservables> site_observables(const Vector& psi, int n_sites,
                                              const SpinMatrixSet& site_spin);

double spin_length(const SiteObservables& obs);

/// Label scheme for product-basis states: u/d per site for S = 1/2, basis
/// index digits otherwise ('0' = m = S). Class labels group by total m.
struct BasisLabels {
    int n_sites;
    HalfInteger spin;

    std::string state_label(long index) const;
    int total_twice_m(long index) const;
    /// All total-m classes in descending m order, e.g. "+3/2", "+1/2", ...
    std::vector<std::pair<std::string, int>> class_labels() const;
};

/// |<m1 m2 ... | psi>|^2 for every product-basis state, with labels.
std::vector<std::pair<std::string, double>> basis_occupations(const Vector& psi,
                                                              const BasisLabels& labels);

/// Occupation summed within each total-m class, in descending m order.
std::vector<std::pair<std::string, double>> class_occupations(const Vector& psi,
                                                              const BasisLabels& labels);

}  // namespace spinsim
