#pragma once

#include <array>
#include <optional>

#include "spinsim/half_integer.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

/// The (2S+1)-dimensional spin component matrices of one site, basis
/// ordered m = S, S-1, ..., -S. Hermitian, [sx,sy] = i sz (cyclic),
/// sx^2+sy^2+sz^2 = S(S+1) 1, Tr(sa sb) = n_S delta_ab.
struct SpinMatrixSet {
    HalfInteger spin;
    Matrix sx, sy, sz, identity;

    const Matrix& component(int axis) const;  // 0=x, 1=y, 2=z
};

SpinMatrixSet build_spin_matrices(HalfInteger spin);

/// n_S = S(S+1)(2S+1)/3 = Tr(sa sa).
double pair_trace_constant(HalfInteger spin);

/// Symmetric traceless rank-2 tensors s_ml = (1/2)[s_m, s_l]_+ - (1/3)S(S+1) delta_ml.
/// Identically zero for S = 1/2.
struct BivectorSet {
    HalfInteger spin;
    std::array<std::array<Matrix, 3>, 3> comp;

    const Matrix& operator()(int m, int l) const { return comp[m][l]; }
};

BivectorSet bivector_set(const SpinMatrixSet& set);

/// Projection constant of the full ordered bivector sum: the unique c with
/// sum_ml Tr(rho s_ml) s_ml = c * (rank-2 part of rho). Computed by tracing,
/// c = (1/5) sum_ml Tr(s_ml s_ml).
double bivector_projection_constant(const BivectorSet& biv);

/// identity x ... x op x ... x identity with op at slot `site` (1-based),
/// site 1 leftmost. op must be dim_site x dim_site.
Matrix embed_site_operator(int n_sites, int site, const Matrix& op, int dim_site);

/// Vector moments <s_m> of a single-site density matrix.
Vec3 vector_moments(const Matrix& rho, const SpinMatrixSet& set);

/// Bivector moments <s_ml> of a single-site density matrix.
Eigen::Matrix3d bivector_moments(const Matrix& rho, const BivectorSet& biv);

/// Multivector expansion of a single-spin density operator through rank 2:
/// rho = 1/(2S+1) + (1/n_S) sum_m <s_m> s_m [+ (1/n_2S) sum_ml <s_ml> s_ml].
/// Supported for S in {1/2, 1}; pass no bivector moments for the vector-only
/// truncation.
Matrix reconstruct_density(HalfInteger spin, const Vec3& vector_moms,
                           const std::optional<Eigen::Matrix3d>& bivector_moms);

/// Trace-orthogonality audit of the tensor families up to rank k_max (<= 2):
/// Tr(s_a) = 0, Tr(s_a s_b) = n_S delta_ab, Tr(s_ml) = 0, Tr(s_ml s_n) = 0,
/// and the rank-2 Gram structure Tr(s_ab s_cd) =
/// n_2S (delta_ac delta_bd + delta_ad delta_bc - (2/3) delta_ab delta_cd)/2.
struct TraceOrthogonalityReport {
    double max_violation = 0.0;     // worst |residual| over all identities
    double vector_constant = 0.0;   // measured n_S
    double bivector_constant = 0.0; // measured n_2S (0 when k_max < 2)
};

TraceOrthogonalityReport trace_orthogonality_check(HalfInteger spin, int k_max);

}  // namespace spinsim
