#include "spinsim/spin_algebra.hpp"

#include <cmath>
#include <string>

namespace spinsim {

const Matrix& SpinMatrixSet::component(int axis) const {
    switch (axis) {
        case 0: return sx;
        case 1: return sy;
        case 2: return sz;
        default: throw std::out_of_range("spin component axis must be 0, 1 or 2");
    }
}

SpinMatrixSet build_spin_matrices(HalfInteger spin) {
    const int dim = spin.dimension();
    const double s = spin.value();

    Matrix sz = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) sz(k, k) = s - k;  // m = S, S-1, ..., -S

    // Ladder operator: S+ |S m> = sqrt(S(S+1) - m(m+1)) |S m+1>.
    Matrix splus = Matrix::Zero(dim, dim);
    for (int c = 1; c < dim; ++c) {
        const double m = s - c;
        splus(c - 1, c) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    Matrix sminus = splus.adjoint();

    SpinMatrixSet set{spin, (splus + sminus) / 2.0,
                      (splus - sminus) / Complex(0.0, 2.0), std::move(sz),
                      Matrix::Identity(dim, dim)};
    return set;
}

double pair_trace_constant(HalfInteger spin) {
    const double s = spin.value();
    return s * (s + 1.0) * (2.0 * s + 1.0) / 3.0;
}

BivectorSet bivector_set(const SpinMatrixSet& set) {
    const double s = set.spin.value();
    const double casimir_third = s * (s + 1.0) / 3.0;

    BivectorSet biv{set.spin, {}};
    for (int m = 0; m < 3; ++m) {
        for (int l = m; l < 3; ++l) {
            const Matrix& a = set.component(m);
            const Matrix& b = set.component(l);
            Matrix t = 0.5 * (a * b + b * a);
            if (m == l) t -= casimir_third * set.identity;
            biv.comp[m][l] = t;
            if (l != m) biv.comp[l][m] = std::move(t);
        }
    }
    return biv;
}

double bivector_projection_constant(const BivectorSet& biv) {
    double total = 0.0;
    for (int m = 0; m < 3; ++m)
        for (int l = 0; l < 3; ++l)
            total += (biv(m, l) * biv(m, l)).trace().real();
    return total / 5.0;
}

Matrix embed_site_operator(int n_sites, int site, const Matrix& op, int dim_site) {
    if (op.rows() != dim_site || op.cols() != dim_site)
        throw DimensionError("embedded operator must be dim_site x dim_site");
    if (site < 1 || site > n_sites)
        throw DimensionError("site index " + std::to_string(site) + " outside 1.." +
                             std::to_string(n_sites));

    long left = 1, right = 1;
    for (int k = 0; k < site - 1; ++k) left *= dim_site;
    for (int k = site; k < n_sites; ++k) right *= dim_site;
    const long dim = left * dim_site * right;

    Matrix out = Matrix::Zero(dim, dim);
    for (long l = 0; l < left; ++l)
        for (int a = 0; a < dim_site; ++a)
            for (int b = 0; b < dim_site; ++b) {
                const Complex v = op(a, b);
                if (v == Complex(0.0, 0.0)) continue;
                const long row0 = (l * dim_site + a) * right;
                const long col0 = (l * dim_site + b) * right;
                for (long r = 0; r < right; ++r) out(row0 + r, col0 + r) = v;
            }
    return out;
}

Vec3 vector_moments(const Matrix& rho, const SpinMatrixSet& set) {
    Vec3 v;
    for (int a = 0; a < 3; ++a) v[a] = (rho * set.component(a)).trace().real();
    return v;
}

Eigen::Matrix3d bivector_moments(const Matrix& rho, const BivectorSet& biv) {
    Eigen::Matrix3d b;
    for (int m = 0; m < 3; ++m)
        for (int l = 0; l < 3; ++l) b(m, l) = (rho * biv(m, l)).trace().real();
    return b;
}

Matrix reconstruct_density(HalfInteger spin, const Vec3& vector_moms,
                           const std::optional<Eigen::Matrix3d>& bivector_moms) {
    if (spin.twice() > 2)
        throw ConfigError("multivector reconstruction supports S <= 1; higher spins need "
                          "rank >= 3 tensors");

    const SpinMatrixSet set = build_spin_matrices(spin);
    const double n_s = pair_trace_constant(spin);

    Matrix rho = set.identity / static_cast<double>(spin.dimension());
    for (int m = 0; m < 3; ++m) rho += (vector_moms[m] / n_s) * set.component(m);

    if (bivector_moms) {
        const BivectorSet biv = bivector_set(set);
        const double n_2s = bivector_projection_constant(biv);
        if (n_2s > 0.0) {
            for (int m = 0; m < 3; ++m)
                for (int l = 0; l < 3; ++l)
                    rho += ((*bivector_moms)(m, l) / n_2s) * biv(m, l);
        }
    }
    return rho;
}

TraceOrthogonalityReport trace_orthogonality_check(HalfInteger spin, int k_max) {
    if (k_max < 1 || k_max > 2)
        throw ConfigError("trace orthogonality is implemented for ranks 1 and 2 only");
    if (k_max > spin.twice())
        throw ConfigError("k_max must not exceed 2S");

    const SpinMatrixSet set = build_spin_matrices(spin);
    TraceOrthogonalityReport report;
    auto track = [&report](double residual) {
        report.max_violation = std::max(report.max_violation, std::abs(residual));
    };

    const double n_s = pair_trace_constant(spin);
    report.vector_constant = (set.sx * set.sx).trace().real();
    for (int a = 0; a < 3; ++a) {
        track(set.component(a).trace().real());
        track(set.component(a).trace().imag());
        for (int b = 0; b < 3; ++b) {
            const Complex t = (set.component(a) * set.component(b)).trace();
            track(t.imag());
            track(t.real() - (a == b ? n_s : 0.0));
        }
    }

    if (k_max >= 2) {
        const BivectorSet biv = bivector_set(set);
        const double n_2s = bivector_projection_constant(biv);
        report.bivector_constant = n_2s;
        for (int m = 0; m < 3; ++m)
            for (int l = 0; l < 3; ++l) {
                track((biv(m, l) - biv(l, m)).cwiseAbs().maxCoeff());          // symmetry
                track((biv(m, l) - biv(m, l).adjoint()).cwiseAbs().maxCoeff()); // hermiticity
                track(std::abs(biv(m, l).trace()));                             // rank 0 vs 2
                for (int n = 0; n < 3; ++n)
                    track(std::abs((biv(m, l) * set.component(n)).trace()));    // rank 1 vs 2
            }
        // Gram structure of the Cartesian rank-2 family.
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d) {
                        const double expected =
                            n_2s *
                            ((a == c && b == d ? 1.0 : 0.0) + (a == d && b == c ? 1.0 : 0.0) -
                             2.0 / 3.0 * (a == b && c == d ? 1.0 : 0.0)) /
                            2.0;
                        const Complex t = (biv(a, b) * biv(c, d)).trace();
                        track(t.imag());
                        track(t.real() - expected);
                    }
    }
    return report;
}

}  // namespace spinsim
