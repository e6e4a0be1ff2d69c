#include "spinsim/observables.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace spinsim {

namespace {

constexpr double kEigClamp = -1e-10;

long pow_long(int base, int exp) {
    long out = 1;
    for (int k = 0; k < exp; ++k) out *= base;
    return out;
}

void check_site(int site, int n_sites) {
    if (site < 1 || site > n_sites) throw DimensionError("site index out of range");
}

}  // namespace

Complex expectation(const Vector& psi, const Matrix& op) {
    if (op.rows() != psi.size()) throw DimensionError("state/operator dimension mismatch");
    return psi.dot(op * psi);
}

Complex expectation(const Matrix& rho, const Matrix& op) {
    if (op.rows() != rho.rows()) throw DimensionError("density/operator dimension mismatch");
    return (rho * op).trace();
}

Matrix reduced_density(const Matrix& rho, int site, int n_sites, int dim_site) {
    check_site(site, n_sites);
    const long left = pow_long(dim_site, site - 1);
    const long right = pow_long(dim_site, n_sites - site);
    if (rho.rows() != left * dim_site * right)
        throw DimensionError("density dimension is not dim_site^N");

    Matrix out = Matrix::Zero(dim_site, dim_site);
    for (int a = 0; a < dim_site; ++a)
        for (int b = 0; b < dim_site; ++b) {
            Complex sum(0.0, 0.0);
            for (long l = 0; l < left; ++l) {
                const long row0 = (l * dim_site + a) * right;
                const long col0 = (l * dim_site + b) * right;
                for (long r = 0; r < right; ++r) sum += rho(row0 + r, col0 + r);
            }
            out(a, b) = sum;
        }
    return out;
}

Matrix reduced_density(const Vector& psi, int site, int n_sites, int dim_site) {
    check_site(site, n_sites);
    const long left = pow_long(dim_site, site - 1);
    const long right = pow_long(dim_site, n_sites - site);
    if (psi.size() != left * dim_site * right)
        throw DimensionError("state dimension is not dim_site^N");

    Matrix out = Matrix::Zero(dim_site, dim_site);
    for (long l = 0; l < left; ++l)
        for (int a = 0; a < dim_site; ++a)
            for (int b = 0; b < dim_site; ++b) {
                const long row0 = (l * dim_site + a) * right;
                const long col0 = (l * dim_site + b) * right;
                Complex sum(0.0, 0.0);
                for (long r = 0; r < right; ++r) sum += psi[row0 + r] * std::conj(psi[col0 + r]);
                out(a, b) += sum;
            }
    return out;
}

double von_neumann_entropy(const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed in von_neumann_entropy");

    double entropy = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        double p = solver.eigenvalues()[k];
        if (p < kEigClamp)
            throw NumericalError("density matrix eigenvalue " + std::to_string(p) +
                                 " below clamp tolerance -1e-10");
        if (p <= 0.0) continue;  // 0 log 0 = 0
        entropy -= p * std::log2(p);
    }
    // eigenvalues a hair above 1 leave a negative residue of order 1e-16
    return std::max(entropy, 0.0);
}

double purity(const Matrix& rho) {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return rho.squaredNorm();
}

std::vector<SiteObservables> site_observables(const Vector& psi, int n_sites,
                                              const SpinMatrixSet& site_spin) {
    const int d = site_spin.spin.dimension();
    std::vector<SiteObservables> out;
    out.reserve(n_sites);
    for (int site = 1; site <= n_sites; ++site) {
        const Matrix rho = reduced_density(psi, site, n_sites, d);
        SiteObservables obs;
        obs.site = site;
        obs.sx = (rho * site_spin.sx).trace().real();
        obs.sy = (rho * site_spin.sy).trace().real();
        obs.sz = (rho * site_spin.sz).trace().real();
        obs.entropy = von_neumann_entropy(rho);
        out.push_back(obs);
    }
    return out;
}

double spin_length(const SiteObservables& obs) { return obs.length(); }

std::string BasisLabels::state_label(long index) const {
    const int d = spin.dimension();
    std::string label(n_sites, '?');
    for (int site = n_sites - 1; site >= 0; --site) {
        const int digit = static_cast<int>(index % d);
        index /= d;
        if (spin.twice() == 1)
            label[site] = digit == 0 ? 'u' : 'd';
        else
            label[site] = static_cast<char>('0' + std::min(digit, 9));
    }
    return label;
}

int BasisLabels::total_twice_m(long index) const {
    const int d = spin.dimension();
    int total = 0;
    for (int site = 0; site < n_sites; ++site) {
        const int digit = static_cast<int>(index % d);
        index /= d;
        total += spin.twice() - 2 * digit;  // m = S - digit
    }
    return total;
}

std::vector<std::pair<std::string, int>> BasisLabels::class_labels() const {
    std::vector<std::pair<std::string, int>> out;
    const int max_twice = n_sites * spin.twice();
    for (int tm = max_twice; tm >= -max_twice; tm -= 2)
        out.emplace_back(format_twice_value(tm), tm);
    return out;
}

std::vector<std::pair<std::string, double>> basis_occupations(const Vector& psi,
                                                              const BasisLabels& labels) {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(psi.size());
    for (long i = 0; i < psi.size(); ++i)
        out.emplace_back(labels.state_label(i), std::norm(psi[i]));
    return out;
}

std::vector<std::pair<std::string, double>> class_occupations(const Vector& psi,
                                                              const BasisLabels& labels) {
    auto classes = labels.class_labels();
    std::vector<double> sums(classes.size(), 0.0);
    const int max_twice = labels.n_sites * labels.spin.twice();
    for (long i = 0; i < psi.size(); ++i) {
        const int tm = labels.total_twice_m(i);
        sums[(max_twice - tm) / 2] += std::norm(psi[i]);
    }
    std::vector<std::pair<std::string, double>> out;
    out.reserve(classes.size());
    for (std::size_t k = 0; k < classes.size(); ++k)
        out.emplace_back(classes[k].first, sums[k]);
    return out;
}

}  // namespace spinsim
