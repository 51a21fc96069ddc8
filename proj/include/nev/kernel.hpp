#pragma once

#include <cmath>
#include <vector>

#include "nev/eigen.hpp"
#include "nev/matrix.hpp"
#include "nev/realization.hpp"
#include "nev/sampling.hpp"

namespace nev {

/// N_Q(z,w) = (Q(z) - Q(w)*)/(z - conj(w)), with the analytic derivative
/// Q'(z) on the removable diagonal w = conj(z).
inline Matrix nevanlinna_kernel(const Realization& r, cplx z, cplx w, const Tolerance& tol = {}) {
    const cplx denom = z - std::conj(w);
    if (std::abs(denom) < 1e-12 * (1.0 + std::abs(z))) return evaluate_derivative(r, z, tol);
    const Matrix qz = evaluate(r, z, tol);
    const Matrix qw = evaluate(r, w, tol);
    return (1.0 / denom) * (qz - qw.adjoint());
}

struct NegativeSquaresEstimate {
    std::size_t kappa_lower = 0;         ///< max over the nested prefixes
    std::vector<std::size_t> history;    ///< negative count per sample prefix
};

/**
 * @brief Lower bound on the number of negative squares of the Nevanlinna
 * kernel: assemble the Gram matrix (N(z_i,z_j)h_i, h_j) over seeded points
 * and directions, and count negative eigenvalues along nested prefixes.
 */
inline NegativeSquaresEstimate estimate_negative_squares(const Realization& r,
                                                         const SamplePlan& plan,
                                                         std::size_t directions_per_point,
                                                         const Tolerance& tol = {}) {
    plan.validate();
    const std::vector<cplx> pts = sample_points(plan, spectrum(r));
    std::mt19937_64 dir_rng(plan.seed ^ 0x9e3779b97f4a7c15ULL);
    const std::size_t m = r.hilbert_dim();

    std::vector<cplx> zs;
    std::vector<Matrix> hs;
    for (const cplx& z : pts)
        for (std::size_t d = 0; d < directions_per_point; ++d) {
            zs.push_back(z);
            hs.push_back(random_unit_vector(dir_rng, m));
        }
    const std::size_t total = zs.size();

    Matrix gram(total, total);
    for (std::size_t p = 0; p < total; ++p)
        for (std::size_t q = 0; q <= p; ++q) {
            const Matrix nk = nevanlinna_kernel(r, zs[p], zs[q], tol);
            cplx entry = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    entry += std::conj(hs[q](i, 0)) * nk(i, j) * hs[p](j, 0);
            gram(q, p) = entry;
            gram(p, q) = std::conj(entry);
        }
    if ((gram - gram.adjoint()).norm_fro() > 1e-8 * std::max(1.0, gram.norm_fro()))
        throw NumericalError("gram_not_hermitian", "kernel Gram assembly lost Hermitian symmetry");

    NegativeSquaresEstimate out;
    for (std::size_t prefix = 1; prefix <= pts.size(); ++prefix) {
        const std::size_t dim = prefix * directions_per_point;
        const Matrix head = gram.block(0, 0, dim, dim);
        const std::size_t neg = hermitian_inertia(hermitize(head), tol).n_minus;
        out.history.push_back(neg);
        out.kappa_lower = std::max(out.kappa_lower, neg);
    }
    return out;
}

/// max over samples of |Q(z)* - Q(conj z)| — the symmetry half of Definition
/// of the class; small for every valid realization.
inline double check_symmetry(const Realization& r, const SamplePlan& plan,
                             const Tolerance& tol = {}) {
    double worst = 0.0;
    for (const cplx& z : sample_points(plan, spectrum(r))) {
        const Matrix a = evaluate(r, z, tol).adjoint();
        const Matrix b = evaluate(r, std::conj(z), tol);
        worst = std::max(worst, (a - b).norm_fro());
    }
    return worst;
}

}  // namespace nev
