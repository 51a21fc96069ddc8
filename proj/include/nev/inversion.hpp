#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "nev/eigen.hpp"
#include "nev/factor.hpp"
#include "nev/matrix.hpp"
#include "nev/realization.hpp"

namespace nev {

namespace detail {

/// Invert Gamma^+Gamma, mapping numerical failure onto the standing
/// assumption of the inversion formulas.
inline Matrix invert_gpg(const Realization& r, const Tolerance& tol) {
    const Matrix gpg = hermitize(r.gamma_plus() * r.gamma);
    try {
        const auto res = invert(gpg, tol);
        if (!res.boundedly_invertible)
            throw AssumptionError("gamma_plus_gamma_not_invertible",
                                  "condition estimate exceeds condition_cap");
        return hermitize(res.solution);
    } catch (const SingularMatrixError& e) {
        throw AssumptionError("gamma_plus_gamma_not_invertible",
                              "Gamma^+Gamma is singular (rank " + std::to_string(e.rank) + ")");
    }
}

/// Orthonormal range basis of an (approximate) projection matrix. The rank
/// cut is absolute at scale 1: nonzero singular values of a projector are
/// >= 1, anything at sign_eps is conditioning noise from P = I cases.
inline Matrix projector_range(const Matrix& ip, const Tolerance& tol) {
    const auto qr = qr_pivoted(ip, tol);
    std::size_t rank = 0;
    while (rank < qr.rank && std::abs(qr.r(rank, rank)) > tol.sign_eps) ++rank;
    return qr.q.block(0, 0, ip.rows(), rank);
}

}  // namespace detail

/// P = Gamma (Gamma^+Gamma)^{-1} Gamma^+, the J-orthogonal projection onto
/// range(Gamma) with ker Gamma^+ = range(I - P).
inline Matrix projection_p(const Realization& r, const Tolerance& tol = {}) {
    const Matrix g_hat = detail::invert_gpg(r, tol);
    return r.gamma * (g_hat * r.gamma_plus());
}

/**
 * @brief The two-part realization of the inverse -Q^{-1}:
 * polynomial part S_hat + z G_hat, resolvent part on range(I - P) in the
 * coordinates of the Euclidean-orthonormal basis B.
 */
struct InverseDecomposition {
    Matrix s_hat;          ///< m x m Hermitian
    Matrix g_hat;          ///< m x m Hermitian, invertible
    Matrix gamma_tilde;    ///< n x m, (I-P) A Gamma (Gamma^+Gamma)^{-1}
    Matrix range_ip_basis; ///< n x r orthonormal columns spanning range(I-P)
    Matrix a_tilde_coord;  ///< r x r
    Matrix j_tilde_coord;  ///< r x r Gram of J on the basis
    std::size_t kappa = 0, kappa1 = 0, kappa2 = 0;
    bool minimal_input = true;  ///< false downgrades the index bookkeeping to a warning
};

inline InverseDecomposition decompose_inverse(const Realization& r, const Tolerance& tol = {}) {
    const Matrix g_hat = detail::invert_gpg(r, tol);
    const Matrix gamma_plus = r.gamma_plus();
    const std::size_t n = r.state_dim();

    InverseDecomposition dec;
    dec.g_hat = g_hat;
    dec.s_hat = hermitize(-1.0 * (g_hat * (gamma_plus * (r.a * (r.gamma * g_hat)))));

    const Matrix p = r.gamma * (g_hat * gamma_plus);
    const Matrix ip = Matrix::identity(n) - p;
    dec.gamma_tilde = ip * (r.a * (r.gamma * g_hat));
    dec.range_ip_basis = detail::projector_range(ip, tol);
    const Matrix& b = dec.range_ip_basis;
    dec.a_tilde_coord = b.adjoint() * (ip * (r.a * b));
    dec.j_tilde_coord = hermitize(b.adjoint() * (r.sym.j * b));

    dec.minimal_input = minimality(r, tol).is_minimal;
    dec.kappa = r.sym.negative_index;
    dec.kappa1 = hermitian_inertia(hermitize(gamma_plus * r.gamma), tol).n_minus;
    dec.kappa2 = hermitian_inertia(dec.j_tilde_coord, tol).n_minus;
    if (hermitian_inertia(dec.j_tilde_coord, tol).n_zero > 0)
        throw NumericalError("degenerate_complement",
                             "J degenerates on range(I-P), contradicting the space split");
    if (dec.minimal_input && dec.kappa1 + dec.kappa2 != dec.kappa)
        throw NumericalError("index_mismatch",
                             "kappa1 + kappa2 != kappa on a minimal realization");
    return dec;
}

inline void check_off_a_tilde_spectrum(const InverseDecomposition& dec, cplx z) {
    const double thresh = 1e-6 * std::max(1.0, dec.a_tilde_coord.norm_fro());
    for (const cplx& lam : general_eigenvalues(dec.a_tilde_coord))
        if (std::abs(z - lam) < thresh)
            throw PoleError("evaluation point hits the spectrum of A~ (a zero of Q)", lam);
}

/// Q1(z) = S_hat + z G_hat.
inline Matrix evaluate_q1(const InverseDecomposition& dec, cplx z) {
    return dec.s_hat + z * dec.g_hat;
}

/// Q2(z) = Gamma~^+ (A~ - z)^{-1} Gamma~ through the coordinate resolvent.
inline Matrix evaluate_q2(const Realization& r, const InverseDecomposition& dec, cplx z,
                          const Tolerance& tol = {}) {
    check_off_a_tilde_spectrum(dec, z);
    const Matrix& b = dec.range_ip_basis;
    const std::size_t rdim = b.cols();
    if (rdim == 0) return Matrix::zero(r.hilbert_dim(), r.hilbert_dim());
    const Matrix gt_plus = dec.gamma_tilde.adjoint() * r.sym.j;
    const Matrix shifted = dec.a_tilde_coord - z * Matrix::identity(rdim);
    const Matrix res = solve_or_invert(shifted, b.adjoint() * dec.gamma_tilde, tol).solution;
    return (gt_plus * b) * res;
}

/**
 * @brief The inverse formula: Q_hat(z) = -Q(z)^{-1} as
 * G_hat Gamma^+ { A(I-P)(A~-z)^{-1}(I-P)A - (A - zI) } Gamma G_hat,
 * with the resolvent taken in the coordinates of range(I-P).
 */
inline Matrix invert_at(const Realization& r, cplx z, const Tolerance& tol = {}) {
    const Matrix g_hat = detail::invert_gpg(r, tol);
    check_off_spectrum(r, z);
    const std::size_t n = r.state_dim();
    const Matrix eye = Matrix::identity(n);
    const Matrix gamma_plus = r.gamma_plus();
    const Matrix p = r.gamma * (g_hat * gamma_plus);
    const Matrix ip = eye - p;
    const Matrix b = detail::projector_range(ip, tol);

    Matrix middle = -1.0 * (r.a - z * eye);
    if (b.cols() > 0) {
        const Matrix a_tilde = b.adjoint() * (ip * (r.a * b));
        const double thresh = 1e-6 * std::max(1.0, a_tilde.norm_fro());
        for (const cplx& lam : general_eigenvalues(a_tilde))
            if (std::abs(z - lam) < thresh)
                throw PoleError("evaluation point hits the spectrum of A~ (a zero of Q)", lam);
        const Matrix shifted = a_tilde - z * Matrix::identity(b.cols());
        const Matrix res = solve_or_invert(shifted, b.adjoint() * (ip * r.a), tol).solution;
        middle = middle + r.a * (b * res);
    }
    return g_hat * (gamma_plus * (middle * (r.gamma * g_hat)));
}

/// Relative residual of the identity
/// Q_hat(z) Gamma^+ = G_hat Gamma^+ { -I + A(I-P)(A~-z)^{-1}(I-P) } (A - zI).
inline double verify_identity_46(const Realization& r, cplx z, const Tolerance& tol = {}) {
    const InverseDecomposition dec = decompose_inverse(r, tol);
    check_off_spectrum(r, z);
    const std::size_t n = r.state_dim();
    const Matrix eye = Matrix::identity(n);
    const Matrix gamma_plus = r.gamma_plus();
    const Matrix p = r.gamma * (dec.g_hat * gamma_plus);
    const Matrix ip = eye - p;
    const Matrix& b = dec.range_ip_basis;

    const Matrix lhs = (evaluate_q1(dec, z) + evaluate_q2(r, dec, z, tol)) * gamma_plus;

    Matrix middle = -1.0 * eye;
    if (b.cols() > 0) {
        const Matrix shifted = dec.a_tilde_coord - z * Matrix::identity(b.cols());
        const Matrix res = solve_or_invert(shifted, b.adjoint() * ip, tol).solution;
        middle = middle + r.a * (b * res);
    }
    const Matrix rhs = dec.g_hat * (gamma_plus * (middle * (r.a - z * eye)));
    return (lhs - rhs).norm_fro() / std::max(1.0, rhs.norm_fro());
}

/**
 * @brief Kernel of the resolvent operator of the inverse's representing
 * relation, (A_hat - z0)^{-1} = (A-z0)^{-1}(I + PA(I-P)(A~-z0)^{-1})(I-P);
 * it coincides with range(Gamma), the multivalued part A_hat(0).
 */
inline Matrix inverse_relation_multivalued_part(const Realization& r, cplx z0,
                                                const Tolerance& tol = {}) {
    if (std::abs(z0.imag()) < 1e-12)
        throw ValidationError("z0_invalid", "reference point must be non-real");
    const InverseDecomposition dec = decompose_inverse(r, tol);
    check_off_spectrum(r, z0);
    check_off_a_tilde_spectrum(dec, z0);
    const std::size_t n = r.state_dim();
    const Matrix eye = Matrix::identity(n);
    const Matrix p = r.gamma * (dec.g_hat * r.gamma_plus());
    const Matrix ip = eye - p;
    const Matrix& b = dec.range_ip_basis;

    Matrix inner = ip;
    if (b.cols() > 0) {
        const Matrix shifted = dec.a_tilde_coord - z0 * Matrix::identity(b.cols());
        const Matrix res = solve_or_invert(shifted, b.adjoint() * ip, tol).solution;
        inner = inner + p * (r.a * (b * res));
    }
    const Matrix op = solve_or_invert(r.a - z0 * eye, inner, tol).solution;
    // When range(Gamma) is the whole space, inner is pure round-off from
    // I - P; its kernel is everything, not what a relative rank cut on the
    // noise would report.
    const double scale =
        std::max(1.0, solve_or_invert(r.a - z0 * eye, eye, tol).solution.norm_fro());
    if (op.norm_fro() <= tol.sign_eps * scale) return eye;
    return kernel_basis(op, tol);
}

struct PoleCancellation {
    std::size_t degree = 0;     ///< k, the chain length
    Matrix coefficient;         ///< (Gamma^+Gamma)^{-1} Gamma^+ x_{k-1}, m x 1
    double monomial_residual;   ///< max relative deviation of Q_hat Gamma^+ p(z)
                                ///< from (z-alpha)^k * coefficient at samples
};

/**
 * @brief Pole cancellation data for a Jordan chain of A at alpha: the single
 * monomial coefficient of eta(z) = Q_hat(z) Gamma^+ (x0 + (z-alpha)x1 + ...),
 * plus the measured residual of the monomial identity at sample points. The
 * identity holds only when the resolvent correction through range(I-P)
 * vanishes on the chain; the residual reports how far it is from doing so.
 */
inline PoleCancellation pole_cancellation_function(const Realization& r, cplx alpha,
                                                  const std::vector<Matrix>& chain,
                                                  const Tolerance& tol = {}) {
    if (chain.empty()) throw ValidationError("chain_invalid", "empty Jordan chain");
    const std::size_t n = r.state_dim();
    const Matrix shifted = r.a - alpha * Matrix::identity(n);
    double chain_scale = 0.0;
    for (const Matrix& x : chain) {
        if (x.rows() != n || x.cols() != 1)
            throw DimensionError("chain vectors must be n x 1");
        chain_scale = std::max(chain_scale, x.norm_fro());
    }
    const double eps = 1e-8 * std::max(1.0, chain_scale) * std::max(1.0, r.a.norm_fro());
    if ((shifted * chain[0]).norm_fro() > eps)
        throw ValidationError("chain_invalid", "x0 is not an eigenvector at alpha");
    for (std::size_t j = 1; j < chain.size(); ++j)
        if ((shifted * chain[j] - chain[j - 1]).norm_fro() > eps)
            throw ValidationError("chain_invalid",
                                  "(A - alpha) x_j != x_{j-1} at j = " + std::to_string(j));

    const InverseDecomposition dec = decompose_inverse(r, tol);
    const std::size_t k = chain.size();
    PoleCancellation out;
    out.degree = k;
    out.coefficient = dec.g_hat * (r.gamma_plus() * chain.back());

    std::vector<cplx> zs = default_sample_points(r, 5, 0x706f6c65);
    double residual = 0.0;
    for (const cplx& z : zs) {
        Matrix poly = chain[0];
        cplx factor = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            factor *= (z - alpha);
            poly = poly + factor * chain[j];
        }
        const Matrix lhs =
            (evaluate_q1(dec, z) + evaluate_q2(r, dec, z, tol)) * (r.gamma_plus() * poly);
        const Matrix rhs = std::pow(z - alpha, static_cast<double>(k)) * out.coefficient;
        residual = std::max(residual,
                            (lhs - rhs).norm_fro() / std::max(1.0, rhs.norm_fro()));
    }
    out.monomial_residual = residual;
    return out;
}

/// Finite generalized zeros of Q = eigenvalues of A~ with multiplicities.
inline std::vector<std::pair<cplx, std::size_t>> zeros_of_q(const Realization& r,
                                                            const Tolerance& tol = {}) {
    const InverseDecomposition dec = decompose_inverse(r, tol);
    const double delta = 1e-6 * std::max(1.0, dec.a_tilde_coord.norm_fro());
    return cluster_eigenvalues(general_eigenvalues(dec.a_tilde_coord), delta);
}

}  // namespace nev
