#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "nev/eigen.hpp"
#include "nev/factor.hpp"
#include "nev/krein.hpp"
#include "nev/matrix.hpp"
#include "nev/sampling.hpp"

namespace nev {

/**
 * @brief Finite-dimensional Pontryagin-space realization of
 *        Q(z) = S + Gamma^+ (A - z)^{-1} Gamma,
 * with A self-adjoint for the J-product and S Hermitian (S absent means the
 * holomorphic-at-infinity form).
 */
struct Realization {
    FundamentalSymmetry sym;   ///< J on the state space, n x n
    Matrix a;                  ///< n x n, J-self-adjoint
    Matrix gamma;              ///< n x m
    std::optional<Matrix> s;   ///< m x m Hermitian, default zero

    std::size_t state_dim() const { return a.rows(); }
    std::size_t hilbert_dim() const { return gamma.cols(); }

    Matrix gamma_plus() const { return gamma.adjoint() * sym.j; }
    Matrix s_or_zero() const { return s ? *s : Matrix::zero(hilbert_dim(), hilbert_dim()); }
};

inline void validate_realization(const Realization& r, const Tolerance& tol = {}) {
    if (r.a.rows() != r.a.cols()) throw DimensionError("A must be square");
    if (r.sym.dim() != r.a.rows()) throw DimensionError("J vs A dimension");
    if (r.gamma.rows() != r.a.rows()) throw DimensionError("Gamma vs A dimension");
    if (!r.a.all_finite() || !r.gamma.all_finite() || !r.sym.j.all_finite())
        throw ValidationError("non_finite_entries", "realization contains NaN/Inf");
    validate_symmetry(r.sym.j, tol);
    if (!is_j_selfadjoint(r.a, r.sym, tol))
        throw NotHermitianError("J*A is not Hermitian: A is not J-self-adjoint");
    if (r.s) {
        if (r.s->rows() != r.hilbert_dim() || r.s->cols() != r.hilbert_dim())
            throw DimensionError("S vs Gamma dimension");
        if (!is_hermitian(*r.s, std::max(tol.relative_eps, 1e-12)))
            throw NotHermitianError("S != S*");
    }
}

inline Realization make_realization(const Matrix& j, const Matrix& a, const Matrix& gamma,
                                    std::optional<Matrix> s = std::nullopt,
                                    const Tolerance& tol = {}) {
    Realization r{validate_symmetry(j, tol), a, gamma, std::move(s)};
    validate_realization(r, tol);
    return r;
}

inline std::vector<cplx> spectrum(const Realization& r) { return general_eigenvalues(r.a); }

/// Pole-detection threshold of the realization (|z - lambda| below it errors).
inline double pole_threshold(const Realization& r) {
    return 1e-6 * std::max(1.0, r.a.norm_fro());
}

inline void check_off_spectrum(const Realization& r, cplx z) {
    const double thresh = pole_threshold(r);
    for (const cplx& lam : spectrum(r))
        if (std::abs(z - lam) < thresh)
            throw PoleError("evaluation point hits the spectrum of A", lam);
}

/// Q(z) = S + Gamma^+ (A - zI)^{-1} Gamma.
inline Matrix evaluate(const Realization& r, cplx z, const Tolerance& tol = {}) {
    check_off_spectrum(r, z);
    const std::size_t n = r.state_dim();
    const Matrix shifted = r.a - z * Matrix::identity(n);
    const Matrix resolvent_gamma = solve_or_invert(shifted, r.gamma, tol).solution;
    return r.s_or_zero() + r.gamma_plus() * resolvent_gamma;
}

/// Q'(z) = Gamma^+ (A - z)^{-2} Gamma (S drops out).
inline Matrix evaluate_derivative(const Realization& r, cplx z, const Tolerance& tol = {}) {
    check_off_spectrum(r, z);
    const std::size_t n = r.state_dim();
    const Matrix shifted = r.a - z * Matrix::identity(n);
    const Matrix once = solve_or_invert(shifted, r.gamma, tol).solution;
    const Matrix twice = solve_or_invert(shifted, once, tol).solution;
    return r.gamma_plus() * twice;
}

/// Q'(inf) = lim z Q(z) = -Gamma^+ Gamma; requires the S-free form.
inline Matrix derivative_at_infinity(const Realization& r) {
    if (r.s && r.s->norm_fro() > 0.0)
        throw NotHolomorphicAtInfinityError("derivative at infinity requires S absent");
    return -1.0 * (r.gamma_plus() * r.gamma);
}

/// Seeded evaluation points for "agrees at samples" postconditions:
/// uniform in [-3,3]x[0.5,2], rejecting points near the spectrum.
inline std::vector<cplx> default_sample_points(const Realization& r, std::size_t count,
                                               std::uint64_t seed) {
    SamplePlan plan;
    plan.count = count;
    plan.seed = seed;
    return sample_points(plan, spectrum(r));
}

struct Minimality {
    bool is_minimal = false;
    Matrix reachable_basis;  ///< orthonormal basis of span{A^k Gamma h}
};

/// Reachability test: rank of the Krylov block [Gamma, A Gamma, ..., A^{n-1} Gamma].
inline Minimality minimality(const Realization& r, const Tolerance& tol = {}) {
    const std::size_t n = r.state_dim();
    Matrix krylov(n, 0);
    Matrix block = r.gamma;
    for (std::size_t k = 0; k < n; ++k) {
        krylov = hstack(krylov, block);
        block = r.a * block;
    }
    const auto rr = rank_and_range(krylov, tol);
    return {rr.rank == n, rr.range_basis};
}

namespace detail {

/**
 * Restrict a realization to the span of `basis`, quotienting the isotropic
 * part of the J-Gram. Assumes A-invariance of the span (and of its isotropic
 * part, which holds for both call sites: root subspaces and reachable spans).
 */
inline Realization restrict_realization(const Realization& r, const Matrix& basis,
                                        std::optional<Matrix> s_carry, const Tolerance& tol = {}) {
    const Matrix b0 = rank_and_range(basis, tol).range_basis;
    const Matrix gram = hermitize(b0.adjoint() * (r.sym.j * b0));
    const auto eig = hermitian_eigen(gram, tol);
    // Keep directions where the Gram is nondegenerate; |eigenvalue| <= sign_eps
    // (Gram of orthonormal columns, so scale is 1) is the isotropic part.
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
        if (std::abs(eig.eigenvalues[k]) > tol.sign_eps) keep.push_back(k);

    const std::size_t rdim = keep.size();
    Matrix w(r.state_dim(), rdim);
    Matrix j_sub(rdim, rdim);
    for (std::size_t c = 0; c < rdim; ++c) {
        const double lam = eig.eigenvalues[keep[c]];
        const double scale = 1.0 / std::sqrt(std::abs(lam));
        for (std::size_t i = 0; i < r.state_dim(); ++i) {
            cplx v = 0.0;
            for (std::size_t k2 = 0; k2 < b0.cols(); ++k2)
                v += b0(i, k2) * eig.basis(k2, keep[c]);
            w(i, c) = scale * v;
        }
        j_sub(c, c) = (lam < 0.0) ? -1.0 : 1.0;
    }
    // Coordinate map of the J-orthogonal projection onto span(W): J_sub W* J.
    const Matrix coord = j_sub * (w.adjoint() * r.sym.j);
    Realization out;
    out.sym = validate_symmetry(j_sub, tol);
    out.a = coord * (r.a * w);
    out.gamma = coord * r.gamma;
    out.s = std::move(s_carry);
    return out;
}

}  // namespace detail

/**
 * @brief Evaluation-equivalent minimal realization: restrict to the reachable
 * subspace and quotient its isotropic part.
 */
inline Realization reduce_to_minimal(const Realization& r, const Tolerance& tol = {}) {
    const Minimality min = minimality(r, tol);
    return detail::restrict_realization(r, min.reachable_basis, r.s, tol);
}

/**
 * @brief Pointed Krein-Langer form of Q around a reference point z0:
 *        Q(z) = Q(z0)* + (z - conj(z0)) Gamma_{z0}^+ (I + (z-z0)(A-z)^{-1}) Gamma_{z0}.
 */
struct KLFormRealization {
    cplx z0;
    Matrix q0_star;    ///< Q(z0)*
    Matrix gamma_z0;   ///< n x m
    FundamentalSymmetry sym;
    Matrix a;
};

/// Evaluate the pointed form directly (used for cross-checks).
inline Matrix evaluate_kl(const KLFormRealization& kl, cplx z, const Tolerance& tol = {}) {
    const std::size_t n = kl.a.rows();
    const Matrix shifted = kl.a - z * Matrix::identity(n);
    const Matrix res = solve_or_invert(shifted, kl.gamma_z0, tol).solution;
    const Matrix gz = kl.gamma_z0 + (z - kl.z0) * res;
    const Matrix gp = kl.gamma_z0.adjoint() * kl.sym.j;
    return kl.q0_star + (z - std::conj(kl.z0)) * (gp * gz);
}

/// Resolvent form from the pointed form: Gamma = (A - z0) Gamma_{z0},
/// S = Q(conj(z0)) - Gamma^+ (A - conj(z0))^{-1} Gamma.
inline Realization to_resolvent_form(const KLFormRealization& kl, const Tolerance& tol = {}) {
    const std::size_t n = kl.a.rows();
    const Matrix gamma = (kl.a - kl.z0 * Matrix::identity(n)) * kl.gamma_z0;
    const Matrix gamma_plus = gamma.adjoint() * kl.sym.j;
    const Matrix shifted = kl.a - std::conj(kl.z0) * Matrix::identity(n);
    const Matrix res = solve_or_invert(shifted, gamma, tol).solution;
    // Q(conj(z0)) = Q(z0)* by symmetry of the pointed form.
    Matrix s = hermitize(kl.q0_star - gamma_plus * res);
    std::optional<Matrix> s_opt;
    if (s.norm_fro() > 1e-10 * std::max(1.0, kl.q0_star.norm_fro())) s_opt = s;
    Realization out{kl.sym, kl.a, gamma, s_opt};
    const Matrix back = evaluate(out, std::conj(kl.z0), tol);
    if ((back - kl.q0_star).norm_fro() > 1e-6 * std::max(1.0, kl.q0_star.norm_fro()))
        throw ValidationError("kl_form_inconsistent",
                              "stored Q(z0)* does not match the resolvent form");
    return out;
}

/// Pointed form from the resolvent form: Gamma_{z0} = (A - z0)^{-1} Gamma.
inline KLFormRealization from_resolvent_form(const Realization& r, cplx z0,
                                             const Tolerance& tol = {}) {
    if (std::abs(z0.imag()) < 1e-12)
        throw ValidationError("z0_invalid", "reference point must be non-real");
    check_off_spectrum(r, z0);
    const std::size_t n = r.state_dim();
    const Matrix shifted = r.a - z0 * Matrix::identity(n);
    KLFormRealization kl;
    kl.z0 = z0;
    kl.gamma_z0 = solve_or_invert(shifted, r.gamma, tol).solution;
    kl.sym = r.sym;
    kl.a = r.a;
    kl.q0_star = evaluate(r, std::conj(z0), tol);
    return kl;
}

/// Intersection of ker Q(z_k) over seeded sample points.
inline Matrix kernel_of_q(const Realization& r, std::size_t sample_count, std::uint64_t seed,
                          const Tolerance& tol = {}) {
    Matrix result = Matrix::identity(r.hilbert_dim());
    for (const cplx& z : default_sample_points(r, sample_count, seed)) {
        const Matrix qz = evaluate(r, z, tol);
        result = subspace_intersection(result, kernel_basis(qz, tol), tol);
        if (result.cols() == 0) break;
    }
    return result;
}

struct PoleSplit {
    Realization r_alpha;  ///< carries the root subspace of A at alpha, spec(A) = {alpha}
    Realization h_alpha;  ///< complementary part, holomorphic at alpha
};

/**
 * @brief Additive split Q = Q_alpha + H_alpha at a finite generalized pole,
 * via root-subspace spectral projections. A non-real alpha is handled on the
 * conjugate-symmetric pair {alpha, conj(alpha)} so both summands keep the
 * Q(conj z) = Q(z)* symmetry.
 */
inline PoleSplit split_at_pole(const Realization& r, cplx alpha, const Tolerance& tol = {}) {
    const std::size_t n = r.state_dim();
    const auto eigs = spectrum(r);
    const double thresh = pole_threshold(r);
    bool found = false;
    for (const cplx& lam : eigs)
        if (std::abs(alpha - lam) < thresh) {
            alpha = lam;
            found = true;
            break;
        }
    if (!found)
        throw AssumptionError("alpha_not_in_spectrum", "split point is not an eigenvalue of A");

    const Matrix eye = Matrix::identity(n);
    const bool real_alpha = std::abs(alpha.imag()) <= 1e-8 * std::max(1.0, std::abs(alpha));
    if (real_alpha) alpha = cplx{alpha.real(), 0.0};
    Matrix shifted = r.a - alpha * eye;
    Matrix power = eye;
    for (std::size_t k = 0; k < n; ++k) power = power * shifted;
    if (!real_alpha) {
        const Matrix conj_shift = r.a - std::conj(alpha) * eye;
        for (std::size_t k = 0; k < n; ++k) power = power * conj_shift;
    }

    PoleSplit out;
    out.r_alpha = detail::restrict_realization(r, kernel_basis(power, tol), std::nullopt, tol);
    out.h_alpha =
        detail::restrict_realization(r, rank_and_range(power, tol).range_basis, r.s, tol);
    return out;
}

/**
 * @brief The regularization of the pole part: add B/(beta - z) with
 * B = c * (Euclidean projection onto ker Gamma^+Gamma) so that the augmented
 * Gamma^+Gamma becomes boundedly invertible.
 */
inline Realization regularize_derivative(const Realization& r_alpha, double beta, double c,
                                         const Tolerance& tol = {}) {
    if (c < 0.0) throw ValidationError("parameters_invalid", "c must be nonnegative");
    const double thresh = pole_threshold(r_alpha);
    for (const cplx& lam : spectrum(r_alpha))
        if (std::abs(cplx{beta, 0.0} - lam) < thresh)
            throw ValidationError("parameters_invalid", "beta must lie outside the spectrum of A");

    const Matrix gpg = hermitize(r_alpha.gamma_plus() * r_alpha.gamma);
    const auto eig = hermitian_eigen(gpg, tol);
    const double scale = std::max(1.0, gpg.norm_fro());
    std::vector<std::size_t> null_cols;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
        if (classify_eigenvalue(eig.eigenvalues[k], scale, tol) == SignClass::Zero)
            null_cols.push_back(k);

    if (null_cols.empty() || c == 0.0) {
        bool invertible = false;
        try {
            invertible = invert(gpg, tol).boundedly_invertible;
        } catch (const SingularMatrixError&) {
        }
        if (invertible) return r_alpha;
        throw AssumptionError("parameters_insufficient",
                              "Gamma^+Gamma is not invertible and c = 0 adds nothing");
    }

    const std::size_t m = r_alpha.hilbert_dim(), k = null_cols.size();
    Matrix v(m, k);
    for (std::size_t c2 = 0; c2 < k; ++c2)
        for (std::size_t i = 0; i < m; ++i) v(i, c2) = eig.basis(i, null_cols[c2]);

    Realization out;
    out.sym = validate_symmetry(block_diag(r_alpha.sym.j, Matrix::identity(k)), tol);
    out.a = block_diag(r_alpha.a, beta * Matrix::identity(k));
    out.gamma = vstack(r_alpha.gamma, std::sqrt(c) * v.adjoint());
    out.s = r_alpha.s;

    const Matrix augmented = hermitize(out.gamma_plus() * out.gamma);
    bool ok = false;
    try {
        ok = invert(augmented, tol).boundedly_invertible;
    } catch (const SingularMatrixError&) {
    }
    if (!ok)
        throw AssumptionError("parameters_insufficient",
                              "augmented Gamma^+Gamma is still ill-conditioned");
    return out;
}

}  // namespace nev
