#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nev/eigen.hpp"
#include "nev/matrix.hpp"

namespace nev {

struct QrPivoted {
    Matrix q;                        ///< full unitary (rows x rows)
    Matrix r;                        ///< rows x cols, upper triangular up to pivoting
    std::vector<std::size_t> perm;   ///< column permutation applied to the input
    std::size_t rank = 0;            ///< numerical rank at threshold sign_eps*sigma_max
};

/// Householder QR with column pivoting. Rank-revealing at paper scale.
inline QrPivoted qr_pivoted(const Matrix& a_in, const Tolerance& tol = {}) {
    const std::size_t rows = a_in.rows(), cols = a_in.cols();
    QrPivoted out;
    out.q = Matrix::identity(rows);
    out.r = a_in;
    out.perm.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) out.perm[j] = j;
    if (rows == 0 || cols == 0) return out;

    Matrix& r = out.r;
    Matrix& q = out.q;
    const std::size_t steps = std::min(rows, cols);
    double first_pivot = 0.0;

    for (std::size_t k = 0; k < steps; ++k) {
        // Pivot: bring the column with largest remaining norm to position k.
        std::size_t best = k;
        double best_norm = -1.0;
        for (std::size_t j = k; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < rows; ++i) s += std::norm(r(i, j));
            if (s > best_norm) {
                best_norm = s;
                best = j;
            }
        }
        if (best != k) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(r(i, k), r(i, best));
            std::swap(out.perm[k], out.perm[best]);
        }
        const double colnorm = std::sqrt(std::max(best_norm, 0.0));
        if (k == 0) first_pivot = colnorm;
        if (colnorm <= tol.sign_eps * std::max(first_pivot, 0.0) || colnorm == 0.0) break;

        // Householder reflector annihilating r(k+1..rows, k).
        cplx alpha = r(k, k);
        const cplx phase = (std::abs(alpha) > 0.0) ? alpha / std::abs(alpha) : cplx{1.0, 0.0};
        const cplx beta = -phase * colnorm;
        std::vector<cplx> w(rows, cplx{});
        w[k] = alpha - beta;
        for (std::size_t i = k + 1; i < rows; ++i) w[i] = r(i, k);
        double wnorm2 = 0.0;
        for (std::size_t i = k; i < rows; ++i) wnorm2 += std::norm(w[i]);
        if (wnorm2 > 1e-300) {
            for (std::size_t j = k; j < cols; ++j) {
                cplx dot = 0.0;
                for (std::size_t i = k; i < rows; ++i) dot += std::conj(w[i]) * r(i, j);
                dot *= 2.0 / wnorm2;
                for (std::size_t i = k; i < rows; ++i) r(i, j) -= dot * w[i];
            }
            // Q <- Q * (I - 2ww*/|w|^2)
            for (std::size_t i = 0; i < rows; ++i) {
                cplx dot = 0.0;
                for (std::size_t j = k; j < rows; ++j) dot += q(i, j) * w[j];
                dot *= 2.0 / wnorm2;
                for (std::size_t j = k; j < rows; ++j) q(i, j) -= dot * std::conj(w[j]);
            }
        }
        r(k, k) = beta;
        for (std::size_t i = k + 1; i < rows; ++i) r(i, k) = 0.0;
        ++out.rank;
    }
    return out;
}

struct RankRange {
    std::size_t rank = 0;
    Matrix range_basis;  ///< Euclidean-orthonormal columns spanning the column space
};

/// Numerical rank and orthonormal range basis at threshold sign_eps*sigma_max.
inline RankRange rank_and_range(const Matrix& m, const Tolerance& tol = {}) {
    const auto qr = qr_pivoted(m, tol);
    RankRange out;
    out.rank = qr.rank;
    out.range_basis = qr.q.block(0, 0, m.rows(), qr.rank);
    return out;
}

/// Orthonormal basis of the Euclidean orthogonal complement of span(basis).
inline Matrix orthonormal_complement(const Matrix& basis, std::size_t ambient_dim,
                                     const Tolerance& tol = {}) {
    if (basis.empty()) return Matrix::identity(ambient_dim);
    const auto qr = qr_pivoted(basis, tol);
    return qr.q.block(0, qr.rank, ambient_dim, ambient_dim - qr.rank);
}

/// Orthonormal basis of ker(M), computed as the complement of range(M*).
inline Matrix kernel_basis(const Matrix& m, const Tolerance& tol = {}) {
    if (m.rows() == 0) return Matrix::identity(m.cols());
    return orthonormal_complement(m.adjoint(), m.cols(), tol);
}

/// Orthonormal basis of span(U) ∩ span(V); U, V have full column rank bases.
inline Matrix subspace_intersection(const Matrix& u, const Matrix& v, const Tolerance& tol = {}) {
    if (u.empty() || v.empty()) return Matrix(u.rows(), 0);
    // U a = V b  <=>  [U  -V] (a;b) = 0
    const Matrix stacked = hstack(u, -1.0 * v);
    const Matrix null = kernel_basis(stacked, tol);
    if (null.cols() == 0) return Matrix(u.rows(), 0);
    const Matrix a_part = null.block(0, 0, u.cols(), null.cols());
    return rank_and_range(u * a_part, tol).range_basis;
}

/// Largest principal angle (as its sine) between span(U) and span(V);
/// both arguments must have orthonormal columns. Returns 1 if dims differ.
inline double subspace_gap(const Matrix& u, const Matrix& v) {
    if (u.cols() != v.cols()) return 1.0;
    if (u.cols() == 0) return 0.0;
    const Matrix w1 = v - u * (u.adjoint() * v);
    const Matrix w2 = u - v * (v.adjoint() * u);
    const auto e1 = hermitian_eigen(w1.adjoint() * w1);
    const auto e2 = hermitian_eigen(w2.adjoint() * w2);
    const double s1 = std::sqrt(std::max(0.0, e1.eigenvalues.back()));
    const double s2 = std::sqrt(std::max(0.0, e2.eigenvalues.back()));
    return std::max(s1, s2);
}

struct SolveResult {
    Matrix solution;            ///< X with M X = RHS (the inverse when RHS = I)
    double condition_estimate;  ///< |M|_F * |M^-1|_F
    bool boundedly_invertible;  ///< condition_estimate <= condition_cap
};

/**
 * @brief Solve M X = RHS (or invert M) by Gauss-Jordan with partial pivoting.
 *
 * Throws SingularMatrixError carrying the numerical rank when a pivot falls
 * below working precision. A condition estimate above condition_cap only
 * clears the boundedly_invertible flag; the solution is still returned.
 */
inline SolveResult solve_or_invert(const Matrix& m, const Matrix& rhs_in, const Tolerance& tol = {}) {
    if (m.rows() != m.cols()) throw DimensionError("solve_or_invert needs a square matrix");
    const std::size_t n = m.rows();
    if (rhs_in.rows() != n) throw DimensionError("solve_or_invert rhs row mismatch");
    if (n == 0) return {Matrix(0, rhs_in.cols()), 1.0, true};

    // Augment with the identity so the inverse comes out of the same sweep.
    Matrix work = hstack(hstack(m, rhs_in), Matrix::identity(n));
    const std::size_t wcols = work.cols();
    const double mnorm = m.norm_fro();
    const double pivot_floor = 1e-15 * std::max(1.0, mnorm);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(work(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(work(i, k)) > best) {
                best = std::abs(work(i, k));
                piv = i;
            }
        if (best <= pivot_floor) {
            const std::size_t rank = rank_and_range(m, tol).rank;
            throw SingularMatrixError("pivot below working precision in solve_or_invert", rank);
        }
        if (piv != k)
            for (std::size_t j = 0; j < wcols; ++j) std::swap(work(k, j), work(piv, j));
        const cplx inv_piv = 1.0 / work(k, k);
        for (std::size_t j = 0; j < wcols; ++j) work(k, j) *= inv_piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const cplx f = work(i, k);
            if (f == cplx{}) continue;
            for (std::size_t j = 0; j < wcols; ++j) work(i, j) -= f * work(k, j);
        }
    }

    SolveResult out;
    out.solution = work.block(0, m.cols(), n, rhs_in.cols());
    const Matrix inv = work.block(0, m.cols() + rhs_in.cols(), n, n);
    out.condition_estimate = mnorm * inv.norm_fro();
    out.boundedly_invertible = out.condition_estimate <= tol.condition_cap;
    return out;
}

inline SolveResult invert(const Matrix& m, const Tolerance& tol = {}) {
    return solve_or_invert(m, Matrix::identity(m.rows()), tol);
}

}  // namespace nev
