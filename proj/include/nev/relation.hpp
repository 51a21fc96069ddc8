#pragma once

#include <cstddef>
#include <optional>

#include "nev/factor.hpp"
#include "nev/krein.hpp"
#include "nev/matrix.hpp"

namespace nev {

namespace detail {

/// Reduced row echelon form with pivot tolerance; returns only nonzero rows.
inline Matrix rref(const Matrix& m_in, const Tolerance& tol = {}) {
    Matrix m = m_in;
    const std::size_t rows = m.rows(), cols = m.cols();
    const double scale = std::max(1.0, m.max_abs());
    std::size_t lead = 0;
    for (std::size_t col = 0; col < cols && lead < rows; ++col) {
        std::size_t piv = lead;
        double best = std::abs(m(lead, col));
        for (std::size_t i = lead + 1; i < rows; ++i)
            if (std::abs(m(i, col)) > best) {
                best = std::abs(m(i, col));
                piv = i;
            }
        if (best <= 1e3 * tol.sign_eps * scale) {
            for (std::size_t i = lead; i < rows; ++i) m(i, col) = 0.0;
            continue;
        }
        if (piv != lead)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(lead, j), m(piv, j));
        const cplx inv = 1.0 / m(lead, col);
        for (std::size_t j = 0; j < cols; ++j) m(lead, j) *= inv;
        m(lead, col) = 1.0;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == lead) continue;
            const cplx f = m(i, col);
            if (f == cplx{}) continue;
            for (std::size_t j = 0; j < cols; ++j) m(i, j) -= f * m(lead, j);
            m(i, col) = 0.0;
        }
        ++lead;
    }
    return m.block(0, 0, lead, cols);
}

}  // namespace detail

/**
 * @brief Unique representative of a column space: orthonormalize, then take
 * the column-reduced echelon form (RREF of the transpose, transposed back).
 */
inline Matrix canonical_subspace(const Matrix& spanning, const Tolerance& tol = {}) {
    if (spanning.cols() == 0) return Matrix(spanning.rows(), 0);
    const Matrix ortho = rank_and_range(spanning, tol).range_basis;
    return detail::rref(ortho.transpose(), tol).transpose();
}

/// Subspace equality through the shared canonical form.
inline bool same_subspace(const Matrix& a, const Matrix& b, const Tolerance& tol = {},
                          double eps = 1e-8) {
    const Matrix ca = canonical_subspace(a, tol);
    const Matrix cb = canonical_subspace(b, tol);
    if (ca.cols() != cb.cols()) return false;
    return (ca - cb).norm_fro() <= eps * std::max(1.0, ca.norm_fro());
}

/**
 * @brief A linear relation: a subspace of H x K stored as a canonical column
 * basis of stacked pairs (top block H-components, bottom block K-components).
 */
struct LinearRelation {
    std::size_t dim_h = 0;
    std::size_t dim_k = 0;
    Matrix pairs;  ///< (dim_h + dim_k) x r, canonical

    std::size_t dim() const { return pairs.cols(); }
    Matrix top() const { return pairs.block(0, 0, dim_h, pairs.cols()); }
    Matrix bottom() const { return pairs.block(dim_h, 0, dim_k, pairs.cols()); }
};

inline LinearRelation make_relation(std::size_t dim_h, std::size_t dim_k, const Matrix& spanning,
                                    const Tolerance& tol = {}) {
    if (spanning.rows() != dim_h + dim_k)
        throw DimensionError("relation pairs must have dim_h + dim_k rows");
    return {dim_h, dim_k, canonical_subspace(spanning, tol)};
}

/// Graph of an operator matrix M: {(f, Mf)}.
inline LinearRelation graph(const Matrix& m, const Tolerance& tol = {}) {
    return make_relation(m.cols(), m.rows(), vstack(Matrix::identity(m.cols()), m), tol);
}

inline bool same_relation(const LinearRelation& a, const LinearRelation& b, double eps = 1e-8) {
    if (a.dim_h != b.dim_h || a.dim_k != b.dim_k || a.dim() != b.dim()) return false;
    if (a.dim() == 0) return true;
    return (a.pairs - b.pairs).norm_fro() <= eps * std::max(1.0, a.pairs.norm_fro());
}

struct RelationParts {
    Matrix domain;    ///< canonical basis in H
    Matrix range;     ///< canonical basis in K
    Matrix kernel;    ///< canonical basis in H
    Matrix mul_part;  ///< canonical basis of T(0) in K
};

inline RelationParts relation_parts(const LinearRelation& t, const Tolerance& tol = {}) {
    RelationParts out;
    out.domain = canonical_subspace(t.top(), tol);
    out.range = canonical_subspace(t.bottom(), tol);
    const Matrix ker_bottom = kernel_basis(t.bottom(), tol);
    out.kernel = canonical_subspace(t.top() * ker_bottom, tol);
    const Matrix ker_top = kernel_basis(t.top(), tol);
    out.mul_part = canonical_subspace(t.bottom() * ker_top, tol);
    return out;
}

inline LinearRelation rel_inverse(const LinearRelation& t, const Tolerance& tol = {}) {
    return make_relation(t.dim_k, t.dim_h, vstack(t.bottom(), t.top()), tol);
}

inline LinearRelation rel_scale(const LinearRelation& t, cplx z, const Tolerance& tol = {}) {
    return make_relation(t.dim_h, t.dim_k, vstack(t.top(), z * t.bottom()), tol);
}

/// Composition RT = {(f,k) | (f,g) in T, (g,k) in R for some g}.
inline LinearRelation rel_compose(const LinearRelation& r, const LinearRelation& t,
                                  const Tolerance& tol = {}) {
    if (t.dim_k != r.dim_h) throw DimensionError("rel_compose: middle space mismatch");
    const std::size_t h = t.dim_h, k = t.dim_k, m = r.dim_k;
    // Triples (f,g,x) with (f,g) in T:
    Matrix lift_t(h + k + m, t.dim() + m);
    lift_t.set_block(0, 0, t.pairs);
    lift_t.set_block(h + k, t.dim(), Matrix::identity(m));
    // Triples (f,g,x) with (g,x) in R:
    Matrix lift_r(h + k + m, r.dim() + h);
    lift_r.set_block(h, 0, r.pairs);
    lift_r.set_block(0, r.dim(), Matrix::identity(h));
    const Matrix triples = subspace_intersection(lift_t, lift_r, tol);
    Matrix proj(h + m, h + k + m);
    proj.set_block(0, 0, Matrix::identity(h));
    proj.set_block(h, h + k, Matrix::identity(m));
    return make_relation(h, m, proj * triples, tol);
}

/// Sum S+T = {(f, g+x) | (f,g) in S, (f,x) in T}.
inline LinearRelation rel_sum(const LinearRelation& s, const LinearRelation& t,
                              const Tolerance& tol = {}) {
    if (s.dim_h != t.dim_h || s.dim_k != t.dim_k) throw DimensionError("rel_sum: shape mismatch");
    const std::size_t h = s.dim_h, k = s.dim_k;
    // Triples (f,g,x) with (f,g) in S:
    Matrix lift_s(h + 2 * k, s.dim() + k);
    lift_s.set_block(0, 0, s.pairs);
    lift_s.set_block(h + k, s.dim(), Matrix::identity(k));
    // Triples (f,g,x) with (f,x) in T:
    Matrix lift_t(h + 2 * k, t.dim() + k);
    lift_t.set_block(0, 0, t.top());
    lift_t.set_block(h + k, 0, t.bottom());
    lift_t.set_block(h, t.dim(), Matrix::identity(k));
    const Matrix triples = subspace_intersection(lift_s, lift_t, tol);
    Matrix collapse(h + k, h + 2 * k);
    collapse.set_block(0, 0, Matrix::identity(h));
    collapse.set_block(h, h, Matrix::identity(k));
    collapse.set_block(h, h + k, Matrix::identity(k));
    return make_relation(h, k, collapse * triples, tol);
}

/**
 * @brief Adjoint relation T^+ = {(k,h) | [k,g] = (h,f) for all (f,g) in T},
 * with optional fundamental symmetries on either side (identity if absent).
 */
inline LinearRelation rel_adjoint(const LinearRelation& t,
                                  const std::optional<FundamentalSymmetry>& j_h,
                                  const std::optional<FundamentalSymmetry>& j_k,
                                  const Tolerance& tol = {}) {
    if (j_h && j_h->dim() != t.dim_h) throw DimensionError("rel_adjoint: J_H dimension");
    if (j_k && j_k->dim() != t.dim_k) throw DimensionError("rel_adjoint: J_K dimension");
    const Matrix f = t.top(), g = t.bottom();
    const Matrix jh = j_h ? j_h->j : Matrix::identity(t.dim_h);
    const Matrix jk = j_k ? j_k->j : Matrix::identity(t.dim_k);
    // Generators give constraint rows  g_i^* J_K k - f_i^* J_H h = 0.
    const Matrix constraints = hstack(g.adjoint() * jk, -1.0 * (f.adjoint() * jh));
    return make_relation(t.dim_k, t.dim_h, kernel_basis(constraints, tol), tol);
}

struct OperatorPartSplit {
    LinearRelation t_tilde;  ///< single-valued part, D(T~) = D(T)
    LinearRelation t_inf;    ///< purely multivalued part {(0,g) in T}
};

/// The split T = T~ (+) T_inf with K-components of T~ orthogonal to T(0).
inline OperatorPartSplit operator_part_split(const LinearRelation& t, const Tolerance& tol = {}) {
    const Matrix mul = rank_and_range(t.bottom() * kernel_basis(t.top(), tol), tol).range_basis;
    OperatorPartSplit out;
    out.t_inf = make_relation(t.dim_h, t.dim_k, vstack(Matrix(t.dim_h, mul.cols()), mul), tol);
    // Strip the T(0)-component from every K-side generator.
    const Matrix projected = t.bottom() - mul * (mul.adjoint() * t.bottom());
    out.t_tilde = make_relation(t.dim_h, t.dim_k, vstack(t.top(), projected), tol);
    return out;
}

}  // namespace nev
