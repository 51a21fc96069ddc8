#pragma once

// Brute-force reference implementations for the linear-relation algebra,
// built on plain Gaussian elimination so they share no code path with the
// library's QR-based routines. Subspaces are matrices whose columns span.

#include <cstddef>
#include <vector>

#include "nev/matrix.hpp"
#include "nev/relation.hpp"

namespace oracle {

using nev::cplx;
using nev::Matrix;

inline constexpr double kEps = 1e-9;

/// Row echelon rank by Gaussian elimination with partial pivoting.
inline std::size_t rank(Matrix m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    const double scale = std::max(1.0, m.max_abs());
    std::size_t rk = 0;
    for (std::size_t col = 0; col < cols && rk < rows; ++col) {
        std::size_t piv = rk;
        double best = std::abs(m(rk, col));
        for (std::size_t i = rk + 1; i < rows; ++i)
            if (std::abs(m(i, col)) > best) {
                best = std::abs(m(i, col));
                piv = i;
            }
        if (best <= kEps * scale) continue;
        if (piv != rk)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(rk, j), m(piv, j));
        for (std::size_t i = rk + 1; i < rows; ++i) {
            const cplx f = m(i, col) / m(rk, col);
            for (std::size_t j = col; j < cols; ++j) m(i, j) -= f * m(rk, j);
        }
        ++rk;
    }
    return rk;
}

/// span(a) == span(b), via rank of the stacked block.
inline bool same_span(const Matrix& a, const Matrix& b) {
    const std::size_t ra = rank(a), rb = rank(b);
    if (ra != rb) return false;
    if (ra == 0) return true;
    return rank(nev::hstack(a, b)) == ra;
}

/// Columns spanning ker(M), from the RREF free-variable construction.
inline Matrix nullspace(Matrix m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    const double scale = std::max(1.0, m.max_abs());
    std::vector<std::size_t> pivot_col;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < cols && lead < rows; ++col) {
        std::size_t piv = lead;
        double best = std::abs(m(lead, col));
        for (std::size_t i = lead + 1; i < rows; ++i)
            if (std::abs(m(i, col)) > best) {
                best = std::abs(m(i, col));
                piv = i;
            }
        if (best <= kEps * scale) continue;
        if (piv != lead)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(lead, j), m(piv, j));
        const cplx inv = 1.0 / m(lead, col);
        for (std::size_t j = 0; j < cols; ++j) m(lead, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == lead) continue;
            const cplx f = m(i, col);
            for (std::size_t j = 0; j < cols; ++j) m(i, j) -= f * m(lead, j);
        }
        pivot_col.push_back(col);
        ++lead;
    }
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    Matrix basis(cols, 0);
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Matrix v(cols, 1);
        v(free, 0) = 1.0;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) v(pivot_col[r], 0) = -m(r, free);
        basis = nev::hstack(basis, v);
    }
    return basis;
}

struct RelationSpan {
    std::size_t dim_h = 0, dim_k = 0;
    Matrix pairs;  ///< (dim_h + dim_k) x r, any spanning set

    Matrix top() const { return pairs.block(0, 0, dim_h, pairs.cols()); }
    Matrix bottom() const { return pairs.block(dim_h, 0, dim_k, pairs.cols()); }
};

inline RelationSpan inverse(const RelationSpan& t) {
    return {t.dim_k, t.dim_h, nev::vstack(t.bottom(), t.top())};
}

/// Pairs (f, k) with a middle witness: solve U_K a = V_K b, emit (U_H a, V_M b).
inline RelationSpan compose(const RelationSpan& r, const RelationSpan& t) {
    const Matrix uk = t.bottom(), vk = r.top();
    const Matrix witness = nullspace(nev::hstack(uk, -1.0 * vk));
    const std::size_t nt = t.pairs.cols();
    const Matrix a = witness.block(0, 0, nt, witness.cols());
    const Matrix b = witness.block(nt, 0, r.pairs.cols(), witness.cols());
    return {t.dim_h, r.dim_k, nev::vstack(t.top() * a, r.bottom() * b)};
}

/// Pairs (f, g + x): solve S_H a = T_H b, emit (S_H a, S_K a + T_K b).
inline RelationSpan sum(const RelationSpan& s, const RelationSpan& t) {
    const Matrix witness = nullspace(nev::hstack(s.top(), -1.0 * t.top()));
    const std::size_t ns = s.pairs.cols();
    const Matrix a = witness.block(0, 0, ns, witness.cols());
    const Matrix b = witness.block(ns, 0, t.pairs.cols(), witness.cols());
    return {s.dim_h, s.dim_k, nev::vstack(s.top() * a, s.bottom() * a + t.bottom() * b)};
}

/// Pairs (k, h) with g_i* J_K k = f_i* J_H h for every generator (f_i, g_i).
inline RelationSpan adjoint(const RelationSpan& t, const Matrix& j_h, const Matrix& j_k) {
    const Matrix constraints =
        nev::hstack(t.bottom().adjoint() * j_k, -1.0 * (t.top().adjoint() * j_h));
    return {t.dim_k, t.dim_h, nullspace(constraints)};
}

struct SplitSpan {
    RelationSpan t_tilde, t_inf;
};

inline SplitSpan operator_part_split(const RelationSpan& t) {
    const Matrix zero_top = nullspace(t.top());
    const Matrix mul = t.bottom() * zero_top;  // spans T(0)
    SplitSpan out;
    out.t_inf = {t.dim_h, t.dim_k, nev::vstack(Matrix(t.dim_h, mul.cols()), mul)};
    // Remove the T(0)-component of each generator by classical Gram-Schmidt.
    std::vector<Matrix> mul_ortho;
    for (std::size_t c = 0; c < mul.cols(); ++c) {
        Matrix v = mul.col(c);
        for (const Matrix& u : mul_ortho) v = v - (u.adjoint() * v)(0, 0) * u;
        const double n = v.norm_fro();
        if (n > kEps) mul_ortho.push_back((1.0 / n) * v);
    }
    Matrix stripped = t.bottom();
    for (std::size_t c = 0; c < stripped.cols(); ++c) {
        Matrix v = stripped.col(c);
        for (const Matrix& u : mul_ortho) v = v - (u.adjoint() * v)(0, 0) * u;
        stripped.set_block(0, c, v);
    }
    out.t_tilde = {t.dim_h, t.dim_k, nev::vstack(t.top(), stripped)};
    return out;
}

inline RelationSpan from_relation(const nev::LinearRelation& t) {
    return {t.dim_h, t.dim_k, t.pairs};
}

inline bool same_relation(const nev::LinearRelation& lib, const RelationSpan& ref) {
    if (lib.dim_h != ref.dim_h || lib.dim_k != ref.dim_k) return false;
    return same_span(lib.pairs, ref.pairs);
}

}  // namespace oracle
