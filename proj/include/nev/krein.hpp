#pragma once

#include <cstddef>
#include <optional>

#include "nev/eigen.hpp"
#include "nev/factor.hpp"
#include "nev/matrix.hpp"

namespace nev {

/**
 * @brief A fundamental symmetry J: Hermitian involution defining the
 * indefinite product [x,y] = (Jx, y) on coordinates.
 */
struct FundamentalSymmetry {
    Matrix j;
    std::size_t negative_index = 0;

    std::size_t dim() const { return j.rows(); }

    static FundamentalSymmetry identity(std::size_t n) {
        return {Matrix::identity(n), 0};
    }
};

/// Validate a candidate J (Hermitian, involutive) and count its negative index.
inline FundamentalSymmetry validate_symmetry(const Matrix& j, const Tolerance& tol = {}) {
    if (j.rows() != j.cols()) throw DimensionError("fundamental symmetry must be square");
    const double scale = std::max(1.0, j.norm_fro());
    if ((j - j.adjoint()).norm_fro() > tol.relative_eps * scale)
        throw NotHermitianError("J != J*");
    if ((j * j - Matrix::identity(j.rows())).norm_fro() > tol.relative_eps * scale * scale)
        throw NotInvolutiveError("J*J != I");
    FundamentalSymmetry fs{hermitize(j), 0};
    fs.negative_index = hermitian_inertia(fs.j, tol).n_minus;
    return fs;
}

/**
 * @brief Indefinite adjoint T^+ = J_dom T* J_cod for T mapping the J_dom side
 * into the J_cod side; a missing symmetry means that side is Hilbert.
 */
inline Matrix j_adjoint(const Matrix& t, const std::optional<FundamentalSymmetry>& j_dom,
                        const std::optional<FundamentalSymmetry>& j_cod) {
    if (j_dom && j_dom->dim() != t.cols())
        throw DimensionError("j_adjoint: J_dom dimension vs T columns");
    if (j_cod && j_cod->dim() != t.rows())
        throw DimensionError("j_adjoint: J_cod dimension vs T rows");
    Matrix result = t.adjoint();
    if (j_cod) result = result * j_cod->j;
    if (j_dom) result = j_dom->j * result;
    return result;
}

struct Signature {
    std::size_t n_plus = 0, n_zero = 0, n_minus = 0;
};

/**
 * @brief Inertia of the Gram matrix B* J B of a subspace given by an
 * independent column basis B. Degenerate subspaces are reported, not errored.
 */
inline Signature subspace_signature(const Matrix& basis, const FundamentalSymmetry& j,
                                    const Tolerance& tol = {}) {
    if (basis.rows() != j.dim()) throw DimensionError("subspace_signature: basis vs J dimension");
    if (rank_and_range(basis, tol).rank != basis.cols())
        throw RankDeficientError("subspace_signature: basis columns are dependent");
    const Matrix gram = hermitize(basis.adjoint() * (j.j * basis));
    const Inertia in = hermitian_inertia(gram, tol);
    return {in.n_plus, in.n_zero, in.n_minus};
}

/// True iff A is self-adjoint for the J-product, i.e. J*A is Hermitian.
inline bool is_j_selfadjoint(const Matrix& a, const FundamentalSymmetry& j,
                             const Tolerance& tol = {}) {
    if (a.rows() != a.cols() || a.rows() != j.dim())
        throw DimensionError("is_j_selfadjoint: A vs J dimension");
    const Matrix ja = j.j * a;
    return (ja - ja.adjoint()).norm_fro() <= tol.relative_eps * std::max(1.0, ja.norm_fro());
}

}  // namespace nev
