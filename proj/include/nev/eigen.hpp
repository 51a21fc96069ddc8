#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "nev/matrix.hpp"

namespace nev {

struct HermitianEigen {
    std::vector<double> eigenvalues;  ///< ascending
    Matrix basis;                     ///< unitary, columns are eigenvectors
};

/// Classify an eigenvalue against the zero threshold sign_eps*max(1,|M|).
enum class SignClass { Negative, Zero, Positive };

inline SignClass classify_eigenvalue(double lambda, double matrix_norm, const Tolerance& tol) {
    const double thresh = tol.sign_eps * std::max(1.0, matrix_norm);
    if (lambda > thresh) return SignClass::Positive;
    if (lambda < -thresh) return SignClass::Negative;
    return SignClass::Zero;
}

/**
 * @brief Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
 *
 * The input is symmetrized by averaging with its adjoint; deviation beyond
 * relative_eps*|M| is an error. Off-diagonal entries are annihilated pairwise
 * with unitary plane rotations until the off-diagonal mass is at round-off.
 */
inline HermitianEigen hermitian_eigen(const Matrix& m_in, const Tolerance& tol = {}) {
    if (m_in.rows() != m_in.cols()) throw DimensionError("hermitian_eigen needs a square matrix");
    const std::size_t n = m_in.rows();
    const double mnorm = m_in.norm_fro();
    if ((m_in - m_in.adjoint()).norm_fro() > 2.0 * std::max(tol.relative_eps, 1e-12) * std::max(1.0, mnorm))
        throw NotHermitianError("hermitian_eigen input deviates from M* beyond tolerance");

    Matrix a = hermitize(m_in);
    Matrix v = Matrix::identity(n);
    if (n == 0) return {{}, v};

    auto offdiag = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const double stop = 1e-15 * std::max(1.0, mnorm);
    for (int sweep = 0; sweep < 60 && offdiag() > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq <= 1e-18 * std::max(1.0, mnorm)) continue;
                // Phase factor reduces the 2x2 block to a real symmetric one.
                const cplx phase = apq / abs_apq;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * abs_apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = t * c * phase;
                // Columns: [vp, vq] <- [vp, vq] * [[c, s],[-conj(s), c]]
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - std::conj(s) * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = std::conj(s) * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - std::conj(s) * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEigen out;
    out.eigenvalues.resize(n);
    out.basis = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.basis(i, k) = v(i, order[k]);
    }
    return out;
}

/// Counts of (negative, zero, positive) eigenvalues of a Hermitian matrix.
struct Inertia {
    std::size_t n_minus = 0, n_zero = 0, n_plus = 0;
};

inline Inertia hermitian_inertia(const Matrix& m, const Tolerance& tol = {}) {
    const auto eig = hermitian_eigen(m, tol);
    Inertia in;
    const double norm = m.norm_fro();
    for (double lam : eig.eigenvalues) {
        switch (classify_eigenvalue(lam, norm, tol)) {
            case SignClass::Negative: ++in.n_minus; break;
            case SignClass::Zero: ++in.n_zero; break;
            case SignClass::Positive: ++in.n_plus; break;
        }
    }
    return in;
}

/**
 * @brief Eigenvalues of a general square complex matrix.
 *
 * Householder reduction to Hessenberg form followed by the shifted QR
 * iteration with Wilkinson shifts and deflation. Values only; root subspaces
 * are computed elsewhere from kernels of powers.
 */
inline std::vector<cplx> general_eigenvalues(const Matrix& m_in) {
    if (m_in.rows() != m_in.cols()) throw DimensionError("general_eigenvalues needs a square matrix");
    const std::size_t n = m_in.rows();
    if (n == 0) return {};
    Matrix h = m_in;
    const double scale = std::max(1.0, h.norm_fro());

    // Householder reduction to upper Hessenberg.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double colnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) colnorm += std::norm(h(i, k));
        colnorm = std::sqrt(colnorm);
        if (colnorm <= 1e-300) continue;
        cplx alpha = h(k + 1, k);
        const cplx phase = (std::abs(alpha) > 0.0) ? alpha / std::abs(alpha) : cplx{1.0, 0.0};
        const cplx beta = -phase * colnorm;
        std::vector<cplx> w(n, cplx{});
        w[k + 1] = alpha - beta;
        for (std::size_t i = k + 2; i < n; ++i) w[i] = h(i, k);
        double wnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) wnorm2 += std::norm(w[i]);
        if (wnorm2 <= 1e-300) continue;
        // H <- (I - 2ww*/|w|^2) H (I - 2ww*/|w|^2)
        for (std::size_t j = 0; j < n; ++j) {
            cplx dot = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(w[i]) * h(i, j);
            dot *= 2.0 / wnorm2;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= dot * w[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx dot = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * w[j];
            dot *= 2.0 / wnorm2;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(w[j]);
        }
    }

    std::vector<cplx> eigs;
    eigs.reserve(n);
    std::size_t hi = n;  // active block is h[0..hi)
    int iter_since_deflation = 0;
    std::size_t total_iters = 0;
    const std::size_t iter_cap = 200 * n + 200;
    while (hi > 0) {
        if (++total_iters > iter_cap)
            throw NumericalError("qr_no_convergence",
                                 "shifted QR iteration failed to deflate");
        // Deflate negligible subdiagonals.
        std::size_t lo = hi - 1;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            if (sub <= 1e-15 * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo)) + scale)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi - 1) {
            eigs.push_back(h(hi - 1, hi - 1));
            --hi;
            iter_since_deflation = 0;
            continue;
        }

        // Wilkinson shift from the trailing 2x2 of the active block.
        const cplx a = h(hi - 2, hi - 2), b = h(hi - 2, hi - 1);
        const cplx c = h(hi - 1, hi - 2), d = h(hi - 1, hi - 1);
        const cplx tr = a + d;
        const cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
        cplx mu1 = 0.5 * (tr + disc), mu2 = 0.5 * (tr - disc);
        cplx shift = (std::abs(mu1 - d) < std::abs(mu2 - d)) ? mu1 : mu2;
        if (++iter_since_deflation % 20 == 0) shift += cplx{0.0, 1.0} * (0.1 * std::abs(b) + 1e-3 * scale);

        // Explicit shifted QR step on the active block:
        // H - shift = Q R (Givens on the Hessenberg form), H <- R Q + shift.
        for (std::size_t i = lo; i < hi; ++i) h(i, i) -= shift;
        std::vector<std::pair<cplx, cplx>> rot(hi - lo - 1);  // (c, s)
        for (std::size_t k = lo; k + 1 < hi; ++k) {
            const cplx x = h(k, k), y = h(k + 1, k);
            const double r = std::sqrt(std::norm(x) + std::norm(y));
            cplx cr = 1.0, sr = 0.0;
            if (r > 1e-300) {
                cr = x / r;
                sr = y / r;
            }
            rot[k - lo] = {cr, sr};
            for (std::size_t j = k; j < hi; ++j) {
                const cplx t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = std::conj(cr) * t1 + std::conj(sr) * t2;
                h(k + 1, j) = -sr * t1 + cr * t2;
            }
        }
        for (std::size_t k = lo; k + 1 < hi; ++k) {
            const auto [cr, sr] = rot[k - lo];
            for (std::size_t i = lo; i < std::min(hi, k + 2); ++i) {
                const cplx t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = t1 * cr + t2 * sr;
                h(i, k + 1) = -t1 * std::conj(sr) + t2 * std::conj(cr);
            }
        }
        for (std::size_t i = lo; i < hi; ++i) h(i, i) += shift;
    }
    return eigs;
}

/// Cluster eigenvalues at distance delta and report (center, multiplicity).
inline std::vector<std::pair<cplx, std::size_t>> cluster_eigenvalues(std::vector<cplx> eigs,
                                                                     double delta) {
    std::sort(eigs.begin(), eigs.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<std::pair<cplx, std::size_t>> out;
    for (const cplx& e : eigs) {
        bool merged = false;
        for (auto& [center, mult] : out) {
            if (std::abs(e - center) <= delta) {
                center = (center * static_cast<double>(mult) + e) / static_cast<double>(mult + 1);
                ++mult;
                merged = true;
                break;
            }
        }
        if (!merged) out.emplace_back(e, 1);
    }
    return out;
}

}  // namespace nev
