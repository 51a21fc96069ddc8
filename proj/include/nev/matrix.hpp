#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "nev/errors.hpp"

namespace nev {

using cplx = std::complex<double>;

/// Dense rectangular complex matrix, row-major. The universal value carrier;
/// every concrete operator (A, Gamma, J, P, ...) is one of these.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionError("ragged initializer list");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }

    Matrix adjoint() const {
        Matrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Matrix transpose() const {
        Matrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    Matrix conj() const {
        Matrix m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = std::conj((*this)(i, j));
        return m;
    }

    Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
        Matrix m(nrows, ncols);
        for (std::size_t i = 0; i < nrows; ++i)
            for (std::size_t j = 0; j < ncols; ++j) m(i, j) = (*this)(row0 + i, col0 + j);
        return m;
    }

    Matrix col(std::size_t j) const { return block(0, j, rows_, 1); }

    void set_block(std::size_t row0, std::size_t col0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(row0 + i, col0 + j) = b(i, j);
    }

    double norm_fro() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        for (const auto& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b, "operator+");
        Matrix m = a;
        for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] += b.data_[k];
        return m;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b, "operator-");
        Matrix m = a;
        for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] -= b.data_[k];
        return m;
    }

    friend Matrix operator-(const Matrix& a) { return cplx{-1.0, 0.0} * a; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw DimensionError("matrix product " + shape_str(a) + " * " + shape_str(b));
        Matrix m(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
            }
        return m;
    }

    friend Matrix operator*(cplx s, const Matrix& a) {
        Matrix m = a;
        for (auto& v : m.data_) v *= s;
        return m;
    }
    friend Matrix operator*(const Matrix& a, cplx s) { return s * a; }
    friend Matrix operator*(double s, const Matrix& a) { return cplx{s, 0.0} * a; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

  private:
    static std::string shape_str(const Matrix& m) {
        return std::to_string(m.rows_) + "x" + std::to_string(m.cols_);
    }
    static void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DimensionError(std::string(op) + " " + shape_str(a) + " vs " + shape_str(b));
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

inline Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.cols() == 0 && a.rows() == 0) return b;
    if (b.cols() == 0 && b.rows() == 0) return a;
    if (a.rows() != b.rows()) throw DimensionError("hstack row mismatch");
    Matrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.rows() == 0 && a.cols() == 0) return b;
    if (b.rows() == 0 && b.cols() == 0) return a;
    if (a.cols() != b.cols()) throw DimensionError("vstack col mismatch");
    Matrix m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

/// Block-diagonal composition; empty blocks are dropped.
inline Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

inline bool is_hermitian(const Matrix& m, double eps) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm_fro() <= eps * std::max(1.0, m.norm_fro());
}

/// (M + M*)/2.
inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

/// Numerical tolerances threaded through every operation.
struct Tolerance {
    double relative_eps = 1e-9;   ///< residual scale for solves / decompositions
    double condition_cap = 1e8;   ///< "boundedly invertible" means condition <= cap
    double sign_eps = 1e-9;       ///< eigenvalues below sign_eps*max(1,|M|) count as zero

    void validate() const {
        if (!(relative_eps >= 0.0 && relative_eps < 1.0))
            throw ValidationError("tolerance_invalid", "relative_eps must be in [0,1)");
        if (!(condition_cap > 1.0))
            throw ValidationError("tolerance_invalid", "condition_cap must be > 1");
        if (!(sign_eps >= 0.0))
            throw ValidationError("tolerance_invalid", "sign_eps must be nonnegative");
    }
};

}  // namespace nev
