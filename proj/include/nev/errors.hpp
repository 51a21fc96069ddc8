#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nev {

/// Base class for all library errors. `what()` starts with the name of the
/// violated invariant, e.g. "dimension_mismatch: ...".
struct Error : std::runtime_error {
    explicit Error(const std::string& invariant, const std::string& detail)
        : std::runtime_error(invariant + ": " + detail), invariant_name(invariant) {}
    std::string invariant_name;
};

/// Input/validation failures (bad dimensions, non-Hermitian data, schema).
struct ValidationError : Error {
    using Error::Error;
};

struct DimensionError : ValidationError {
    explicit DimensionError(const std::string& detail)
        : ValidationError("dimension_mismatch", detail) {}
};

struct NotHermitianError : ValidationError {
    explicit NotHermitianError(const std::string& detail)
        : ValidationError("not_hermitian", detail) {}
};

struct NotInvolutiveError : ValidationError {
    explicit NotInvolutiveError(const std::string& detail)
        : ValidationError("not_involutive", detail) {}
};

struct RankDeficientError : ValidationError {
    explicit RankDeficientError(const std::string& detail)
        : ValidationError("rank_deficient_basis", detail) {}
};

/// Numerical failures (exact singularity, condition cap exceeded).
struct NumericalError : Error {
    using Error::Error;
};

struct SingularMatrixError : NumericalError {
    SingularMatrixError(const std::string& detail, std::size_t numerical_rank)
        : NumericalError("singular_matrix", detail), rank(numerical_rank) {}
    std::size_t rank;
};

struct ConditionCapError : NumericalError {
    ConditionCapError(const std::string& detail, double condition)
        : NumericalError("condition_cap_exceeded", detail), condition_estimate(condition) {}
    double condition_estimate;
};

/// Violations of the standing hypotheses of the inversion formulas
/// (Gamma^+Gamma not boundedly invertible, evaluation at a pole, ...).
struct AssumptionError : Error {
    using Error::Error;
};

struct PoleError : AssumptionError {
    PoleError(const std::string& detail, std::complex<double> pole)
        : AssumptionError("z_at_pole", detail), eigenvalue(pole) {}
    std::complex<double> eigenvalue;
};

struct NotHolomorphicAtInfinityError : AssumptionError {
    explicit NotHolomorphicAtInfinityError(const std::string& detail)
        : AssumptionError("not_holomorphic_at_infinity", detail) {}
};

}  // namespace nev
