#pragma once

#include "nev/realization.hpp"

namespace fixtures {

using nev::cplx;
using nev::Matrix;

/// Two-state realization with a nilpotent Jordan block:
/// Q(z) = -[[0, 1/z], [1/z, 1/z^2]], kappa = 1.
inline nev::Realization nilpotent_shift() {
    const Matrix j{{0.0, 1.0}, {1.0, 0.0}};
    const Matrix a{{0.0, 1.0}, {0.0, 0.0}};
    const Matrix gamma = Matrix::identity(2);
    return nev::make_realization(j, a, gamma);
}

/// Three-state realization with kappa = 2 whose inverse splits as
/// Q1(z) = [[(z-1)/2, -z/2], [-z/2, -(1+z)/2]], Q2(z) = [[1/(2(1+z)), 0], [0, 0]].
inline nev::Realization rank_two_mixed() {
    const Matrix j{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, -1.0}};
    const Matrix a{{0.0, 1.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, -1.0}};
    const Matrix gamma{{0.5, -1.0}, {1.0, 0.0}, {0.0, -1.0}};
    return nev::make_realization(j, a, gamma);
}

/// Closed form of Q for nilpotent_shift.
inline Matrix nilpotent_shift_q(cplx z) {
    return Matrix{{0.0, -1.0 / z}, {-1.0 / z, -1.0 / (z * z)}};
}

/// Closed forms of the inverse parts for rank_two_mixed.
inline Matrix rank_two_mixed_q1(cplx z) {
    return Matrix{{0.5 * (z - 1.0), -0.5 * z}, {-0.5 * z, -0.5 * (1.0 + z)}};
}

inline Matrix rank_two_mixed_q2(cplx z) {
    return Matrix{{0.5 / (1.0 + z), 0.0}, {0.0, 0.0}};
}

}  // namespace fixtures
