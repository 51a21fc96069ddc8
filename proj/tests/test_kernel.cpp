#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "nev/kernel.hpp"

using namespace nev;

TEST_CASE("the kernel diagonal is the analytic derivative") {
    const auto r = fixtures::nilpotent_shift();
    const cplx i{0.0, 1.0};
    const Matrix n = nevanlinna_kernel(r, i, std::conj(i));
    const Matrix expected{{0.0, -1.0}, {-1.0, cplx{0.0, 2.0}}};
    CHECK((n - expected).norm_fro() <= 1e-12);
}

TEST_CASE("the diagonal branch matches a finite-difference quotient") {
    const auto r = fixtures::rank_two_mixed();
    const cplx z{0.3, 1.2};
    const double h = 1e-6;
    const Matrix fd = (1.0 / h) * (evaluate(r, z + h) - evaluate(r, z));
    CHECK((nevanlinna_kernel(r, z, std::conj(z)) - fd).norm_fro() <= 1e-5);
}

TEST_CASE("off the diagonal the kernel is the plain difference quotient") {
    const auto r = fixtures::rank_two_mixed();
    const cplx z{1.0, 1.0}, w{-2.0, 0.5};
    const Matrix direct =
        (1.0 / (z - std::conj(w))) * (evaluate(r, z) - evaluate(r, w).adjoint());
    CHECK((nevanlinna_kernel(r, z, w) - direct).norm_fro() <= 1e-13);
}

TEST_CASE("the kernel is Hermitian under swapping arguments") {
    const auto r = fixtures::rank_two_mixed();
    SamplePlan plan;
    plan.count = 4;
    plan.seed = 401;
    const auto pts = sample_points(plan, spectrum(r));
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = 0; b < pts.size(); ++b) {
            const Matrix nab = nevanlinna_kernel(r, pts[a], pts[b]);
            const Matrix nba = nevanlinna_kernel(r, pts[b], pts[a]);
            CHECK((nab.adjoint() - nba).norm_fro() <= 1e-12);
        }
}

TEST_CASE("the negative-squares estimate reaches the fixture indices") {
    SamplePlan plan4;
    plan4.count = 12;
    plan4.seed = 0;
    const auto est4 = estimate_negative_squares(fixtures::rank_two_mixed(), plan4, 2);
    CHECK(est4.kappa_lower == 2);

    SamplePlan plan2;
    plan2.count = 8;
    plan2.seed = 0;
    const auto est2 = estimate_negative_squares(fixtures::nilpotent_shift(), plan2, 2);
    CHECK(est2.kappa_lower == 1);
}

TEST_CASE("the estimate history is recorded per sample prefix and stays below kappa") {
    SamplePlan plan;
    plan.count = 12;
    plan.seed = 7;
    const auto r = fixtures::rank_two_mixed();
    const auto est = estimate_negative_squares(r, plan, 2);
    CHECK(est.history.size() == 12);
    for (std::size_t n : est.history) CHECK(n <= r.sym.negative_index);
    CHECK(est.kappa_lower <= r.sym.negative_index);
}

TEST_CASE("a classical positive-definite function has no negative squares") {
    std::mt19937_64 rng(19);
    const Matrix a = random_hermitian(rng, 4);
    const Matrix gamma = random_matrix(rng, 4, 2);
    const auto r = make_realization(Matrix::identity(4), a, gamma);
    SamplePlan plan;
    plan.count = 10;
    plan.seed = 3;
    const auto est = estimate_negative_squares(r, plan, 2);
    CHECK(est.kappa_lower == 0);
}

TEST_CASE("check_symmetry is at round-off for valid realizations") {
    SamplePlan plan;
    plan.count = 10;
    plan.seed = 5;
    CHECK(check_symmetry(fixtures::rank_two_mixed(), plan) <= 1e-12);
    CHECK(check_symmetry(fixtures::nilpotent_shift(), plan) <= 1e-12);
}

TEST_CASE("check_symmetry exposes a corrupted state operator") {
    // Bypass construction-time validation to fake an invalid realization.
    Realization r;
    r.sym = FundamentalSymmetry::identity(2);
    r.a = Matrix{{0.0, 1.0}, {0.0, 0.0}};
    r.gamma = Matrix::identity(2);
    SamplePlan plan;
    plan.count = 5;
    plan.seed = 9;
    CHECK(check_symmetry(r, plan) > 1e-3);
}
