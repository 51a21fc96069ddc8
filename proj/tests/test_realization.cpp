#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nev/realization.hpp"

using namespace nev;

namespace {

Realization padded_nilpotent_shift() {
    const auto r = fixtures::nilpotent_shift();
    const Matrix j = block_diag(r.sym.j, Matrix::identity(1));
    const Matrix a = block_diag(r.a, 2.0 * Matrix::identity(1));
    const Matrix gamma = vstack(r.gamma, Matrix::zero(1, 2));
    return make_realization(j, a, gamma);
}

double max_eval_gap(const Realization& a, const Realization& b, std::size_t count,
                    std::uint64_t seed) {
    double worst = 0.0;
    for (const cplx& z : default_sample_points(a, count, seed))
        worst = std::max(worst, (evaluate(a, z) - evaluate(b, z)).norm_fro());
    return worst;
}

}  // namespace

TEST_CASE("evaluate matches the closed form of the nilpotent-shift fixture") {
    const auto r = fixtures::nilpotent_shift();
    const cplx i{0.0, 1.0};
    const Matrix expected{{0.0, i}, {i, 1.0}};
    CHECK((evaluate(r, i) - expected).norm_fro() <= 1e-14);
    for (const cplx& z : default_sample_points(r, 5, 41))
        CHECK((evaluate(r, z) - fixtures::nilpotent_shift_q(z)).norm_fro() <= 1e-12);
}

TEST_CASE("evaluate matches the printed value of the three-state fixture at 2i") {
    const auto r = fixtures::rank_two_mixed();
    const Matrix expected{{cplx{0.25, 0.5}, cplx{0.0, -0.5}},
                          {cplx{0.0, -0.5}, cplx{0.2, -0.4}}};
    CHECK((evaluate(r, cplx{0.0, 2.0}) - expected).norm_fro() <= 1e-14);
}

TEST_CASE("evaluate errors at the spectrum") {
    const auto r = fixtures::nilpotent_shift();
    CHECK_THROWS_AS(evaluate(r, cplx{0.0, 0.0}), PoleError);
}

TEST_CASE("derivative_at_infinity equals minus Gamma^+ Gamma") {
    CHECK((derivative_at_infinity(fixtures::nilpotent_shift()) -
           Matrix{{0.0, -1.0}, {-1.0, 0.0}})
              .norm_fro() <= 1e-15);
    CHECK((derivative_at_infinity(fixtures::rank_two_mixed()) -
           Matrix{{-1.0, 1.0}, {1.0, 1.0}})
              .norm_fro() <= 1e-15);
}

TEST_CASE("derivative_at_infinity is the limit of z Q(z) on the imaginary axis") {
    const auto r = fixtures::rank_two_mixed();
    const Matrix limit = derivative_at_infinity(r);
    double prev = 1e300;
    for (double t : {1e3, 1e4, 1e5, 1e6}) {
        const cplx z{0.0, t};
        const double gap = (z * evaluate(r, z) - limit).norm_fro();
        CHECK(gap < prev);
        prev = gap;
        CHECK(gap <= 10.0 / t);
    }
}

TEST_CASE("derivative_at_infinity for zero Gamma is zero") {
    const auto r = make_realization(Matrix::identity(2), Matrix::identity(2), Matrix::zero(2, 2));
    CHECK(derivative_at_infinity(r).norm_fro() == 0.0);
}

TEST_CASE("minimality holds for both fixtures and fails for a padded state") {
    const auto m4 = minimality(fixtures::rank_two_mixed());
    CHECK(m4.is_minimal);
    CHECK(m4.reachable_basis.cols() == 3);
    const auto m2 = minimality(fixtures::nilpotent_shift());
    CHECK(m2.is_minimal);
    CHECK(m2.reachable_basis.cols() == 2);
    const auto padded = minimality(padded_nilpotent_shift());
    CHECK_FALSE(padded.is_minimal);
    CHECK(padded.reachable_basis.cols() == 2);
}

TEST_CASE("reduce_to_minimal is an evaluation-preserving fixed point on minimal input") {
    const auto r = fixtures::rank_two_mixed();
    const auto red = reduce_to_minimal(r);
    CHECK(red.state_dim() == 3);
    CHECK(max_eval_gap(r, red, 10, 43) <= 1e-9);
    CHECK(red.sym.negative_index == r.sym.negative_index);
}

TEST_CASE("reduce_to_minimal strips an unreachable state") {
    const auto padded = padded_nilpotent_shift();
    const auto red = reduce_to_minimal(padded);
    CHECK(red.state_dim() == 2);
    CHECK(minimality(red).is_minimal);
    CHECK(max_eval_gap(padded, red, 10, 47) <= 1e-9);
}

TEST_CASE("reduce_to_minimal of a zero Gamma is a zero-state realization") {
    const auto r = make_realization(Matrix::identity(2), Matrix::identity(2), Matrix::zero(2, 2));
    const auto red = reduce_to_minimal(r);
    CHECK(red.state_dim() == 0);
}

TEST_CASE("pointed and resolvent forms round-trip") {
    const auto r = fixtures::rank_two_mixed();
    const auto kl = from_resolvent_form(r, cplx{0.0, 1.0});
    const auto back = to_resolvent_form(kl);
    CHECK_FALSE(back.s.has_value());
    CHECK((back.gamma - r.gamma).norm_fro() <= 1e-10);
    for (const cplx& z : default_sample_points(r, 5, 53))
        CHECK((evaluate_kl(kl, z) - evaluate(r, z)).norm_fro() <= 1e-12);
}

TEST_CASE("pointed form of the nilpotent shift matches the closed-form resolvent") {
    const auto r = fixtures::nilpotent_shift();
    const cplx z0{0.0, 2.0};
    const auto kl = from_resolvent_form(r, z0);
    // (A - 2i I)^{-1} for the 2x2 Jordan block at 0.
    const cplx d = 1.0 / (-z0);
    const Matrix expected{{d, -d * d}, {0.0, d}};
    CHECK((kl.gamma_z0 - expected).norm_fro() <= 1e-14);
}

TEST_CASE("resolvent identity for the pointed column map") {
    const auto r = fixtures::rank_two_mixed();
    const cplx z{1.0, 1.0}, w{-2.0, 0.7};
    const auto klz = from_resolvent_form(r, z);
    const auto klw = from_resolvent_form(r, w);
    const Matrix shifted = r.a - z * Matrix::identity(3);
    const Matrix rhs = (z - w) * solve_or_invert(shifted, klw.gamma_z0).solution;
    CHECK((klz.gamma_z0 - klw.gamma_z0 - rhs).norm_fro() <= 1e-12);
}

TEST_CASE("from_resolvent_form rejects real reference points") {
    CHECK_THROWS_AS(from_resolvent_form(fixtures::nilpotent_shift(), cplx{1.0, 0.0}),
                    ValidationError);
}

TEST_CASE("kernel_of_q is trivial for both fixtures") {
    CHECK(kernel_of_q(fixtures::rank_two_mixed(), 6, 59).cols() == 0);
    CHECK(kernel_of_q(fixtures::nilpotent_shift(), 6, 59).cols() == 0);
}

TEST_CASE("kernel_of_q finds a dead column of Gamma") {
    const Matrix j = Matrix::identity(2);
    const Matrix a{{1.0, 0.0}, {0.0, 2.0}};
    const Matrix gamma{{1.0, 0.0}, {0.0, 0.0}};
    const auto r = make_realization(j, a, gamma);
    const Matrix ker = kernel_of_q(r, 6, 61);
    REQUIRE(ker.cols() == 1);
    CHECK(std::abs(ker(1, 0)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("split_at_pole separates the Jordan block from the simple pole") {
    const auto r = fixtures::rank_two_mixed();
    const auto split = split_at_pole(r, cplx{0.0, 0.0});
    CHECK(split.r_alpha.state_dim() == 2);
    CHECK(split.h_alpha.state_dim() == 1);
    for (const cplx& lam : spectrum(split.r_alpha)) CHECK(std::abs(lam) <= 1e-8);
    for (const cplx& lam : spectrum(split.h_alpha))
        CHECK(std::abs(lam - cplx{-1.0, 0.0}) <= 1e-8);
    for (const cplx& z : default_sample_points(r, 10, 67)) {
        const Matrix sum = evaluate(split.r_alpha, z) + evaluate(split.h_alpha, z);
        CHECK((sum - evaluate(r, z)).norm_fro() <= 1e-10);
    }
}

TEST_CASE("split_at_pole at the only eigenvalue keeps everything in the pole part") {
    const auto r = fixtures::nilpotent_shift();
    const auto split = split_at_pole(r, cplx{0.0, 0.0});
    CHECK(split.r_alpha.state_dim() == 2);
    CHECK(split.h_alpha.state_dim() == 0);
    for (const cplx& z : default_sample_points(r, 5, 71))
        CHECK((evaluate(split.r_alpha, z) - evaluate(r, z)).norm_fro() <= 1e-12);
}

TEST_CASE("split_at_pole rejects a point outside the spectrum") {
    CHECK_THROWS_AS(split_at_pole(fixtures::rank_two_mixed(), cplx{5.0, 0.0}),
                    AssumptionError);
}

TEST_CASE("regularize_derivative returns an already-regular realization unchanged") {
    const auto r = fixtures::nilpotent_shift();
    const auto out = regularize_derivative(r, 3.0, 0.0);
    CHECK(out.state_dim() == r.state_dim());
    CHECK((out.gamma - r.gamma).norm_fro() == 0.0);
}

TEST_CASE("regularize_derivative lifts the zero eigenvalue of Gamma^+ Gamma") {
    const Matrix j = Matrix::identity(2);
    const Matrix a = Matrix::zero(2, 2);
    const Matrix gamma{{1.0, 0.0}, {0.0, 0.0}};
    const auto r = make_realization(j, a, gamma);
    CHECK_THROWS_AS(regularize_derivative(r, 1.0, 0.0), AssumptionError);

    const auto aug = regularize_derivative(r, 1.0, 1.0);
    const Matrix gpg = hermitize(aug.gamma_plus() * aug.gamma);
    const auto res = invert(gpg);
    CHECK(res.boundedly_invertible);
    CHECK(res.condition_estimate <= 1e6);

    // The augmentation adds exactly B/(beta - z) with B the kernel projection.
    const Matrix b{{0.0, 0.0}, {0.0, 1.0}};
    for (const cplx& z : default_sample_points(aug, 5, 73)) {
        const Matrix diff = evaluate(aug, z) - evaluate(r, z);
        CHECK((diff - (1.0 / (1.0 - z)) * b).norm_fro() <= 1e-10);
    }
}

TEST_CASE("evaluation is conjugate-symmetric") {
    for (const auto& r : {fixtures::nilpotent_shift(), fixtures::rank_two_mixed()})
        for (const cplx& z : default_sample_points(r, 8, 79))
            CHECK((evaluate(r, std::conj(z)) - evaluate(r, z).adjoint()).norm_fro() <= 1e-12);
}

TEST_CASE("validation rejects a non-J-self-adjoint A") {
    const Matrix j = Matrix::identity(2);
    const Matrix a{{0.0, 1.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(make_realization(j, a, Matrix::identity(2)), NotHermitianError);
}
