// SPDX-License-Identifier: Apache-2.0

#include "qpencil/pencil.hpp"

#include "qpencil/matrix_functions.hpp"
#include "qpencil/operator_core.hpp"
#include "support/test_support.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

using namespace qpencil;
namespace ts = qpencil::testsupport;

namespace {

std::vector<Complex> probe_lambdas(int count) {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double r = 0.1 + 3.0 * k / std::max(1, count - 1);
        const double phi = 2.0 * kPi * k / std::max(1, count);
        out.push_back(std::polar(r, phi));
    }
    return out;
}

double residual_scale(const PencilSpec& p, Complex lambda) {
    return std::norm(lambda) + op_norm(p.b) * op_norm(p.b) + op_norm(p.c);
}

}  // namespace

TEST_CASE("validate rejects shape mismatches") {
    PencilSpec p;
    p.b = Matrix::Identity(2, 2);
    p.c = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(validate(p, "test"), ShapeMismatch);
}

TEST_CASE("convention names round-trip") {
    CHECK(convention_from_string(to_string(Convention::real_root)) == Convention::real_root);
    CHECK(convention_from_string(to_string(Convention::rotated_root)) ==
          Convention::rotated_root);
    CHECK_THROWS_AS((void)convention_from_string("sideways"), SchemaError);
}

TEST_CASE("scalar pencil factors into its two roots") {
    PencilSpec p;
    p.b = Matrix::Identity(1, 1);
    p.c = 3.0 * Matrix::Identity(1, 1);
    const Factorization f = factorize(p);
    // lambda^2 - 2 lambda - 3 = (lambda - 3)(lambda + 1)
    CHECK(std::abs(f.z1(0, 0) - Complex(3.0, 0.0)) <= 1e-13);
    CHECK(std::abs(f.z2(0, 0) - Complex(-1.0, 0.0)) <= 1e-13);
    CHECK(f.commutator_norm <= 1e-14);
    CHECK_FALSE(f.defective);
}

TEST_CASE("rotated convention factors pencils whose root data crosses the cut") {
    PencilSpec p;
    p.b = Matrix::Zero(1, 1);
    p.c = -4.0 * Matrix::Identity(1, 1);  // Lambda = -4: real branch impossible
    CHECK_THROWS_AS((void)factorize(p, Convention::real_root), NegativeRealEigenvalue);
    const Factorization f = factorize(p, Convention::rotated_root);
    // lambda^2 + 4 = (lambda - 2i)(lambda + 2i)
    CHECK(std::abs(f.z1(0, 0) - Complex(0.0, 2.0)) <= 1e-13);
    CHECK(std::abs(f.z2(0, 0) - Complex(0.0, -2.0)) <= 1e-13);
    for (Complex lambda : probe_lambdas(7)) {
        CHECK(symmetrized_residual(f, p, lambda) <= 1e-12 * residual_scale(p, lambda));
    }
}

TEST_CASE("degenerate pencil C = -B^2 collapses both factors onto B") {
    ts::Rng rng(5);
    PencilSpec p;
    p.b = ts::random_accretive(4, rng);
    p.c = -(p.b * p.b);
    const Factorization f = factorize_degenerate(p);
    CHECK(f.defective);
    CHECK((f.z1 - p.b).norm() <= 1e-12);
    CHECK((f.z2 - p.b).norm() <= 1e-12);

    PencilSpec q = p;
    q.c = Matrix::Identity(4, 4);
    CHECK_THROWS_AS((void)factorize_degenerate(q), ConstraintViolated);
}

TEST_CASE("trace identity Z1 + Z2 = 2B holds for both conventions") {
    const PencilSpec p = ts::lambda_accretive_pencil(5, 301);
    const Factorization real_f = factorize(p, Convention::real_root);
    CHECK(op_norm(Matrix(real_f.z1 + real_f.z2 - 2.0 * p.b)) <=
          1e-12 * std::max(1.0, op_norm(p.b)));

    PencilSpec rot;
    rot.b = p.b;
    rot.c = -p.c - 2.0 * (p.b * p.b);  // flips Lambda's sign, so -Lambda is accretive
    const Factorization rot_f = factorize(rot, Convention::rotated_root);
    CHECK(op_norm(Matrix(rot_f.z1 + rot_f.z2 - 2.0 * rot.b)) <=
          1e-12 * std::max(1.0, op_norm(rot.b)));
}

TEST_CASE("symmetrized residual is rounding-level for every lambda and fixture family") {
    const std::vector<PencilSpec> fixtures = {
        ts::random_accretive_pencil(4, 1001), ts::sectorial_b_pencil(5, 1002),
        ts::lambda_accretive_pencil(6, 1003), ts::commuting_pencil(4, 1004)};
    for (const PencilSpec& p : fixtures) {
        Factorization f;
        try {
            f = factorize(p, Convention::real_root);
        } catch (const NegativeRealEigenvalue&) {
            f = factorize(p, Convention::rotated_root);
        }
        for (Complex lambda : probe_lambdas(25)) {
            CHECK(symmetrized_residual(f, p, lambda) <= 1e-10 * residual_scale(p, lambda));
        }
    }
}

TEST_CASE("ordered residual equals the commutator norm independently of lambda") {
    const PencilSpec p = ts::lambda_accretive_pencil(5, 2020);
    const Factorization f = factorize(p);
    const double scale = std::max(1.0, residual_scale(p, Complex(0.0, 0.0)));
    const double commutator = op_norm(Matrix(p.b * f.s - f.s * p.b));

    std::vector<double> values;
    for (Complex lambda : probe_lambdas(20)) {
        values.push_back(ordered_residual(f, p, lambda));
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double std_dev = std::sqrt(var / static_cast<double>(values.size()));

    CHECK(std_dev <= 1e-10 * scale);
    CHECK(std::abs(mean - commutator) <= 1e-10 * scale);
    CHECK(std::abs(f.commutator_norm - commutator) <= 1e-10 * scale);
}

TEST_CASE("ordered residual vanishes exactly when B commutes with the root") {
    for (std::uint64_t seed = 3000; seed < 3005; ++seed) {
        const PencilSpec p = ts::commuting_pencil(5, seed);
        const Factorization f = factorize(p);
        const double scale = std::max(1.0, residual_scale(p, Complex(0.0, 0.0)));
        CHECK(f.commutator_norm <= 1e-12 * scale);
        for (Complex lambda : probe_lambdas(5)) {
            CHECK(ordered_residual(f, p, lambda) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("lower-bound condition: exact mode certifies and refutes correctly") {
    PencilSpec pass_case;
    pass_case.b = Matrix::Identity(3, 3);
    pass_case.c = Matrix::Identity(3, 3);
    ConditionC1Params zero;
    const ConditionReport ok = check_c1(pass_case, zero);
    CHECK(ok.pass);
    CHECK(ok.mode == "exact");
    CHECK(ok.margin == doctest::Approx(1.0).epsilon(1e-10));

    PencilSpec fail_case;
    fail_case.b = Matrix::Identity(3, 3);
    fail_case.c = -3.0 * Matrix::Identity(3, 3);
    ConditionC1Params weak;
    weak.alpha = 2.0;  // Re<B^2 x, Cx> = -3 < -2
    const ConditionReport bad = check_c1(fail_case, weak);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("lower-bound condition: sampled mode stays consistent with the exact mode") {
    const PencilSpec p = ts::random_accretive_pencil(4, 555);
    ConditionC1Params params;
    params.alpha = 50.0;  // generous bound that surely holds
    params.beta = 0.5;
    const ConditionReport exact = check_c1(p, params);
    CHECK(exact.mode == "exact");
    params.delta = 1e-9;  // force the sampled path with a negligible new term
    const ConditionReport sampled = check_c1(p, params, 20000, 7);
    CHECK(sampled.mode == "sampled");
    CHECK(sampled.pass == exact.pass);
    // Determinism in the seed.
    const ConditionReport again = check_c1(p, params, 20000, 7);
    CHECK(sampled.margin == again.margin);
}

TEST_CASE("relative-bound estimate certifies an exactly scaled dependency") {
    ts::Rng rng(808);
    PencilSpec p;
    p.b = ts::random_accretive(4, rng, 1.0, 0.25);
    p.c = 0.5 * (p.b * p.b);  // ||C x|| = 0.5 ||B^2 x||
    const C2Estimate est = estimate_c2(p);
    CHECK(est.report.pass);
    CHECK(est.b_lin == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(est.b_quad == doctest::Approx(0.25).epsilon(1e-6));

    ConditionC2Params params;
    params.a = est.a_est;
    params.b = est.b_quad;
    CHECK(check_c2_exact(p, params).pass);
}

TEST_CASE("relative-bound implies lower-bound with the halved constants") {
    int checked = 0;
    for (std::uint64_t seed = 9000; seed < 9020; ++seed) {
        PencilSpec p = ts::random_accretive_pencil(4, seed);
        // A generic accretive C is far too large relative to B^2 to satisfy
        // the relative bound; the estimate is exactly linear in C, so rescale
        // C to put the family genuinely inside its hypothesis.
        const double raw = estimate_c2(p).b_lin;
        REQUIRE(raw > 0.0);
        p.c *= 0.6 / raw;
        const C2Estimate est = estimate_c2(p);
        REQUIRE(est.report.pass);
        ConditionC1Params c1;
        c1.alpha = est.a_est / 2.0;
        c1.beta = (est.b_quad + 1.0) / 2.0;
        REQUIRE(c1.beta < 1.0);
        CHECK(check_c1(p, c1).pass);
        ++checked;
    }
    CHECK(checked == 20);  // the family must actually exercise the implication
}

TEST_CASE("resolvent-sum invertibility check agrees with a dense oracle") {
    for (std::uint64_t seed = 400; seed < 410; ++seed) {
        const PencilSpec p = ts::random_accretive_pencil(4, seed);
        const double t0 = 1.0;
        const ConditionReport rep = check_c3(p, t0);
        // Dense oracle: smallest singular value of I + C (B^2 + t0 I)^{-1}.
        const Matrix b2 = p.b * p.b;
        const Matrix m = Matrix::Identity(4, 4) +
                         p.c * (b2 + t0 * Matrix::Identity(4, 4)).inverse();
        Eigen::JacobiSVD<Matrix> svd(m);
        const double smin = svd.singularValues().minCoeff();
        CHECK(rep.margin == doctest::Approx(smin).epsilon(1e-9));
        CHECK(rep.pass == (smin > 1e-12));
    }
}

TEST_CASE("accretivity condition reports the finite-dimension reduction") {
    const PencilSpec good = ts::random_accretive_pencil(4, 42);
    const ConditionReport ok = check_c4_c5(good);
    CHECK(ok.pass);
    CHECK(ok.notes.find("finite") != std::string::npos);

    PencilSpec bad = good;
    bad.b = -Matrix::Identity(4, 4);
    CHECK_FALSE(check_c4_c5(bad).pass);
}

TEST_CASE("lambda builder applies the accretive-sum certificate") {
    ts::Rng rng(17);
    PencilSpec p;
    p.b = ts::random_hermitian_psd(4, rng, 0.5);  // B^2 is then PSD
    p.c = ts::random_accretive(4, rng, 0.5, 0.25);
    const auto [lambda, rep] = build_lambda(p);
    CHECK((lambda - (p.b * p.b + p.c)).norm() == 0.0);
    CHECK(rep.pass);
    CHECK(accretivity_margin(lambda) >= 0.5 - 1e-10);

    PencilSpec q;
    q.b = Matrix::Identity(2, 2);
    q.c = -3.0 * Matrix::Identity(2, 2);
    CHECK_FALSE(build_lambda(q).second.pass);
}

TEST_CASE("kernel of a singular Lambda sits inside both component kernels") {
    PencilSpec p;
    p.b = Matrix::Zero(2, 2);
    p.b(1, 1) = 1.0;
    p.c = Matrix::Zero(2, 2);
    p.c(1, 1) = 3.0;
    const ConditionReport rep = kernel_inclusion_lambda(p, kPi / 4);
    CHECK(rep.pass);
    // Invertible case is vacuous.
    const PencilSpec q = ts::lambda_accretive_pencil(4, 77);
    CHECK(kernel_inclusion_lambda(q, kPi / 4).pass);
}

TEST_CASE("kernel identity for the first factor on a singular fixture") {
    PencilSpec p;
    p.b = Matrix::Zero(2, 2);
    p.b(1, 1) = 1.0;
    p.c = Matrix::Zero(2, 2);
    p.c(1, 1) = 3.0;
    // Lambda = diag(0, 4) has an eigenvalue at zero, so the principal square
    // root (and hence factorize) rejects it; the factorization is known in
    // closed form for this diagonal fixture and is supplied as data.
    Factorization f;
    f.lambda = p.b * p.b + p.c;
    f.s = Matrix::Zero(2, 2);
    f.s(1, 1) = 2.0;
    f.z1 = p.b + f.s;
    f.z2 = p.b - f.s;
    f.convention = Convention::real_root;
    const ConditionReport rep = kernel_identity_z1(f, p, kPi / 4);
    CHECK(rep.pass);
    CHECK(rep.parameters.at("dim_null_z1") == 1.0);
}

TEST_CASE("sector shift search finds the minimal stabilizing shift") {
    Matrix ok = Matrix::Identity(2, 2);
    CHECK(sector_shift_search(ok, 1e-6, 10.0) == 0.0);

    Matrix neg(1, 1);
    neg(0, 0) = -1.0;
    const double r = sector_shift_search(neg, 1e-6, 10.0);
    CHECK(r >= 1.0 - 1e-9);
    CHECK(r <= 1.0 + 1e-5);
    CHECK_THROWS_AS((void)sector_shift_search(neg, 1e-6, 0.5), SearchFailed);
}

TEST_CASE("factor shifts vanish for the first factor of quarter-sectorial data") {
    const PencilSpec p = ts::lambda_accretive_pencil(5, 1234);
    const Factorization f = factorize(p);
    const auto [r1, r2] = factor_shift_search(f, 1e-6);
    CHECK(r1 <= 1e-6);  // Z1 = B + S is already quarter-sectorial
    CHECK(r2 >= 0.0);
    const SectorReport shifted =
        sector_test(Matrix(-f.z2 + r2 * Matrix::Identity(5, 5)),
                    Sector{Complex(0.0, 0.0), kPi / 4 + 1e-6});
    CHECK(shifted.pass);
}

TEST_CASE("companion eigenpairs annihilate the pencil") {
    const PencilSpec p = ts::sectorial_b_pencil(4, 9090);
    const auto pairs = pencil_eigen(p);
    REQUIRE(pairs.size() == 8);
    const double scale = residual_scale(p, Complex(0.0, 0.0));
    for (const auto& [lambda, v] : pairs) {
        CHECK(std::abs(v.norm() - 1.0) <= 1e-10);
        CHECK(evaluate_pencil(p, lambda, v).norm() <=
              1e-8 * std::max(1.0, std::norm(lambda) + scale));
    }
}

TEST_CASE("eigenvalue localization holds for sectorial-B accretive-C fixtures") {
    for (std::uint64_t seed = 5000; seed < 5010; ++seed) {
        const PencilSpec p = ts::sectorial_b_pencil(4, seed);
        const ConditionReport rep = eigenvalue_localization_check(p);
        CHECK(rep.pass);
    }
}

TEST_CASE("pencil evaluation matches the dense matrix form") {
    const PencilSpec p = ts::random_accretive_pencil(3, 33);
    ts::Rng rng(34);
    Vector x(3);
    for (int i = 0; i < 3; ++i) x(i) = rng.gauss();
    const Complex lambda(0.7, -1.1);
    const Vector via_matrix = pencil_matrix(p, lambda) * x;
    CHECK((evaluate_pencil(p, lambda, x) - via_matrix).norm() <= 1e-12 * via_matrix.norm());
}
