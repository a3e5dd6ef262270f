#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "qfa/scalar_expr.hpp"
#include "test_support.hpp"

using namespace qfa;
using namespace qfa::test;

TEST_CASE("mat_mul identity and involution") {
    for (Backend b : {Backend::exact, Backend::floating}) {
        Matrix a = mat(b, {{"1", "2"}, {"3", "4"}});
        CHECK(mat_mul(Matrix::identity(b, 2), a) == a);
        Matrix swap = mat(b, {{"0", "1"}, {"1", "0"}});
        CHECK(mat_mul(swap, swap) == Matrix::identity(b, 2));
    }
}

TEST_CASE("mat_mul matches the naive triple-loop oracle") {
    Rng rng(11);
    for (Backend b : {Backend::exact, Backend::floating}) {
        for (int i = 0; i < 20; ++i) {
            Matrix a = rand_matrix(b, 3, 3, rng);
            Matrix c = rand_matrix(b, 3, 3, rng);
            Matrix fast = mat_mul(a, c);
            Matrix slow = naive_mul(a, c);
            if (b == Backend::exact)
                CHECK(fast == slow);
            else
                CHECK(fast.max_abs_diff(slow) <= 1e-12);
        }
    }
}

TEST_CASE("mat_mul errors") {
    Matrix a = mat(Backend::exact, {{"1", "2"}, {"3", "4"}});
    Matrix bad = mat(Backend::exact, {{"1", "2", "3"}});
    CHECK_THROWS_AS(mat_mul(a, bad), DimensionError);
    CHECK_THROWS_AS(mat_mul(a, a.to_float()), BackendError);
}

TEST_CASE("kron identities and the block expansion") {
    for (Backend b : {Backend::exact, Backend::floating}) {
        CHECK(kron(Matrix::identity(b, 2), Matrix::identity(b, 3)) == Matrix::identity(b, 6));
        Matrix a = mat(b, {{"1", "2"}, {"3", "4"}});
        Matrix x = mat(b, {{"0", "1"}, {"1", "0"}});
        Matrix expect = mat(b, {{"0", "1", "0", "2"},
                                {"1", "0", "2", "0"},
                                {"0", "3", "0", "4"},
                                {"3", "0", "4", "0"}});
        CHECK(kron(a, x) == expect);
    }
}

TEST_CASE("kron dimension law and mixed-product law") {
    Rng rng(12);
    for (Backend b : {Backend::exact, Backend::floating}) {
        for (int i = 0; i < 20; ++i) {
            Matrix a = rand_matrix(b, 2, 2, rng), c = rand_matrix(b, 2, 2, rng);
            Matrix d = rand_matrix(b, 2, 2, rng), e = rand_matrix(b, 2, 2, rng);
            CHECK(kron(a, d).rows() == 4);
            CHECK(kron(a, d).cols() == 4);
            Matrix lhs = mat_mul(kron(a, d), kron(c, e));
            Matrix rhs = kron(mat_mul(a, c), mat_mul(d, e));
            if (b == Backend::exact)
                CHECK(lhs == rhs);
            else
                CHECK(lhs.max_abs_diff(rhs) <= 1e-12);
        }
        // non-square shapes still multiply out to the product dims
        Matrix a = rand_matrix(b, 2, 3, rng), d = rand_matrix(b, 1, 4, rng);
        CHECK(kron(a, d).rows() == 2);
        CHECK(kron(a, d).cols() == 12);
    }
}

TEST_CASE("conj_transpose") {
    Matrix sym = mat(Backend::exact, {{"1", "2"}, {"2", "5"}});
    CHECK(conj_transpose(sym) == sym);
    Matrix imag = mat(Backend::exact, {{"i"}});
    CHECK(conj_transpose(imag) == mat(Backend::exact, {{"-i"}}));
    Rng rng(13);
    for (int i = 0; i < 10; ++i) {
        Matrix a = rand_matrix(Backend::exact, 3, 2, rng);
        Matrix b = rand_matrix(Backend::exact, 2, 3, rng);
        CHECK(conj_transpose(mat_mul(a, b)) == mat_mul(conj_transpose(b), conj_transpose(a)));
    }
}

TEST_CASE("row norms") {
    CHECK(row_norm(row(Backend::exact, {"1", "0", "0"})) == Scalar::exact_int(1));
    Matrix v = row(Backend::floating, {"1/2", "1/sqrt(2)", "1/2"});
    CHECK(close(norm_sq(v), 1.0, 1e-15));
    CHECK(close(row_norm(v), 1.0, 1e-15));
    CHECK_THROWS_AS(norm_sq(mat(Backend::exact, {{"1"}, {"0"}})), DimensionError);
    // exact norms exist only for perfect squares
    CHECK(row_norm(row(Backend::exact, {"3/5", "4/5"})) == Scalar::exact_int(1));
    CHECK_THROWS_AS(row_norm(row(Backend::exact, {"1", "1"})), Error);
    CHECK(norm_sq(row(Backend::exact, {"1", "1"})) == Scalar::exact_int(2));
}

TEST_CASE("unitary matrices preserve the norm") {
    Rng rng(14);
    for (int i = 0; i < 25; ++i) {
        Matrix u = rand_float_unitary(4, rng);
        CHECK(is_unitary(u, 1e-12));
        Matrix x = rand_matrix(Backend::floating, 1, 4, rng);
        double before = row_norm(x).real_double();
        double after = row_norm(mat_mul(x, u)).real_double();
        CHECK(std::abs(before - after) <= 1e-9);
    }
    for (int i = 0; i < 25; ++i) {
        Matrix u = rand_exact_unitary(4, rng);
        CHECK(is_unitary(u));
        Matrix x = rand_matrix(Backend::exact, 1, 4, rng);
        CHECK(norm_sq(mat_mul(x, u)) == norm_sq(x));
    }
}

TEST_CASE("is_unitary") {
    CHECK(is_unitary(Matrix::identity(Backend::exact, 5)));
    Matrix h = mat(Backend::floating,
                   {{"1/sqrt(2)", "1/sqrt(2)"}, {"1/sqrt(2)", "-1/sqrt(2)"}});
    CHECK(is_unitary(h, 1e-12));
    Matrix shear = mat(Backend::exact, {{"1", "1"}, {"0", "1"}});
    CHECK_FALSE(is_unitary(shear));
    CHECK_THROWS_AS(is_unitary(mat(Backend::exact, {{"1", "2"}})), DimensionError);
}

TEST_CASE("parse_scalar literals and backend selection") {
    Scalar half = parse_scalar("1/2");
    CHECK(half.backend() == Backend::exact);
    CHECK(half == Scalar::exact(make_rational(1, 2)));

    Scalar irr = parse_scalar("1/sqrt(2)");
    CHECK(irr.backend() == Backend::floating);
    CHECK(std::abs(irr.real_double() - 0.7071067811865476) <= 3e-16);  // a couple of ulps

    Scalar z = parse_scalar("3/4 + (1/4)*i");
    CHECK(z.backend() == Backend::exact);
    CHECK(z == Scalar::exact(make_rational(3, 4), make_rational(1, 4)));

    // perfect squares stay exact, decimals are rationals
    CHECK(parse_scalar("sqrt(9/4)") == Scalar::exact(make_rational(3, 2)));
    CHECK(parse_scalar("0.125").backend() == Backend::exact);
    CHECK(parse_scalar("0.125") == Scalar::exact(make_rational(1, 8)));
    CHECK(parse_scalar("1e-2") == Scalar::exact(make_rational(1, 100)));
    CHECK(parse_scalar("-i") == Scalar::exact(0, -1));
}

TEST_CASE("parse_scalar errors") {
    CHECK_THROWS_AS(parse_scalar("sqrt(-2)"), ParseError);
    CHECK_THROWS_AS(parse_scalar("sqrt(i)"), ParseError);
    CHECK_THROWS_AS(parse_scalar("1/0"), ParseError);
    CHECK_THROWS_AS(parse_scalar("1 +"), ParseError);
    CHECK_THROWS_AS(parse_scalar("(1"), ParseError);
    CHECK_THROWS_AS(parse_scalar("1 2"), ParseError);
    CHECK_THROWS_AS(parse_scalar(""), ParseError);
    CHECK_THROWS_AS(parse_scalar_as("1/sqrt(2)", Backend::exact), Error);
    CHECK(parse_scalar_as("1/sqrt(4)", Backend::exact) == Scalar::exact(make_rational(1, 2)));
    CHECK(parse_scalar_as("1/2", Backend::floating).backend() == Backend::floating);
}

TEST_CASE("exact scalar ring axioms and normalization") {
    Rng rng(15);
    for (int i = 0; i < 50; ++i) {
        Scalar a = rand_exact(rng), b = rand_exact(rng), c = rand_exact(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
    // lowest terms, positive denominator
    Rational q = make_rational(-6, -8);
    CHECK(q.get_num() == 3);
    CHECK(q.get_den() == 4);
    Rational r = make_rational(2, -4);
    CHECK(r.get_num() == -1);
    CHECK(r.get_den() == 2);
}

TEST_CASE("scalar backend mixing is an error") {
    Scalar e = Scalar::exact_int(1), f = Scalar::floating(1.0);
    CHECK_THROWS_AS(e + f, BackendError);
    CHECK_THROWS_AS(e * f, BackendError);
    CHECK_THROWS_AS((void)(e == f), BackendError);
    CHECK_THROWS_AS(Matrix::from_scalars(Backend::exact, 1, 2, {e, f}), BackendError);
}

TEST_CASE("canonical scalar strings reparse to the same value") {
    Rng rng(16);
    for (int i = 0; i < 60; ++i) {
        Scalar s = rand_exact(rng);
        CHECK(parse_scalar(s.str()) == s);
    }
    for (int i = 0; i < 60; ++i) {
        Scalar s = rand_float(rng);
        Scalar back = parse_scalar_as(s.str(), Backend::floating);
        CHECK(back == s);
    }
    CHECK(Scalar::exact(make_rational(3, 4), make_rational(-1, 2)).str() == "3/4-1/2*i");
    CHECK(Scalar::exact(0, 1).str() == "i");
    CHECK(Scalar::floating(0.0, 0.0).str() == "0");
    CHECK(Scalar::floating(-0.0).str() == "0");
}

TEST_CASE("exact to float conversion rounds to nearest") {
    // 1/3 is halfway-free; the truncated double differs from the nearest one
    // in the last bit about half the time, so check against the decimal path.
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        std::uniform_int_distribution<long> num(-1000000, 1000000);
        std::uniform_int_distribution<long> den(1, 1000000);
        Rational q = make_rational(num(rng), den(rng));
        double got = rational_to_double(q);
        double expect = q.get_num().get_d() / q.get_den().get_d();
        // both are within one ulp of the true value; they agree to 1e-15 rel
        CHECK(std::abs(got - expect) <= 1e-15 * std::max(1.0, std::abs(expect)));
        // and the correctly rounded value is never farther than the truncated
        Rational err_rounded = abs(Rational(got) - q);
        Rational err_truncated = abs(Rational(q.get_d()) - q);
        CHECK(err_rounded <= err_truncated);
    }
}
