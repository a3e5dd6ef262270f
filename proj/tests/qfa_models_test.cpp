#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace qfa;
using namespace qfa::test;

namespace {

// Reference accept/reject masses by explicit enumeration over result
// sequences, classifying each sequence by its first non-go result.
struct EnumeratedOutcomes {
    double accept = 0, reject = 0, never = 0;
};

EnumeratedOutcomes enumerate_mm(const Mm1Qfa& m, const Word& w) {
    Word working = w;
    working.push_back(kEndMarker);
    EnumeratedOutcomes out;
    const auto& o = m.observable;
    auto rec = [&](auto&& self, const Matrix& v, std::size_t depth,
                   int first_non_go) -> void {
        if (depth == working.size()) {
            double p = norm_sq(v).real_double();
            if (first_non_go == 0)
                out.accept += p;
            else if (first_non_go == 1)
                out.reject += p;
            else
                out.never += p;
            return;
        }
        Matrix evolved = mat_mul(v, m.unitary_for(working[depth]));
        for (std::size_t r = 0; r < o.results.size(); ++r) {
            Matrix child = mat_mul(evolved, o.projectors[r]);
            int fng = first_non_go;
            if (fng == -1 && o.results[r] != kGo) fng = o.results[r] == kAccept ? 0 : 1;
            self(self, child, depth + 1, fng);
        }
    };
    rec(rec, m.pi, 0, -1);
    return out;
}

}  // namespace

TEST_CASE("observable validation") {
    const Backend b = Backend::floating;
    Observable good = Observable::from_partition(b, 3, {"a", "r"}, {{0, 2}, {1}});
    CHECK(good.validate().empty());

    Observable empty_block = Observable::from_partition(b, 2, {"a", "r", "g"}, {{0, 1}, {}, {}});
    CHECK(empty_block.validate().empty());  // zero projectors are fine

    Observable broken = good;
    broken.projectors[0].set(0, 1, Scalar::floating(0.5));  // not Hermitian, not idempotent
    auto issues = broken.validate();
    CHECK(issues.size() >= 2);

    Observable overlapping = good;
    overlapping.projectors[1] = overlapping.projectors[0];  // not orthogonal, not complete
    CHECK_THROWS_AS(overlapping.require_valid(), ValidationError);
}

TEST_CASE("rotated projectors stay valid") {
    Rng rng(31);
    Matrix u = rand_float_unitary(3, rng);
    Observable o = Observable::from_partition(Backend::floating, 3, {"a", "r"}, {{0}, {1, 2}});
    for (auto& p : o.projectors) p = mat_mul(conj_transpose(u), mat_mul(p, u));
    CHECK(o.validate(1e-9).empty());
    CHECK(o.basis_partition().empty());  // no longer basis-aligned
}

TEST_CASE("mo_accept_prob") {
    const Backend b = Backend::floating;
    SUBCASE("empty word measures pi directly") {
        Mo1Qfa m;
        m.alphabet = {"a"};
        m.pi = row(b, {"1", "0"});
        m.unitaries.push_back(Matrix::identity(b, 2));
        m.observable = Observable::from_partition(b, 2, {kAccept, kReject}, {{0}, {1}});
        CHECK(close(mo_accept_prob(m, {}), 1.0, 0));
    }
    SUBCASE("hadamard splits evenly") {
        Mo1Qfa m;
        m.alphabet = {"a"};
        m.pi = row(b, {"1", "0"});
        m.unitaries.push_back(
            mat(b, {{"1/sqrt(2)", "1/sqrt(2)"}, {"1/sqrt(2)", "-1/sqrt(2)"}}));
        m.observable = Observable::from_partition(b, 2, {kAccept, kReject}, {{0}, {1}});
        CHECK(close(mo_accept_prob(m, {"a"}), 0.5, 1e-15));
        CHECK(close(mo_accept_prob(m, {"a", "a"}), 1.0, 1e-15));  // H^2 = I
        CHECK(m.validate().empty());
    }
}

TEST_CASE("mm_accept_prob on the interference machine") {
    Mm1Qfa m = interference_mm();
    CHECK(m.validate().empty());
    CHECK(close(mm_accept_prob(m, {"a", "a"}), 0.9785533905932737));
    CHECK(close(mm_accept_prob(m, {}), 1.0));
    CHECK(close(mm_accept_prob(m, {"a"}), 0.5));
    CHECK_THROWS_AS(mm_accept_prob(m, {"$"}), Error);
    CHECK_THROWS_AS(mm_accept_prob(m, {"b"}), Error);

    std::vector<MmStep> steps;
    mm_accept_prob_traced(m, {"a", "a"}, steps);
    REQUIRE(steps.size() == 3);
    CHECK(close(steps[0].accept_mass, 0.25));
    double second = 0.25 * std::pow(0.5 + 1 / std::sqrt(2.0), 2);
    CHECK(close(steps[1].accept_mass, second));
    CHECK(close(steps[2].accept_mass, second));
}

TEST_CASE("mm_outcome_distribution") {
    Mm1Qfa m = interference_mm();
    auto dist = mm_outcome_distribution(m, {"a", "a"});
    CHECK(close(dist.accept, 0.625 + 0.5 / std::sqrt(2.0)));
    CHECK(close(dist.reject, 0.375 - 0.5 / std::sqrt(2.0)));
    CHECK(close(dist.accept + dist.reject, 1.0));
}

TEST_CASE("mm distribution matches sequence enumeration and sums to one") {
    Rng rng(32);
    for (int i = 0; i < 15; ++i) {
        Mm1Qfa m = rand_mm(Backend::floating, 3, {"a", "b"}, rng);
        for (const Word& w : all_words(m.input_alphabet, 3)) {
            auto dist = mm_outcome_distribution(m, w);
            auto brute = enumerate_mm(m, w);
            CHECK(close(dist.accept, brute.accept, 1e-9));
            CHECK(close(dist.reject, brute.reject + brute.never, 1e-9));
            CHECK(close(dist.accept + dist.reject, 1.0, 1e-9));
            CHECK(close(mm_accept_prob(m, w), dist.accept, 1e-12));
        }
    }
}

TEST_CASE("exact backend mm probabilities are exact rationals") {
    Rng rng(33);
    Mm1Qfa m = rand_mm(Backend::exact, 3, {"a"}, rng);
    Scalar p = mm_accept_prob(m, {"a", "a", "a"});
    CHECK(p.backend() == Backend::exact);
    auto dist = mm_outcome_distribution(m, {"a", "a", "a"});
    CHECK(dist.accept + dist.reject == Scalar::exact_int(1));
}

TEST_CASE("cl_outcome_prob") {
    Rng rng(34);
    Cl1Qfa m = rand_cl(Backend::floating, 2, {"a"}, 2, 2, rng);
    SUBCASE("length contract") {
        CHECK_THROWS_AS(cl_outcome_prob(m, {"a"}, {"c0"}), Error);
    }
    SUBCASE("total mass over sequences is one") {
        for (const Word& x : all_words({"a"}, 3)) {
            double total = 0;
            for (const Word& y : all_words(m.observable.results, x.size() + 1))
                if (y.size() == x.size() + 1) total += cl_outcome_prob(m, x, y).real_double();
            CHECK(std::abs(total - 1.0) <= 1e-9);
        }
    }
    SUBCASE("spot values against an explicit product") {
        Word x = {"a", "a"};
        Word y = {"c0", "c1", "c0"};
        Matrix prod = Matrix::identity(Backend::floating, 2);
        const char* working[] = {"a", "a", "$"};
        for (int i = 0; i < 3; ++i)
            prod = naive_mul(naive_mul(prod, m.unitary_for(working[i])),
                             m.observable.projector_for(y[i]));
        Scalar expect = norm_sq(naive_mul(m.pi, prod));
        CHECK(close(cl_outcome_prob(m, x, y), expect, 1e-12));
    }
}

TEST_CASE("cl_accept_prob_bruteforce degenerate controls") {
    Rng rng(35);
    Cl1Qfa m = rand_cl(Backend::floating, 2, {"a"}, 2, 3, rng);
    SUBCASE("control C* accepts everything") {
        m.control = ClassicalDfa{m.observable.results, 1, 0, {{0, 0}}, {true}};
        for (const Word& x : all_words({"a"}, 3))
            CHECK(close(cl_accept_prob_bruteforce(m, x), 1.0, 1e-9));
    }
    SUBCASE("empty control accepts nothing") {
        m.control = ClassicalDfa{m.observable.results, 1, 0, {{0, 0}}, {false}};
        for (const Word& x : all_words({"a"}, 3))
            CHECK(cl_accept_prob_bruteforce(m, x).real_double() == 0.0);
    }
    SUBCASE("sequence cap") {
        CHECK_THROWS_AS(cl_accept_prob_bruteforce(m, all_words({"a"}, 25).back(), 100),
                        CapExceeded);
    }
}

TEST_CASE("total_outcome_mass conserves unit vectors") {
    Rng rng(36);
    for (int i = 0; i < 20; ++i) {
        std::size_t n = 2 + (i % 2);
        std::vector<std::string> alphabet = {"a", "b"};
        std::vector<Matrix> us = {rand_float_unitary(n, rng), rand_float_unitary(n, rng)};
        Observable o = Observable::from_partition(Backend::floating, n, {"c0", "c1"},
                                                  rand_partition(n, 2, rng));
        Matrix e0 = Matrix::zeros(Backend::floating, 1, n);
        e0.set(0, 0, Scalar::one(Backend::floating));
        Matrix alpha = mat_mul(e0, rand_float_unitary(n, rng));
        for (const Word& x : all_words(alphabet, 3)) {
            Scalar mass = total_outcome_mass(alphabet, us, o, alpha, x);
            CHECK(close(mass, 1.0, 1e-9));
        }
        Matrix zero = Matrix::zeros(Backend::floating, 1, n);
        CHECK(total_outcome_mass(alphabet, us, o, zero, {"a"}).real_double() == 0.0);
    }
}

TEST_CASE("amplitude folding inflates the interference machine") {
    Mm1Qfa m = interference_mm();
    Mo1Qfa g = amplitude_folding_mo(m);
    CHECK(g.state_count() == 5);  // q0, q1, q_rej + one sink per working symbol
    CHECK(g.allow_nonunitary);
    Scalar p = mo_accept_prob(g, {"a", "a", "$"});
    CHECK(close(p, 0.875 + 1 / std::sqrt(2.0)));
    CHECK(p.real_double() > 1.0);  // never clamped
    // the machine genuinely is non-unitary
    CHECK_FALSE(is_unitary(g.unitary_for("a"), 1e-9));
}

TEST_CASE("amplitude folding requires a single basis accept state") {
    Mm1Qfa m = interference_mm();
    m.observable =
        Observable::from_partition(Backend::floating, 4, {kAccept, kReject, kGo}, {{2, 3}, {}, {0, 1}});
    CHECK_THROWS_AS(amplitude_folding_mo(m), Error);
}

TEST_CASE("model validation catches broken machines") {
    Mm1Qfa m = interference_mm();
    SUBCASE("non-unitary evolution") {
        m.unitaries[0].set(0, 0, Scalar::floating(0.9));
        auto issues = m.validate();
        REQUIRE(!issues.empty());
        CHECK(issues[0].find("'a'") != std::string::npos);
        CHECK(issues[0].find("not unitary") != std::string::npos);
    }
    SUBCASE("end marker reserved") {
        m.input_alphabet = {"a", "$"};
        m.unitaries.push_back(Matrix::identity(Backend::floating, 4));
        CHECK(!m.validate().empty());
    }
    SUBCASE("initial vector norm") {
        m.pi.set(0, 0, Scalar::floating(0.5));
        CHECK(!m.validate().empty());
    }
}
