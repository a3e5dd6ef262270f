#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "qfa/transforms.hpp"
#include "test_support.hpp"

using namespace qfa;
using namespace qfa::test;

namespace {

BilinearMachine swap_machine(Backend b) {
    BilinearMachine m;
    m.alphabet = {"a"};
    m.pi = row(b, {"1", "0"});
    m.transition.push_back(mat(b, {{"0", "1"}, {"1", "0"}}));
    m.eta = col(b, {"0", "1"});
    return m;
}

}  // namespace

TEST_CASE("word_function basics") {
    for (Backend b : {Backend::exact, Backend::floating}) {
        BilinearMachine m = swap_machine(b);
        CHECK(word_function(m, {}).is_zero());
        CHECK(close(word_function(m, {"a"}), 1.0, 0));
        CHECK(word_function(m, {"a", "a"}).is_zero());
    }
}

TEST_CASE("word_function: identity transitions give pi.eta everywhere") {
    Rng rng(21);
    BilinearMachine m = rand_blm(Backend::exact, 3, {"a", "b"}, rng);
    m.transition[0] = Matrix::identity(Backend::exact, 3);
    m.transition[1] = Matrix::identity(Backend::exact, 3);
    Scalar base = word_function(m, {});
    for (const Word& w : all_words(m.alphabet, 3)) CHECK(word_function(m, w) == base);
}

TEST_CASE("word_function matches the product-matrix oracle") {
    Rng rng(22);
    for (Backend b : {Backend::exact, Backend::floating}) {
        for (int i = 0; i < 10; ++i) {
            BilinearMachine m = rand_blm(b, 3, {"a", "b"}, rng);
            for (const Word& w : all_words(m.alphabet, 4)) {
                Scalar got = word_function(m, w);
                Scalar expect = word_function_oracle(m, w);
                CHECK(close(got, expect, 1e-10));
            }
        }
    }
}

TEST_CASE("word_function rejects unknown symbols") {
    BilinearMachine m = swap_machine(Backend::exact);
    CHECK_THROWS_AS(word_function(m, {"z"}), Error);
}

TEST_CASE("empty alphabet machines still define f(epsilon)") {
    BilinearMachine m;
    m.pi = row(Backend::exact, {"2", "3"});
    m.eta = col(Backend::exact, {"1", "1"});
    CHECK(word_function(m, {}) == Scalar::exact_int(5));
}

TEST_CASE("classify: the inclusion ladder") {
    // DFA lowered to linear form
    ClassicalDfa d;
    d.alphabet = {"a"};
    d.state_count = 2;
    d.initial = 0;
    d.delta = {{1}, {0}};
    d.accepting = {true, false};
    CHECK(classify(d.to_linear(Backend::exact)) == MachineClass::dfa);

    // stochastic but not 0/1
    BilinearMachine pa;
    pa.alphabet = {"a"};
    pa.pi = row(Backend::exact, {"1/2", "1/2"});
    pa.transition.push_back(mat(Backend::exact, {{"1/3", "2/3"}, {"1", "0"}}));
    pa.eta = col(Backend::exact, {"1", "0"});
    CHECK(classify(pa) == MachineClass::pa);

    // real entries, not stochastic
    BilinearMachine ga = pa;
    ga.pi = row(Backend::exact, {"2", "-1"});
    CHECK(classify(ga) == MachineClass::ga);

    // complex entry excludes ga; certification decides rblm vs blm
    BilinearMachine blm = pa;
    blm.pi = row(Backend::exact, {"i", "0"});
    CHECK(classify(blm) == MachineClass::blm);
    blm.certified_real = true;
    CHECK(classify(blm) == MachineClass::rblm);
}

TEST_CASE("classify is monotone along the ladder") {
    Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        BilinearMachine m = rand_blm(Backend::exact, 2, {"a"}, rng);
        if (is_dfa_form(m)) {
            CHECK(is_pa_form(m));
        }
        if (is_pa_form(m)) {
            CHECK(is_ga_form(m));
        }
    }
    ClassicalDfa d = rand_dfa(4, {"a", "b"}, rng);
    BilinearMachine lin = d.to_linear(Backend::exact);
    CHECK(is_dfa_form(lin));
    CHECK(is_pa_form(lin));
    CHECK(is_ga_form(lin));
}

TEST_CASE("strip_endmarker") {
    Rng rng(24);
    SUBCASE("identity marker matrix keeps eta") {
        BilinearMachine m = rand_blm(Backend::exact, 3, {"a", "t"}, rng);
        m.transition[1] = Matrix::identity(Backend::exact, 3);
        BilinearMachine s = strip_endmarker(m, "t");
        CHECK(s.eta == m.eta);
        CHECK(s.alphabet == std::vector<std::string>{"a"});
    }
    SUBCASE("f_m(w t) = f_stripped(w), state count preserved") {
        for (Backend b : {Backend::exact, Backend::floating}) {
            for (int i = 0; i < 50; ++i) {
                BilinearMachine m = rand_blm(b, 3, {"a", "b", "t"}, rng);
                BilinearMachine s = strip_endmarker(m, "t");
                CHECK(s.state_count() == m.state_count());
                for (const Word& w : all_words({"a", "b"}, 3)) {
                    Word wt = w;
                    wt.push_back("t");
                    Scalar lhs = word_function(m, wt);
                    Scalar rhs = word_function(s, w);
                    if (b == Backend::exact)
                        CHECK(lhs == rhs);
                    else
                        CHECK(close(lhs, rhs, 1e-9));
                }
            }
        }
    }
    SUBCASE("unknown marker") {
        BilinearMachine m = swap_machine(Backend::exact);
        CHECK_THROWS_AS(strip_endmarker(m, "$"), Error);
    }
}

TEST_CASE("to_real embeds complex entries as 2x2 blocks") {
    BilinearMachine m;
    m.alphabet = {"a"};
    m.pi = row(Backend::exact, {"1"});
    m.transition.push_back(mat(Backend::exact, {{"i"}}));
    m.eta = col(Backend::exact, {"1"});
    BilinearMachine r = to_real(m);
    CHECK(r.state_count() == 2);
    CHECK(r.transition[0] == mat(Backend::exact, {{"0", "1"}, {"-1", "0"}}));
    CHECK(r.pi == row(Backend::exact, {"1", "0"}));
    CHECK(r.eta == col(Backend::exact, {"1", "0"}));
}

TEST_CASE("to_real: all-real machines keep their word function") {
    Rng rng(25);
    for (int i = 0; i < 20; ++i) {
        BilinearMachine m = rand_blm(Backend::exact, 3, {"a", "b"}, rng,
                                     /*complex_entries=*/false);
        BilinearMachine r = to_real(m);
        CHECK(r.state_count() == 2 * m.state_count());
        CHECK(is_ga_form(r));
        for (const Word& w : all_words(m.alphabet, 3))
            CHECK(word_function(r, w) == word_function(m, w));
    }
}

TEST_CASE("to_real: real-valued complex machines, bit-exact on the exact backend") {
    Rng rng(26);
    for (int i = 0; i < 10; ++i) {
        // Reduction outputs are the paper case for realification: complex
        // entries, provably real word function.
        Cl1Qfa cl = rand_cl(Backend::exact, 2, {"a"}, 2, 3, rng);
        BilinearMachine m = pipeline_cl_to_blm(cl, false);
        BilinearMachine r = to_real(m);
        CHECK(r.state_count() == 2 * m.state_count());
        for (const Word& w : all_words({"a"}, 4)) {
            CHECK(word_function(r, w) == word_function(m, w));
        }
    }
}

TEST_CASE("well-formedness catches shape violations") {
    BilinearMachine m = swap_machine(Backend::exact);
    m.transition[0] = Matrix::identity(Backend::exact, 3);
    CHECK_THROWS_AS(m.check_well_formed(), ValidationError);
    BilinearMachine dup = swap_machine(Backend::exact);
    dup.alphabet = {"a"};
    dup.transition.clear();
    CHECK_THROWS_AS(dup.check_well_formed(), ValidationError);
}

TEST_CASE("dfa linear and classical views interconvert") {
    Rng rng(27);
    for (int i = 0; i < 20; ++i) {
        ClassicalDfa d = rand_dfa(5, {"a", "b"}, rng);
        BilinearMachine lin = d.to_linear(Backend::exact);
        ClassicalDfa back = ClassicalDfa::from_linear(lin);
        CHECK(back.initial == d.initial);
        CHECK(back.delta == d.delta);
        CHECK(back.accepting == d.accepting);
        for (const Word& w : all_words(d.alphabet, 4)) {
            Scalar f = word_function(lin, w);
            CHECK((f == Scalar::exact_int(0) || f == Scalar::exact_int(1)));
            CHECK((f == Scalar::exact_int(1)) == d.accepts(w));
        }
    }
}
