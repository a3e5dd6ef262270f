#pragma once

#include <random>
#include <vector>

#include "qfa/dfa.hpp"
#include "qfa/qfa_models.hpp"
#include "qfa/regular.hpp"
#include "qfa/scalar_expr.hpp"

namespace qfa::test {

// --- construction helpers ------------------------------------------------

// Matrices from expression strings, so tests read like the machine files.
inline Matrix mat(Backend b, const std::vector<std::vector<const char*>>& rows) {
    std::vector<Scalar> entries;
    for (const auto& row : rows)
        for (const char* cell : row) entries.push_back(parse_scalar_as(cell, b));
    return Matrix::from_scalars(b, rows.size(), rows.empty() ? 0 : rows[0].size(), entries);
}

inline Matrix row(Backend b, const std::vector<const char*>& cells) {
    return mat(b, {cells});
}

inline Matrix col(Backend b, const std::vector<const char*>& cells) {
    std::vector<std::vector<const char*>> rows;
    for (const char* c : cells) rows.push_back({c});
    return mat(b, rows);
}

// --- random generators (all deterministic via the caller's seed) ----------

using Rng = std::mt19937;

inline Rational rand_rational(Rng& rng, int span = 4) {
    std::uniform_int_distribution<int> num(-span, span);
    std::uniform_int_distribution<int> den(1, span);
    return make_rational(num(rng), den(rng));
}

inline Scalar rand_exact(Rng& rng, bool complex_entries = true) {
    Rational re = rand_rational(rng);
    Rational im = complex_entries ? rand_rational(rng) : Rational(0);
    return Scalar::exact(re, im);
}

inline Scalar rand_float(Rng& rng, bool complex_entries = true) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double re = dist(rng);
    double im = complex_entries ? dist(rng) : 0.0;
    return Scalar::floating(re, im);
}

inline Scalar rand_scalar(Backend b, Rng& rng, bool complex_entries = true) {
    return b == Backend::exact ? rand_exact(rng, complex_entries)
                               : rand_float(rng, complex_entries);
}

inline Matrix rand_matrix(Backend b, std::size_t r, std::size_t c, Rng& rng,
                          bool complex_entries = true) {
    std::vector<Scalar> entries;
    for (std::size_t i = 0; i < r * c; ++i) entries.push_back(rand_scalar(b, rng, complex_entries));
    return Matrix::from_scalars(b, r, c, entries);
}

// Gram-Schmidt on a random complex Gaussian matrix.
inline Matrix rand_float_unitary(std::size_t n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<FloatComplex>> rows(n, std::vector<FloatComplex>(n));
    for (auto& r : rows)
        for (auto& v : r) v = {gauss(rng), gauss(rng)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < i; ++k) {
                FloatComplex proj{0, 0};
                for (std::size_t j = 0; j < n; ++j) proj += rows[i][j] * std::conj(rows[k][j]);
                for (std::size_t j = 0; j < n; ++j) rows[i][j] -= proj * rows[k][j];
            }
        }
        double norm = 0;
        for (const auto& v : rows[i]) norm += std::norm(v);
        norm = std::sqrt(norm);
        for (auto& v : rows[i]) v /= norm;
    }
    Matrix out = Matrix::zeros(Backend::floating, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.set(i, j, Scalar(rows[i][j]));
    return out;
}

// Products of permutations, {±1, ±i} phases and 3-4-5 rotations stay unitary
// with rational entries.
inline Matrix rand_exact_unitary(std::size_t n, Rng& rng) {
    const Backend b = Backend::exact;
    Matrix u = Matrix::identity(b, n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> phase_pick(0, 3);
    const Scalar phases[4] = {Scalar::exact_int(1), Scalar::exact_int(-1), Scalar::exact(0, 1),
                              Scalar::exact(0, -1)};
    for (int round = 0; round < 3; ++round) {
        // permutation
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix p = Matrix::zeros(b, n, n);
        for (std::size_t i = 0; i < n; ++i) p.set(i, perm[i], phases[phase_pick(rng)]);
        u = mat_mul(u, p);
        if (n >= 2) {
            std::size_t i = pick(rng), j = pick(rng);
            if (i != j) {
                Matrix g = Matrix::identity(b, n);
                Scalar c = Scalar::exact(make_rational(3, 5));
                Scalar s = Scalar::exact(make_rational(4, 5));
                g.set(i, i, c);
                g.set(i, j, s);
                g.set(j, i, -s);
                g.set(j, j, c);
                u = mat_mul(u, g);
            }
        }
    }
    return u;
}

inline Matrix rand_unitary(Backend b, std::size_t n, Rng& rng) {
    return b == Backend::exact ? rand_exact_unitary(n, rng) : rand_float_unitary(n, rng);
}

inline BilinearMachine rand_blm(Backend b, std::size_t n, std::vector<std::string> alphabet,
                                Rng& rng, bool complex_entries = true) {
    BilinearMachine m;
    m.alphabet = std::move(alphabet);
    m.pi = rand_matrix(b, 1, n, rng, complex_entries);
    for (std::size_t s = 0; s < m.alphabet.size(); ++s)
        m.transition.push_back(rand_matrix(b, n, n, rng, complex_entries));
    m.eta = rand_matrix(b, n, 1, rng, complex_entries);
    return m;
}

// Random result partition over n basis states: every state gets one of the
// results, chosen uniformly (blocks may end up empty).
inline std::vector<std::vector<std::size_t>> rand_partition(std::size_t n, std::size_t results,
                                                            Rng& rng) {
    std::vector<std::vector<std::size_t>> blocks(results);
    std::uniform_int_distribution<std::size_t> pick(0, results - 1);
    for (std::size_t i = 0; i < n; ++i) blocks[pick(rng)].push_back(i);
    return blocks;
}

inline Mm1Qfa rand_mm(Backend b, std::size_t n, std::vector<std::string> alphabet, Rng& rng) {
    Mm1Qfa m;
    m.input_alphabet = std::move(alphabet);
    Matrix e0 = Matrix::zeros(b, 1, n);
    e0.set(0, 0, Scalar::one(b));
    m.pi = mat_mul(e0, rand_unitary(b, n, rng));  // random unit initial vector
    for (std::size_t s = 0; s <= m.input_alphabet.size(); ++s)
        m.unitaries.push_back(rand_unitary(b, n, rng));
    m.observable =
        Observable::from_partition(b, n, {kAccept, kReject, kGo}, rand_partition(n, 3, rng));
    return m;
}

inline ClassicalDfa rand_dfa(std::size_t states, std::vector<std::string> alphabet, Rng& rng) {
    ClassicalDfa d;
    d.alphabet = std::move(alphabet);
    d.state_count = states;
    std::uniform_int_distribution<std::size_t> pick(0, states - 1);
    d.initial = pick(rng);
    d.delta.assign(states, std::vector<std::size_t>(d.alphabet.size(), 0));
    for (auto& row : d.delta)
        for (auto& t : row) t = pick(rng);
    d.accepting.assign(states, false);
    std::bernoulli_distribution acc(0.5);
    for (std::size_t s = 0; s < states; ++s) d.accepting[s] = acc(rng);
    return d;
}

inline Cl1Qfa rand_cl(Backend b, std::size_t n, std::vector<std::string> alphabet,
                      std::size_t result_count, std::size_t control_states, Rng& rng) {
    Cl1Qfa m;
    m.input_alphabet = std::move(alphabet);
    Matrix e0 = Matrix::zeros(b, 1, n);
    e0.set(0, 0, Scalar::one(b));
    m.pi = mat_mul(e0, rand_unitary(b, n, rng));
    for (std::size_t s = 0; s <= m.input_alphabet.size(); ++s)
        m.unitaries.push_back(rand_unitary(b, n, rng));
    std::vector<std::string> results;
    for (std::size_t r = 0; r < result_count; ++r) results.push_back("c" + std::to_string(r));
    m.observable =
        Observable::from_partition(b, n, results, rand_partition(n, result_count, rng));
    m.control = rand_dfa(control_states, results, rng);
    return m;
}

// Basis relabeling: pi P, P^T U P, P^T Proj P preserves every probability.
inline Matrix permutation_matrix(Backend b, const std::vector<std::size_t>& perm) {
    Matrix p = Matrix::zeros(b, perm.size(), perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) p.set(i, perm[i], Scalar::one(b));
    return p;
}

inline Mm1Qfa permute_mm(const Mm1Qfa& m, const std::vector<std::size_t>& perm) {
    const Backend b = m.backend();
    Matrix p = permutation_matrix(b, perm);
    Matrix pt = p.transpose();
    Mm1Qfa out = m;
    out.pi = mat_mul(m.pi, p);
    for (std::size_t s = 0; s < m.unitaries.size(); ++s)
        out.unitaries[s] = mat_mul(pt, mat_mul(m.unitaries[s], p));
    for (std::size_t r = 0; r < m.observable.projectors.size(); ++r)
        out.observable.projectors[r] = mat_mul(pt, mat_mul(m.observable.projectors[r], p));
    return out;
}

// The 4-state measure-many machine over {a} whose accept amplitudes
// interfere; the standard instance for exercising the whole pipeline.
inline Mm1Qfa interference_mm(Backend b = Backend::floating) {
    Mm1Qfa m;
    m.input_alphabet = {"a"};
    m.pi = row(b, {"1", "0", "0", "0"});
    m.unitaries.push_back(mat(b, {{"1/2", "1/sqrt(2)", "1/2", "0"},
                                  {"1/2", "-1/sqrt(2)", "1/2", "0"},
                                  {"1/sqrt(2)", "0", "-1/sqrt(2)", "0"},
                                  {"0", "0", "0", "1"}}));
    m.unitaries.push_back(mat(b, {{"0", "0", "1", "0"},
                                  {"0", "0", "0", "1"},
                                  {"1", "0", "0", "0"},
                                  {"0", "1", "0", "0"}}));
    m.observable = Observable::from_partition(b, 4, {kAccept, kReject, kGo}, {{2}, {3}, {0, 1}});
    return m;
}

// All words over `alphabet` of length 0..max_len in length-then-lex order.
inline std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t max_len) {
    std::vector<Word> out{{}};
    std::vector<Word> level{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const Word& w : level)
            for (const auto& sym : alphabet) {
                Word e = w;
                e.push_back(sym);
                next.push_back(std::move(e));
            }
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

inline bool close(const Scalar& a, double expect, double tol = 1e-9) {
    return a.is_real() && std::abs(a.real_double() - expect) <= tol;
}

inline bool close(const Scalar& a, const Scalar& b, double tol = 1e-9) {
    if (a.backend() == Backend::exact && b.backend() == Backend::exact) return a == b;
    return std::abs(a.as_float_complex() - b.as_float_complex()) <= tol;
}

}  // namespace qfa::test
