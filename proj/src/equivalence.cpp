#include "qfa/equivalence.hpp"

#include <cmath>
#include <deque>
#include <optional>

#include "qfa/transforms.hpp"

namespace qfa {

namespace {

template <class T>
struct ScalarOps;

template <>
struct ScalarOps<ExactComplex> {
    static constexpr bool exact = true;
    static bool negligible(const ExactComplex& v, double /*tol*/, double /*scale*/) {
        return v.is_zero();
    }
    static double modulus(const ExactComplex& v) { return v.abs(); }
};

template <>
struct ScalarOps<FloatComplex> {
    static constexpr bool exact = false;
    static bool negligible(const FloatComplex& v, double tol, double scale) {
        return std::abs(v) <= tol * scale;
    }
    static double modulus(const FloatComplex& v) { return std::abs(v); }
};

template <class T>
T unit_value();
template <>
ExactComplex unit_value<ExactComplex>() {
    return ExactComplex::from_int(1);
}
template <>
FloatComplex unit_value<FloatComplex>() {
    return FloatComplex{1.0, 0.0};
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
    T acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * b[i];
    return acc;
}

// out = v · M for an n×n matrix in row-major cells.
template <class T>
std::vector<T> row_times(const std::vector<T>& v, const std::vector<T>& m, std::size_t n) {
    std::vector<T> out(n, T{});
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == T{}) continue;
        for (std::size_t j = 0; j < n; ++j) out[j] = out[j] + v[i] * m[i * n + j];
    }
    return out;
}

template <class T>
double max_modulus(const std::vector<T>& v) {
    double m = 0.0;
    for (const T& x : v) m = std::max(m, ScalarOps<T>::modulus(x));
    return m;
}

// Reduced basis row: pivot entry normalized to exactly one.
template <class T>
struct BasisRow {
    std::vector<T> vec;
    std::size_t pivot;
};

template <class T>
void eliminate(std::vector<T>& v, const std::vector<BasisRow<T>>& basis) {
    for (const auto& row : basis) {
        T c = v[row.pivot];
        if (c == T{}) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - c * row.vec[j];
        v[row.pivot] = T{};  // exact zero by construction; clear float residue
    }
}

// Pivot column of a reduced row, or nullopt when the row is (numerically)
// zero. Exact rows pivot on the first nonzero entry; float rows on the entry
// of maximum modulus, judged against tol·scale.
template <class T>
std::optional<std::size_t> select_pivot(const std::vector<T>& v, double tol, double scale) {
    if constexpr (ScalarOps<T>::exact) {
        for (std::size_t j = 0; j < v.size(); ++j)
            if (!(v[j] == T{})) return j;
        return std::nullopt;
    } else {
        std::size_t best = 0;
        double best_mod = -1.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            double m = ScalarOps<T>::modulus(v[j]);
            if (m > best_mod) {
                best_mod = m;
                best = j;
            }
        }
        if (best_mod <= tol * std::max(1.0, scale)) return std::nullopt;
        return best;
    }
}

struct SearchResult {
    bool equivalent = true;
    Word witness;
    std::size_t basis_dimension = 0;
};

// The joined pair of machines: per-symbol matrices of both sides, the two
// initial rows, and the joined final column (eta1, -eta2).
template <class T>
struct JoinedPair {
    std::size_t n1, n2;
    std::vector<const std::vector<T>*> m1, m2;  // per symbol, row-major cells
    std::vector<T> start;                       // (pi1, pi2), length n1+n2
    std::vector<T> final_diff;                  // (eta1, -eta2), length n1+n2

    std::vector<T> extend(const std::vector<T>& v, std::size_t symbol) const {
        std::vector<T> left(v.begin(), v.begin() + n1);
        std::vector<T> right(v.begin() + n1, v.end());
        std::vector<T> out = row_times(left, *m1[symbol], n1);
        std::vector<T> tail = row_times(right, *m2[symbol], n2);
        out.insert(out.end(), tail.begin(), tail.end());
        return out;
    }
};

template <class T>
JoinedPair<T> make_joined(const BilinearMachine& a, const BilinearMachine& b) {
    JoinedPair<T> j;
    j.n1 = a.state_count();
    j.n2 = b.state_count();
    for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
        j.m1.push_back(&a.transition[s].template cells<T>());
        j.m2.push_back(&b.transition[s].template cells<T>());
    }
    j.start = a.pi.cells<T>();
    const auto& pib = b.pi.cells<T>();
    j.start.insert(j.start.end(), pib.begin(), pib.end());
    j.final_diff = a.eta.cells<T>();
    for (const T& v : b.eta.cells<T>()) j.final_diff.push_back(T{} - v);
    return j;
}

template <class T>
SearchResult spanning_search(const JoinedPair<T>& jp, std::size_t symbol_count, double tol) {
    const std::size_t d = jp.n1 + jp.n2;
    std::vector<BasisRow<T>> basis;
    struct Pending {
        Word word;
        std::vector<T> vec;
    };
    std::deque<Pending> queue;

    // Returns the word when it separates the machines; otherwise extends the
    // basis/queue if the reach vector is independent of the span so far.
    auto consider = [&](Word word, std::vector<T> vec) -> std::optional<Word> {
        if (!ScalarOps<T>::negligible(dot(vec, jp.final_diff), tol, 1.0)) return word;
        double scale = max_modulus(vec);
        std::vector<T> reduced = vec;
        eliminate(reduced, basis);
        if (auto pivot = select_pivot(reduced, tol, scale)) {
            T p = reduced[*pivot];
            for (auto& x : reduced) x = x / p;
            reduced[*pivot] = unit_value<T>();
            basis.push_back({std::move(reduced), *pivot});
            queue.push_back({std::move(word), std::move(vec)});
        }
        return std::nullopt;
    };

    if (auto w = consider({}, jp.start)) return {false, *w, basis.size()};
    while (!queue.empty() && basis.size() < d) {
        Pending cur = std::move(queue.front());
        queue.pop_front();
        for (std::size_t s = 0; s < symbol_count; ++s) {
            Word word = cur.word;
            word.push_back(std::to_string(s));
            if (auto w = consider(std::move(word), jp.extend(cur.vec, s)))
                return {false, *w, basis.size()};
        }
    }
    return {true, {}, basis.size()};
}

template <class T>
SearchResult brute_search(const JoinedPair<T>& jp, std::size_t symbol_count, std::size_t k,
                          double tol) {
    // Iterative deepening keeps length-then-lexicographic order with O(k)
    // memory: per target length, a depth-first walk in symbol order.
    std::optional<Word> found;
    auto rec = [&](auto&& self, const std::vector<T>& vec, Word& word,
                   std::size_t remaining) -> bool {
        if (remaining == 0) {
            if (!ScalarOps<T>::negligible(dot(vec, jp.final_diff), tol, 1.0)) {
                found = word;
                return true;
            }
            return false;
        }
        for (std::size_t s = 0; s < symbol_count; ++s) {
            word.push_back(std::to_string(s));
            bool hit = self(self, jp.extend(vec, s), word, remaining - 1);
            word.pop_back();
            if (hit) return true;
        }
        return false;
    };
    for (std::size_t len = 0; len <= k && !found; ++len) {
        Word word;
        rec(rec, jp.start, word, len);
    }
    if (found) return {false, *found, 0};
    return {true, {}, 0};
}

// The searches store symbol indices in witness words; map them back.
Word decode_word(const Word& indices, const std::vector<std::string>& alphabet) {
    Word out;
    out.reserve(indices.size());
    for (const auto& ix : indices) out.push_back(alphabet[std::stoul(ix)]);
    return out;
}

void require_comparable(const BilinearMachine& a, const BilinearMachine& b) {
    if (a.alphabet != b.alphabet)
        throw Error("machines must share one alphabet (same symbols, same order)");
    if (a.backend() != b.backend())
        throw BackendError("machines must share one backend; convert one side first");
}

EquivalenceVerdict finish_blm(const BilinearMachine& a, const BilinearMachine& b,
                              SearchResult&& res, std::size_t bound, double tol) {
    EquivalenceVerdict v;
    v.equivalent = res.equivalent;
    v.bound_used = bound;
    v.basis_dimension = res.basis_dimension;
    v.tolerance = tol;
    if (!res.equivalent) {
        v.witness = decode_word(res.witness, a.alphabet);
        v.f1 = word_function(a, v.witness);
        v.f2 = word_function(b, v.witness);
    }
    return v;
}

}  // namespace

EquivalenceVerdict equiv_blm(const BilinearMachine& a, const BilinearMachine& b, double tol) {
    require_comparable(a, b);
    const std::size_t bound = a.state_count() + b.state_count() - 1;
    SearchResult res;
    if (a.backend() == Backend::exact)
        res = spanning_search(make_joined<ExactComplex>(a, b), a.alphabet.size(), tol);
    else
        res = spanning_search(make_joined<FloatComplex>(a, b), a.alphabet.size(), tol);
    return finish_blm(a, b, std::move(res), bound, tol);
}

EquivalenceVerdict k_equiv_bruteforce(const BilinearMachine& a, const BilinearMachine& b,
                                      std::size_t k, double tol, std::uint64_t cap) {
    require_comparable(a, b);
    std::uint64_t total = 0, level = 1;
    for (std::size_t len = 0; len <= k; ++len) {
        total += level;
        if (total > cap)
            throw CapExceeded("brute-force enumeration needs more than " + std::to_string(cap) +
                              " words");
        if (len < k && a.alphabet.size() > 0) {
            if (level > cap / a.alphabet.size())
                throw CapExceeded("brute-force enumeration needs more than " +
                                  std::to_string(cap) + " words");
            level *= a.alphabet.size();
        }
    }
    SearchResult res;
    if (a.backend() == Backend::exact)
        res = brute_search(make_joined<ExactComplex>(a, b), a.alphabet.size(), k, tol);
    else
        res = brute_search(make_joined<FloatComplex>(a, b), a.alphabet.size(), k, tol);
    return finish_blm(a, b, std::move(res), k, tol);
}

EquivalenceVerdict k_equiv_simulators(const std::vector<std::string>& alphabet,
                                      const std::function<Scalar(const Word&)>& f1,
                                      const std::function<Scalar(const Word&)>& f2, std::size_t k,
                                      double tol, std::uint64_t cap) {
    std::uint64_t total = 0, level = 1;
    for (std::size_t len = 0; len <= k; ++len) {
        total += level;
        if (total > cap || (len < k && !alphabet.empty() && level > cap / alphabet.size()))
            throw CapExceeded("brute-force enumeration needs more than " + std::to_string(cap) +
                              " words");
        if (!alphabet.empty()) level *= alphabet.size();
    }
    EquivalenceVerdict v;
    v.bound_used = k;
    v.tolerance = tol;
    auto differs = [&](const Scalar& p1, const Scalar& p2) {
        if (p1.backend() == Backend::exact && p2.backend() == Backend::exact) return !(p1 == p2);
        return std::abs(p1.as_float_complex() - p2.as_float_complex()) > tol;
    };
    auto rec = [&](auto&& self, Word& word, std::size_t remaining) -> bool {
        if (remaining == 0) {
            Scalar p1 = f1(word), p2 = f2(word);
            if (differs(p1, p2)) {
                v.equivalent = false;
                v.witness = word;
                v.f1 = p1;
                v.f2 = p2;
                return true;
            }
            return false;
        }
        for (const auto& sym : alphabet) {
            word.push_back(sym);
            bool hit = self(self, word, remaining - 1);
            word.pop_back();
            if (hit) return true;
        }
        return false;
    };
    for (std::size_t len = 0; len <= k; ++len) {
        Word word;
        if (rec(rec, word, len)) break;
    }
    return v;
}

namespace {

// Replaces the witness values with the original model's probabilities and
// insists that they really differ beyond tol; a reduction or rank artifact
// must surface, not masquerade as a verdict.
template <class Prob1, class Prob2>
void reverify(EquivalenceVerdict& v, double tol, Prob1&& prob1, Prob2&& prob2) {
    if (v.equivalent) return;
    Scalar p1 = prob1(v.witness);
    Scalar p2 = prob2(v.witness);
    bool differs;
    if (p1.backend() == Backend::exact)
        differs = !(p1 == p2);
    else
        differs = std::abs(p1.float_value().real() - p2.float_value().real()) > tol;
    if (!differs)
        throw WitnessVerificationError(
            "witness '" + word_to_display(v.witness) +
            "' does not separate the original machines beyond tolerance " +
            double_to_string(tol) + "; the reduction and the rank tolerance disagree");
    v.f1 = p1;
    v.f2 = p2;
}

}  // namespace

EquivalenceVerdict equiv_mo(const Mo1Qfa& a, const Mo1Qfa& b, double tol) {
    EquivalenceVerdict v = equiv_blm(mo_to_rblm(a), mo_to_rblm(b), tol);
    reverify(
        v, tol, [&](const Word& w) { return mo_accept_prob(a, w); },
        [&](const Word& w) { return mo_accept_prob(b, w); });
    return v;
}

EquivalenceVerdict equiv_mm(const Mm1Qfa& a, const Mm1Qfa& b, double tol) {
    EquivalenceVerdict v = equiv_blm(pipeline_mm_to_blm(a), pipeline_mm_to_blm(b), tol);
    reverify(
        v, tol, [&](const Word& w) { return mm_accept_prob(a, w); },
        [&](const Word& w) { return mm_accept_prob(b, w); });
    return v;
}

EquivalenceVerdict equiv_cl(const Cl1Qfa& a, const Cl1Qfa& b, double tol, bool minimize_control) {
    EquivalenceVerdict v = equiv_blm(pipeline_cl_to_blm(a, minimize_control),
                                     pipeline_cl_to_blm(b, minimize_control), tol);
    if (!v.equivalent) {
        // Re-verify only when the enumeration stays within the default cap.
        try {
            reverify(
                v, tol, [&](const Word& w) { return cl_accept_prob_bruteforce(a, w); },
                [&](const Word& w) { return cl_accept_prob_bruteforce(b, w); });
        } catch (const CapExceeded&) {
            // Too large to enumerate; the bilinear values stand.
        }
    }
    return v;
}

}  // namespace qfa
