#pragma once

#include <cstdint>
#include <functional>

#include "qfa/blm.hpp"
#include "qfa/qfa_models.hpp"

namespace qfa {

struct EquivalenceVerdict {
    bool equivalent = true;
    Word witness;  // shortest separating word, meaningful iff !equivalent
    Scalar f1, f2;  // the two machines' values at the witness
    std::size_t bound_used = 0;       // words up to this length decide equivalence
    std::size_t basis_dimension = 0;  // independent reach vectors retained
    double tolerance = 0.0;           // rank/value tolerance the verdict used
};

// Spanning-basis equivalence test on the joined machine of dimension
// n1+n2: breadth-first over words in length-then-lexicographic order, a
// word's joined reach vector kept iff independent of the kept span
// (Gaussian elimination; first-nonzero pivots on the exact backend,
// max-modulus pivots with tolerance tol·max(1, row scale) on float), with
// equivalence iff every kept vector is orthogonal to (eta1, -eta2). The
// first violating word in canonical order is the witness, and it is a
// shortest separator. Machines must share alphabet and backend.
EquivalenceVerdict equiv_blm(const BilinearMachine& a, const BilinearMachine& b, double tol = 1e-9);

// Compares word functions on every word of length 0..k in canonical order;
// the first difference beyond tol is the witness. The total word count must
// stay within `cap`.
EquivalenceVerdict k_equiv_bruteforce(const BilinearMachine& a, const BilinearMachine& b,
                                      std::size_t k, double tol = 1e-9,
                                      std::uint64_t cap = 1000000);

// Brute-force comparison of two arbitrary word-value functions (direct
// simulators, typically) over all words of length 0..k in canonical order.
// Independent of the reduction pipelines, so it doubles as a cross-check.
EquivalenceVerdict k_equiv_simulators(const std::vector<std::string>& alphabet,
                                      const std::function<Scalar(const Word&)>& f1,
                                      const std::function<Scalar(const Word&)>& f2, std::size_t k,
                                      double tol = 1e-9, std::uint64_t cap = 1000000);

// Model-level deciders: reduce to bilinear machines, run equiv_blm, and
// re-verify any witness against the original simulators (a failed
// re-verification throws WitnessVerificationError rather than being
// dropped). Witness values f1/f2 are acceptance probabilities.
EquivalenceVerdict equiv_mo(const Mo1Qfa& a, const Mo1Qfa& b, double tol = 1e-9);
EquivalenceVerdict equiv_mm(const Mm1Qfa& a, const Mm1Qfa& b, double tol = 1e-9);
EquivalenceVerdict equiv_cl(const Cl1Qfa& a, const Cl1Qfa& b, double tol = 1e-9,
                            bool minimize_control = true);

}  // namespace qfa
