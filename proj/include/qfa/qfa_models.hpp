#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfa/dfa.hpp"
#include "qfa/observable.hpp"

namespace qfa {

// Reserved end-marker symbol. Measure-many and control-language machines
// process w$ for an input w over Sigma; the user never types it.
inline constexpr const char* kEndMarker = "$";

// Canonical measurement result names for the two- and three-result models.
inline constexpr const char* kAccept = "a";
inline constexpr const char* kReject = "r";
inline constexpr const char* kGo = "g";

// Measure-once machine: unitaries per symbol, one accept/reject measurement
// at the end of the word. allow_nonunitary switches on the generalized mode
// used to simulate amplitude-folding constructions; in that mode values may
// leave [0, 1] and are reported as computed, never clamped.
struct Mo1Qfa {
    std::vector<std::string> alphabet;
    Matrix pi;                       // 1×n, unit norm
    std::vector<Matrix> unitaries;   // parallel to alphabet
    Observable observable;           // results {a, r}
    bool allow_nonunitary = false;

    std::size_t state_count() const { return pi.cols(); }
    Backend backend() const { return pi.backend(); }
    const Matrix& unitary_for(std::string_view symbol) const;
    std::vector<std::string> validate(double tol = 1e-9) const;
    Mo1Qfa to_float() const;
};

// Measure-many machine over the working alphabet Sigma ∪ {$}: measure after
// every symbol with results accept/reject/go, halt on accept or reject.
struct Mm1Qfa {
    std::vector<std::string> input_alphabet;  // Sigma; "$" excluded
    Matrix pi;
    std::vector<Matrix> unitaries;  // parallel to working_alphabet()
    Observable observable;          // results {a, r, g}

    std::size_t state_count() const { return pi.cols(); }
    Backend backend() const { return pi.backend(); }
    std::vector<std::string> working_alphabet() const;
    const Matrix& unitary_for(std::string_view symbol) const;
    std::vector<std::string> validate(double tol = 1e-9) const;
    Mm1Qfa to_float() const;
};

// Control-language machine: arbitrary result set, acceptance decided by
// whether the measurement-outcome sequence lies in a regular control
// language (held as a DFA over the result set).
struct Cl1Qfa {
    std::vector<std::string> input_alphabet;
    Matrix pi;
    std::vector<Matrix> unitaries;  // parallel to working_alphabet()
    Observable observable;
    ClassicalDfa control;                      // alphabet == observable.results
    std::optional<std::string> control_regex;  // source text, when given

    std::size_t state_count() const { return pi.cols(); }
    Backend backend() const { return pi.backend(); }
    std::vector<std::string> working_alphabet() const;
    const Matrix& unitary_for(std::string_view symbol) const;
    std::vector<std::string> validate(double tol = 1e-9) const;
    Cl1Qfa to_float() const;
};

// ||pi U(w_1)...U(w_k) P(a)||^2. In non-unitary mode the same formula runs
// with whatever matrices the machine carries.
Scalar mo_accept_prob(const Mo1Qfa& m, const Word& w);

// Acceptance probability of w (the end marker is appended internally): the
// accept mass accumulated over one measurement per working symbol, with the
// continuation vector propagated unnormalized.
Scalar mm_accept_prob(const Mm1Qfa& m, const Word& w);

struct MmStep {
    std::string symbol;
    Scalar accept_mass;       // added to the accept total at this step
    Scalar reject_mass;       // added to the reject total at this step
    Scalar continue_norm_sq;  // squared norm of the unnormalized continuation
};

Scalar mm_accept_prob_traced(const Mm1Qfa& m, const Word& w, std::vector<MmStep>& steps);

struct OutcomeDistribution {
    Scalar accept;
    Scalar reject;  // includes any go-subspace mass left after the end marker
};

// Accept matches mm_accept_prob; accept + reject is exactly 1 for unitary
// machines (probability conservation), since a run that never halts rejects.
OutcomeDistribution mm_outcome_distribution(const Mm1Qfa& m, const Word& w);

// p(y | x$) for a measurement-result sequence y with |y| = |x| + 1.
Scalar cl_outcome_prob(const Cl1Qfa& m, const Word& x, const Word& y);

// Acceptance probability of x by summing p(y|x$) over all result sequences in
// the control language, enumerated directly. |C|^(|x|+1) must stay within
// `cap`; larger instances should go through the bilinear reduction instead.
Scalar cl_accept_prob_bruteforce(const Cl1Qfa& m, const Word& x, std::uint64_t cap = 1000000);

// Total outcome-sequence mass sum_y ||alpha U(x_1)P(y_1)...U(x_r)P(y_r)||^2.
// Equals ||alpha||^2 whenever the evolution matrices are unitary.
Scalar total_outcome_mass(const std::vector<std::string>& alphabet,
                          const std::vector<Matrix>& evolutions, const Observable& o,
                          const Matrix& alpha, const Word& x, std::uint64_t cap = 1000000);

// Measure-once view of a measure-many machine that reroutes accept
// amplitudes into one sink state per working symbol and never measures
// mid-word. The sinks accumulate amplitudes, not probabilities, so the
// result is NOT equivalent to the original machine; the simulator exists to
// demonstrate exactly that. Defined only when the accept projector covers a
// single basis state.
Mo1Qfa amplitude_folding_mo(const Mm1Qfa& m);

}  // namespace qfa
