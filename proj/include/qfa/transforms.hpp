#pragma once

#include "qfa/qfa_models.hpp"

namespace qfa {

// Bookkeeping emitted by the quantum-to-bilinear reductions.
struct ReductionReport {
    std::string input_kind;         // "mo1qfa" | "mm1qfa" | "cl1qfa"
    std::size_t quantum_states = 0;
    std::size_t control_states = 0;  // 0 when no control automaton is involved
    bool control_minimized = false;
    std::size_t output_states = 0;
    Backend backend = Backend::exact;
};

// Reads a measure-many machine as a control-language machine: same states,
// initial vector, evolutions and observable, with the built-in control
// g*a(a|r|g)* attached. Acceptance probabilities are preserved exactly.
Cl1Qfa mm_to_cl(const Mm1Qfa& m);

// Simulates a control-language machine with an (k·m^2)-state bilinear
// machine over the working alphabet, where k is the size of the given
// control DFA and m the quantum state count:
//
//   pi'    = pi ⊗ conj(pi) ⊗ rho
//   M'(s)  = (U(s) ⊗ conj(U(s)) ⊗ I) · sum_c P(c) ⊗ conj(P(c)) ⊗ M(c)
//   eta'   = sum_j e_j ⊗ e_j ⊗ xi
//
// rho/M(c)/xi are the control DFA's linear form. Index layout is row-major
// over (quantum i, conjugate j, control s): position (i·m + j)·k + s. The
// word function on w$ equals the machine's acceptance probability of w.
BilinearMachine cl_to_rblm(const Cl1Qfa& m, const ClassicalDfa& control,
                           ReductionReport* report = nullptr);

// Bilinearization of a measure-once machine: m^2 states over the same
// alphabet, pi' = pi ⊗ conj(pi), M'(s) = U(s) ⊗ conj(U(s)), eta' the
// row-major flattening of the accept projector. Word functions equal the
// acceptance probabilities on every word.
BilinearMachine mo_to_rblm(const Mo1Qfa& m, ReductionReport* report = nullptr);

// mm_to_cl, then cl_to_rblm with the built-in 3-state control, then the end
// marker folded away: a 3n^2-state bilinear machine over Sigma whose word
// function is the acceptance probability.
BilinearMachine pipeline_mm_to_blm(const Mm1Qfa& m, ReductionReport* report = nullptr);

// cl_to_rblm (control minimized first unless told otherwise), then the end
// marker folded away.
BilinearMachine pipeline_cl_to_blm(const Cl1Qfa& m, bool minimize_control = true,
                                   ReductionReport* report = nullptr);

}  // namespace qfa
