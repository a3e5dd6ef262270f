#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qfa/blm.hpp"

namespace qfa {

// A total deterministic finite automaton. States are 0..state_count-1 and
// delta[s][a] is defined for every state and alphabet index, so the linear
// view below is honestly stochastic 0/1.
struct ClassicalDfa {
    std::vector<std::string> alphabet;
    std::size_t state_count = 0;
    std::size_t initial = 0;
    std::vector<std::vector<std::size_t>> delta;  // [state][symbol index] -> state
    std::vector<bool> accepting;

    std::size_t symbol_index(std::string_view symbol) const;  // throws on unknown symbol
    std::size_t step(std::size_t state, std::string_view symbol) const;
    bool accepts(const Word& w) const;

    void check_well_formed() const;

    // Linear form: degenerate stochastic initial row, 0/1 transition
    // matrices, 0/1 accepting column. word_function of the result is the
    // characteristic function of the language.
    BilinearMachine to_linear(Backend b) const;
    // Inverse of to_linear; requires a machine in dfa form.
    static ClassicalDfa from_linear(const BilinearMachine& m, double tol = 1e-9);
};

bool dfa_membership(const ClassicalDfa& d, const Word& w);

}  // namespace qfa
