#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qfa/dfa.hpp"

namespace qfa {

// Regular expression AST over union, concatenation and star. Literals come
// from a declared alphabet; multi-character symbols are written in quotes.
struct RegexAst {
    enum class Kind { empty_set, epsilon, literal, concatenation, alternation, star };
    Kind kind = Kind::epsilon;
    std::string symbol;              // literal only
    std::vector<RegexAst> children;  // binary for concat/alt, unary for star

    static RegexAst empty_set() { return {Kind::empty_set, {}, {}}; }
    static RegexAst epsilon() { return {Kind::epsilon, {}, {}}; }
    static RegexAst literal(std::string sym) { return {Kind::literal, std::move(sym), {}}; }
    static RegexAst concat(RegexAst a, RegexAst b);
    static RegexAst alt(RegexAst a, RegexAst b);
    static RegexAst star(RegexAst a);
};

// Grammar: alternation '|', concatenation by juxtaposition, postfix '*',
// grouping '()', multi-character symbols quoted as 'sym'. The empty string
// denotes epsilon. Star binds tighter than concatenation, which binds
// tighter than alternation.
RegexAst parse_regex(std::string_view text, const std::vector<std::string>& alphabet);

// Nondeterministic automaton with epsilon moves; the Thompson construction
// produces one initial and one accepting state.
struct Nfa {
    static constexpr std::size_t kEpsilon = static_cast<std::size_t>(-1);
    std::vector<std::string> alphabet;
    // edges[s] lists (symbol index or kEpsilon, target).
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges;
    std::size_t initial = 0;
    std::size_t accepting = 0;

    std::size_t state_count() const { return edges.size(); }
};

Nfa thompson_nfa(const RegexAst& ast, const std::vector<std::string>& alphabet);

// Subset construction. The result is total (the empty subset is the dead
// state). Throws CapExceeded past `state_cap` subsets.
ClassicalDfa nfa_to_dfa(const Nfa& nfa, std::size_t state_cap = 100000);

ClassicalDfa regex_to_dfa(const RegexAst& ast, const std::vector<std::string>& alphabet,
                          std::size_t state_cap = 100000);

// Hopcroft partition refinement preceded by reachability pruning. Output
// states are renumbered in breadth-first order from the initial state, so
// equal languages give identical automata.
ClassicalDfa minimize_dfa(const ClassicalDfa& d);

// The built-in 3-state control automaton over results {a, r, g} accepting
// sequences whose first non-go result is an accept: g*a(a|r|g)*. This is the
// control language that makes a control-language machine behave like a
// measure-many machine.
ClassicalDfa mm_acceptance_control_dfa();

// Its regex source, usable in machine documents.
inline constexpr const char* kMmAcceptanceControlRegex = "g*a(a|r|g)*";

}  // namespace qfa
