#include "qfa/dfa.hpp"

namespace qfa {

std::size_t ClassicalDfa::symbol_index(std::string_view symbol) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == symbol) return i;
    throw Error("unknown symbol '" + std::string(symbol) + "'");
}

std::size_t ClassicalDfa::step(std::size_t state, std::string_view symbol) const {
    return delta[state][symbol_index(symbol)];
}

bool ClassicalDfa::accepts(const Word& w) const {
    std::size_t s = initial;
    for (const auto& sym : w) s = delta[s][symbol_index(sym)];
    return accepting[s];
}

bool dfa_membership(const ClassicalDfa& d, const Word& w) {
    return d.accepts(w);
}

void ClassicalDfa::check_well_formed() const {
    std::vector<std::string> issues;
    if (state_count == 0) issues.push_back("dfa needs at least one state");
    if (initial >= state_count) issues.push_back("initial state out of range");
    if (delta.size() != state_count) issues.push_back("delta must cover every state");
    if (accepting.size() != state_count) issues.push_back("accepting flags must cover every state");
    for (std::size_t s = 0; s < delta.size(); ++s) {
        if (delta[s].size() != alphabet.size()) {
            issues.push_back("state " + std::to_string(s) + " is missing transitions");
            continue;
        }
        for (std::size_t a = 0; a < delta[s].size(); ++a)
            if (delta[s][a] >= state_count)
                issues.push_back("transition from state " + std::to_string(s) + " on '" +
                                 alphabet[a] + "' is out of range");
    }
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        for (std::size_t j = i + 1; j < alphabet.size(); ++j)
            if (alphabet[i] == alphabet[j]) issues.push_back("duplicate symbol '" + alphabet[i] + "'");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

BilinearMachine ClassicalDfa::to_linear(Backend b) const {
    BilinearMachine m;
    m.alphabet = alphabet;
    m.pi = Matrix::zeros(b, 1, state_count);
    m.pi.set(0, initial, Scalar::one(b));
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
        Matrix t = Matrix::zeros(b, state_count, state_count);
        for (std::size_t s = 0; s < state_count; ++s) t.set(s, delta[s][a], Scalar::one(b));
        m.transition.push_back(std::move(t));
    }
    m.eta = Matrix::zeros(b, state_count, 1);
    for (std::size_t s = 0; s < state_count; ++s)
        if (accepting[s]) m.eta.set(s, 0, Scalar::one(b));
    m.certified_real = true;
    return m;
}

namespace {

bool is_one(const Scalar& v, double tol) {
    if (v.backend() == Backend::exact) return v.exact_value() == ExactComplex::from_int(1);
    return std::abs(v.float_value().real() - 1.0) <= tol && std::abs(v.float_value().imag()) <= tol;
}

}  // namespace

ClassicalDfa ClassicalDfa::from_linear(const BilinearMachine& m, double tol) {
    if (!is_dfa_form(m, tol)) throw Error("machine is not in dfa form");
    ClassicalDfa d;
    d.alphabet = m.alphabet;
    d.state_count = m.state_count();
    for (std::size_t j = 0; j < d.state_count; ++j)
        if (is_one(m.pi.at(0, j), tol)) d.initial = j;
    d.delta.assign(d.state_count, std::vector<std::size_t>(d.alphabet.size(), 0));
    for (std::size_t a = 0; a < d.alphabet.size(); ++a)
        for (std::size_t s = 0; s < d.state_count; ++s)
            for (std::size_t j = 0; j < d.state_count; ++j)
                if (is_one(m.transition[a].at(s, j), tol)) d.delta[s][a] = j;
    d.accepting.assign(d.state_count, false);
    for (std::size_t s = 0; s < d.state_count; ++s)
        if (is_one(m.eta.at(s, 0), tol)) d.accepting[s] = true;
    return d;
}

}  // namespace qfa
