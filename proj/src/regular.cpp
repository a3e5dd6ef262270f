#include "qfa/regular.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "qfa/qfa_models.hpp"

namespace qfa {

RegexAst RegexAst::concat(RegexAst a, RegexAst b) {
    RegexAst n{Kind::concatenation, {}, {}};
    n.children.push_back(std::move(a));
    n.children.push_back(std::move(b));
    return n;
}

RegexAst RegexAst::alt(RegexAst a, RegexAst b) {
    RegexAst n{Kind::alternation, {}, {}};
    n.children.push_back(std::move(a));
    n.children.push_back(std::move(b));
    return n;
}

RegexAst RegexAst::star(RegexAst a) {
    RegexAst n{Kind::star, {}, {}};
    n.children.push_back(std::move(a));
    return n;
}

namespace {

class RegexParser {
  public:
    RegexParser(std::string_view text, const std::vector<std::string>& alphabet)
        : text_(text), alphabet_(alphabet) {}

    RegexAst parse() {
        if (text_.empty()) return RegexAst::epsilon();
        RegexAst ast = alternation();
        if (pos_ != text_.size()) fail("unexpected character");
        return ast;
    }

  private:
    std::string_view text_;
    const std::vector<std::string>& alphabet_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("regex: " + what + " at offset " + std::to_string(pos_), pos_);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    RegexAst alternation() {
        RegexAst left = concatenation();
        while (!at_end() && peek() == '|') {
            ++pos_;
            left = RegexAst::alt(std::move(left), concatenation());
        }
        return left;
    }

    RegexAst concatenation() {
        // An empty branch ("a|" or "()") is epsilon.
        if (at_end() || peek() == '|' || peek() == ')') return RegexAst::epsilon();
        RegexAst left = starred();
        while (!at_end() && peek() != '|' && peek() != ')')
            left = RegexAst::concat(std::move(left), starred());
        return left;
    }

    RegexAst starred() {
        RegexAst node = primary();
        while (!at_end() && peek() == '*') {
            ++pos_;
            node = RegexAst::star(std::move(node));
        }
        return node;
    }

    RegexAst primary() {
        if (at_end()) fail("unexpected end of input");
        char c = peek();
        if (c == '(') {
            ++pos_;
            RegexAst inner = alternation();
            if (at_end() || peek() != ')') fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (c == '*') fail("'*' needs an operand");
        if (c == '\'') return quoted_literal();
        ++pos_;
        std::string sym(1, c);
        require_in_alphabet(sym, pos_ - 1);
        return RegexAst::literal(std::move(sym));
    }

    RegexAst quoted_literal() {
        std::size_t open = pos_++;
        std::string sym;
        while (!at_end() && peek() != '\'') sym += text_[pos_++];
        if (at_end()) {
            pos_ = open;
            fail("unterminated quoted symbol");
        }
        ++pos_;
        require_in_alphabet(sym, open);
        return RegexAst::literal(std::move(sym));
    }

    void require_in_alphabet(const std::string& sym, std::size_t at) {
        if (std::find(alphabet_.begin(), alphabet_.end(), sym) == alphabet_.end()) {
            pos_ = at;
            fail("symbol '" + sym + "' is not in the alphabet");
        }
    }
};

}  // namespace

RegexAst parse_regex(std::string_view text, const std::vector<std::string>& alphabet) {
    return RegexParser(text, alphabet).parse();
}

namespace {

struct Fragment {
    std::size_t start, accept;
};

class ThompsonBuilder {
  public:
    explicit ThompsonBuilder(const std::vector<std::string>& alphabet) {
        nfa_.alphabet = alphabet;
    }

    Nfa build(const RegexAst& ast) {
        Fragment f = visit(ast);
        nfa_.initial = f.start;
        nfa_.accepting = f.accept;
        return std::move(nfa_);
    }

  private:
    Nfa nfa_;

    std::size_t fresh() {
        nfa_.edges.emplace_back();
        return nfa_.edges.size() - 1;
    }

    void link(std::size_t from, std::size_t symbol, std::size_t to) {
        nfa_.edges[from].emplace_back(symbol, to);
    }

    std::size_t symbol_index(const std::string& sym) const {
        auto it = std::find(nfa_.alphabet.begin(), nfa_.alphabet.end(), sym);
        if (it == nfa_.alphabet.end()) throw Error("regex literal '" + sym + "' not in alphabet");
        return static_cast<std::size_t>(it - nfa_.alphabet.begin());
    }

    Fragment visit(const RegexAst& ast) {
        switch (ast.kind) {
            case RegexAst::Kind::empty_set: {
                return {fresh(), fresh()};  // no path between them
            }
            case RegexAst::Kind::epsilon: {
                std::size_t s = fresh(), t = fresh();
                link(s, Nfa::kEpsilon, t);
                return {s, t};
            }
            case RegexAst::Kind::literal: {
                std::size_t s = fresh(), t = fresh();
                link(s, symbol_index(ast.symbol), t);
                return {s, t};
            }
            case RegexAst::Kind::concatenation: {
                Fragment a = visit(ast.children[0]);
                Fragment b = visit(ast.children[1]);
                link(a.accept, Nfa::kEpsilon, b.start);
                return {a.start, b.accept};
            }
            case RegexAst::Kind::alternation: {
                Fragment a = visit(ast.children[0]);
                Fragment b = visit(ast.children[1]);
                std::size_t s = fresh(), t = fresh();
                link(s, Nfa::kEpsilon, a.start);
                link(s, Nfa::kEpsilon, b.start);
                link(a.accept, Nfa::kEpsilon, t);
                link(b.accept, Nfa::kEpsilon, t);
                return {s, t};
            }
            case RegexAst::Kind::star: {
                Fragment a = visit(ast.children[0]);
                std::size_t s = fresh(), t = fresh();
                link(s, Nfa::kEpsilon, a.start);
                link(s, Nfa::kEpsilon, t);
                link(a.accept, Nfa::kEpsilon, a.start);
                link(a.accept, Nfa::kEpsilon, t);
                return {s, t};
            }
        }
        throw Error("unreachable regex node kind");
    }
};

std::vector<std::size_t> epsilon_closure(const Nfa& nfa, std::vector<std::size_t> states) {
    std::vector<bool> in(nfa.state_count(), false);
    std::deque<std::size_t> queue;
    for (auto s : states) {
        if (!in[s]) {
            in[s] = true;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        std::size_t s = queue.front();
        queue.pop_front();
        for (auto [sym, to] : nfa.edges[s])
            if (sym == Nfa::kEpsilon && !in[to]) {
                in[to] = true;
                queue.push_back(to);
            }
    }
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < in.size(); ++s)
        if (in[s]) out.push_back(s);
    return out;
}

}  // namespace

Nfa thompson_nfa(const RegexAst& ast, const std::vector<std::string>& alphabet) {
    return ThompsonBuilder(alphabet).build(ast);
}

ClassicalDfa nfa_to_dfa(const Nfa& nfa, std::size_t state_cap) {
    ClassicalDfa dfa;
    dfa.alphabet = nfa.alphabet;
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::vector<std::size_t>> subsets;
    std::deque<std::size_t> work;

    auto intern = [&](std::vector<std::size_t> subset) {
        auto [it, inserted] = ids.emplace(std::move(subset), subsets.size());
        if (inserted) {
            if (subsets.size() >= state_cap)
                throw CapExceeded("subset construction exceeded " + std::to_string(state_cap) +
                                  " states");
            subsets.push_back(it->first);
            work.push_back(it->second);
        }
        return it->second;
    };

    intern(epsilon_closure(nfa, {nfa.initial}));
    dfa.initial = 0;
    while (!work.empty()) {
        std::size_t id = work.front();
        work.pop_front();
        std::vector<std::size_t> subset = subsets[id];
        if (dfa.delta.size() <= id) dfa.delta.resize(id + 1);
        dfa.delta[id].assign(nfa.alphabet.size(), 0);
        for (std::size_t a = 0; a < nfa.alphabet.size(); ++a) {
            std::vector<std::size_t> moved;
            for (std::size_t s : subset)
                for (auto [sym, to] : nfa.edges[s])
                    if (sym == a) moved.push_back(to);
            std::sort(moved.begin(), moved.end());
            moved.erase(std::unique(moved.begin(), moved.end()), moved.end());
            dfa.delta[id][a] = intern(epsilon_closure(nfa, std::move(moved)));
        }
    }
    dfa.state_count = subsets.size();
    dfa.delta.resize(dfa.state_count);
    for (auto& row : dfa.delta)
        if (row.empty()) row.assign(nfa.alphabet.size(), 0);
    dfa.accepting.assign(dfa.state_count, false);
    for (std::size_t id = 0; id < subsets.size(); ++id)
        dfa.accepting[id] =
            std::binary_search(subsets[id].begin(), subsets[id].end(), nfa.accepting);
    return dfa;
}

ClassicalDfa regex_to_dfa(const RegexAst& ast, const std::vector<std::string>& alphabet,
                          std::size_t state_cap) {
    return nfa_to_dfa(thompson_nfa(ast, alphabet), state_cap);
}

namespace {

// Renumber states in breadth-first discovery order from the initial state,
// scanning symbols in alphabet order.
ClassicalDfa canonical_renumber(const ClassicalDfa& d) {
    std::vector<std::size_t> order(d.state_count, static_cast<std::size_t>(-1));
    std::deque<std::size_t> queue{d.initial};
    order[d.initial] = 0;
    std::size_t next = 1;
    while (!queue.empty()) {
        std::size_t s = queue.front();
        queue.pop_front();
        for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
            std::size_t t = d.delta[s][a];
            if (order[t] == static_cast<std::size_t>(-1)) {
                order[t] = next++;
                queue.push_back(t);
            }
        }
    }
    ClassicalDfa out;
    out.alphabet = d.alphabet;
    out.state_count = next;
    out.initial = 0;
    out.delta.assign(next, std::vector<std::size_t>(d.alphabet.size(), 0));
    out.accepting.assign(next, false);
    for (std::size_t s = 0; s < d.state_count; ++s) {
        if (order[s] == static_cast<std::size_t>(-1)) continue;  // unreachable
        for (std::size_t a = 0; a < d.alphabet.size(); ++a)
            out.delta[order[s]][a] = order[d.delta[s][a]];
        out.accepting[order[s]] = d.accepting[s];
    }
    return out;
}

}  // namespace

ClassicalDfa minimize_dfa(const ClassicalDfa& d) {
    d.check_well_formed();
    // Drop unreachable states first; canonical_renumber does exactly that.
    ClassicalDfa r = canonical_renumber(d);
    const std::size_t n = r.state_count;
    const std::size_t k = r.alphabet.size();

    // Inverse transition lists: inv[a][t] = sources s with delta(s, a) = t.
    std::vector<std::vector<std::vector<std::size_t>>> inv(
        k, std::vector<std::vector<std::size_t>>(n));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t a = 0; a < k; ++a) inv[a][r.delta[s][a]].push_back(s);

    std::vector<std::size_t> block_of(n);
    std::vector<std::vector<std::size_t>> blocks;
    {
        std::vector<std::size_t> acc, rej;
        for (std::size_t s = 0; s < n; ++s) (r.accepting[s] ? acc : rej).push_back(s);
        if (!acc.empty()) blocks.push_back(std::move(acc));
        if (!rej.empty()) blocks.push_back(std::move(rej));
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (std::size_t s : blocks[b]) block_of[s] = b;
    }

    std::deque<std::size_t> worklist;
    std::vector<bool> queued(blocks.size(), false);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        worklist.push_back(b);
        queued[b] = true;
    }

    std::vector<bool> mark(n, false);
    while (!worklist.empty()) {
        std::size_t splitter = worklist.front();
        worklist.pop_front();
        queued[splitter] = false;
        std::vector<std::size_t> splitter_states = blocks[splitter];

        for (std::size_t a = 0; a < k; ++a) {
            // X = preimage of the splitter under symbol a.
            std::vector<std::size_t> x;
            for (std::size_t t : splitter_states)
                for (std::size_t s : inv[a][t])
                    if (!mark[s]) {
                        mark[s] = true;
                        x.push_back(s);
                    }
            // Group X by current block, ascending block id for determinism.
            std::map<std::size_t, std::vector<std::size_t>> touched;
            for (std::size_t s : x) touched[block_of[s]].push_back(s);
            for (auto& [b, inside] : touched) {
                if (inside.size() == blocks[b].size()) continue;  // no split
                std::vector<std::size_t> outside;
                for (std::size_t s : blocks[b])
                    if (!mark[s]) outside.push_back(s);
                std::sort(inside.begin(), inside.end());
                std::size_t nb = blocks.size();
                blocks[b] = std::move(outside);
                blocks.push_back(std::move(inside));
                for (std::size_t s : blocks[nb]) block_of[s] = nb;
                queued.push_back(false);
                if (queued[b]) {
                    worklist.push_back(nb);
                    queued[nb] = true;
                } else {
                    // Enqueue the smaller part.
                    std::size_t pick = blocks[nb].size() < blocks[b].size() ? nb : b;
                    worklist.push_back(pick);
                    queued[pick] = true;
                }
            }
            for (std::size_t s : x) mark[s] = false;
        }
    }

    ClassicalDfa merged;
    merged.alphabet = r.alphabet;
    merged.state_count = blocks.size();
    merged.initial = block_of[r.initial];
    merged.delta.assign(blocks.size(), std::vector<std::size_t>(k, 0));
    merged.accepting.assign(blocks.size(), false);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        std::size_t representative = blocks[b].front();
        for (std::size_t a = 0; a < k; ++a)
            merged.delta[b][a] = block_of[r.delta[representative][a]];
        merged.accepting[b] = r.accepting[representative];
    }
    return canonical_renumber(merged);
}

ClassicalDfa mm_acceptance_control_dfa() {
    // State 0: only go results seen so far. State 1: an accept came first
    // (absorbing, accepting). State 2: a reject came first (absorbing).
    ClassicalDfa d;
    d.alphabet = {kAccept, kReject, kGo};
    d.state_count = 3;
    d.initial = 0;
    d.delta = {{1, 2, 0}, {1, 1, 1}, {2, 2, 2}};
    d.accepting = {false, true, false};
    return d;
}

}  // namespace qfa
