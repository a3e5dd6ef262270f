#include "qfa/qfa_models.hpp"

#include <algorithm>

namespace qfa {

namespace {

const Matrix& lookup(const std::vector<std::string>& alphabet, const std::vector<Matrix>& mats,
                     std::string_view symbol) {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == symbol) return mats[i];
    throw Error("unknown symbol '" + std::string(symbol) + "'");
}

void check_symbols(const std::vector<std::string>& alphabet, const Word& w) {
    for (const auto& sym : w)
        if (std::find(alphabet.begin(), alphabet.end(), sym) == alphabet.end())
            throw Error("unknown symbol '" + sym + "'");
}

bool unit_norm(const Matrix& pi, double tol) {
    Scalar n = norm_sq(pi);
    if (pi.backend() == Backend::exact) return n.exact_value() == ExactComplex::from_int(1);
    return std::abs(n.float_value().real() - 1.0) <= tol;
}

std::vector<std::string> validate_quantum_core(const std::vector<std::string>& working,
                                               const Matrix& pi,
                                               const std::vector<Matrix>& unitaries,
                                               const Observable& o, bool skip_unitarity,
                                               double tol) {
    std::vector<std::string> issues;
    const std::size_t n = pi.cols();
    if (pi.rows() != 1) issues.push_back("initial vector must be a 1xn row");
    if (!skip_unitarity && !unit_norm(pi, tol))
        issues.push_back("initial vector does not have unit norm");
    if (unitaries.size() != working.size()) {
        issues.push_back("one evolution matrix per working symbol is required");
        return issues;
    }
    for (std::size_t i = 0; i < working.size(); ++i) {
        const Matrix& u = unitaries[i];
        if (u.rows() != n || u.cols() != n || u.backend() != pi.backend()) {
            issues.push_back("matrix for '" + working[i] + "' has inconsistent shape or backend");
            continue;
        }
        if (!skip_unitarity && !is_unitary(u, tol)) {
            double dev = mat_mul(u, conj_transpose(u))
                             .max_abs_diff(Matrix::identity(u.backend(), n));
            issues.push_back("matrix for '" + working[i] + "' is not unitary (deviation " +
                             double_to_string(dev) + ")");
        }
    }
    for (const auto& issue : o.validate(tol)) issues.push_back("observable: " + issue);
    if (!o.projectors.empty() && (o.dimension() != n || o.backend() != pi.backend()))
        issues.push_back("observable dimension or backend does not match the machine");
    return issues;
}

}  // namespace

const Matrix& Mo1Qfa::unitary_for(std::string_view symbol) const {
    return lookup(alphabet, unitaries, symbol);
}

std::vector<std::string> Mo1Qfa::validate(double tol) const {
    auto issues = validate_quantum_core(alphabet, pi, unitaries, observable, allow_nonunitary, tol);
    if (observable.results != std::vector<std::string>{kAccept, kReject})
        issues.push_back("measure-once observable must have results {a, r}");
    return issues;
}

Mo1Qfa Mo1Qfa::to_float() const {
    Mo1Qfa out = *this;
    out.pi = pi.to_float();
    out.unitaries.clear();
    for (const Matrix& u : unitaries) out.unitaries.push_back(u.to_float());
    out.observable = observable.to_float();
    return out;
}

std::vector<std::string> Mm1Qfa::working_alphabet() const {
    std::vector<std::string> w = input_alphabet;
    w.push_back(kEndMarker);
    return w;
}

const Matrix& Mm1Qfa::unitary_for(std::string_view symbol) const {
    return lookup(working_alphabet(), unitaries, symbol);
}

std::vector<std::string> Mm1Qfa::validate(double tol) const {
    auto issues = validate_quantum_core(working_alphabet(), pi, unitaries, observable, false, tol);
    if (observable.results != std::vector<std::string>{kAccept, kReject, kGo})
        issues.push_back("measure-many observable must have results {a, r, g}");
    if (std::find(input_alphabet.begin(), input_alphabet.end(), kEndMarker) !=
        input_alphabet.end())
        issues.push_back("the end marker is reserved and cannot appear in the input alphabet");
    return issues;
}

Mm1Qfa Mm1Qfa::to_float() const {
    Mm1Qfa out = *this;
    out.pi = pi.to_float();
    out.unitaries.clear();
    for (const Matrix& u : unitaries) out.unitaries.push_back(u.to_float());
    out.observable = observable.to_float();
    return out;
}

std::vector<std::string> Cl1Qfa::working_alphabet() const {
    std::vector<std::string> w = input_alphabet;
    w.push_back(kEndMarker);
    return w;
}

const Matrix& Cl1Qfa::unitary_for(std::string_view symbol) const {
    return lookup(working_alphabet(), unitaries, symbol);
}

std::vector<std::string> Cl1Qfa::validate(double tol) const {
    auto issues = validate_quantum_core(working_alphabet(), pi, unitaries, observable, false, tol);
    if (std::find(input_alphabet.begin(), input_alphabet.end(), kEndMarker) !=
        input_alphabet.end())
        issues.push_back("the end marker is reserved and cannot appear in the input alphabet");
    try {
        control.check_well_formed();
    } catch (const ValidationError& e) {
        for (const auto& issue : e.issues) issues.push_back("control dfa: " + issue);
    }
    if (control.alphabet != observable.results)
        issues.push_back("control dfa alphabet must equal the observable result list");
    return issues;
}

Cl1Qfa Cl1Qfa::to_float() const {
    Cl1Qfa out = *this;
    out.pi = pi.to_float();
    out.unitaries.clear();
    for (const Matrix& u : unitaries) out.unitaries.push_back(u.to_float());
    out.observable = observable.to_float();
    return out;
}

Scalar mo_accept_prob(const Mo1Qfa& m, const Word& w) {
    check_symbols(m.alphabet, w);
    Matrix v = m.pi;
    for (const auto& sym : w) v = mat_mul(v, m.unitary_for(sym));
    return norm_sq(mat_mul(v, m.observable.projector_for(kAccept)));
}

Scalar mm_accept_prob_traced(const Mm1Qfa& m, const Word& w, std::vector<MmStep>& steps) {
    check_symbols(m.input_alphabet, w);
    const Matrix& pa = m.observable.projector_for(kAccept);
    const Matrix& pr = m.observable.projector_for(kReject);
    const Matrix& pg = m.observable.projector_for(kGo);
    Matrix v = m.pi;
    Scalar accept = Scalar::zero(m.backend());
    for (std::size_t i = 0; i <= w.size(); ++i) {
        const std::string& sym = i < w.size() ? w[i] : kEndMarker;
        v = mat_mul(v, m.unitary_for(sym));
        Scalar a = norm_sq(mat_mul(v, pa));
        Scalar r = norm_sq(mat_mul(v, pr));
        accept = accept + a;
        v = mat_mul(v, pg);  // unnormalized continuation
        steps.push_back({sym, a, r, norm_sq(v)});
    }
    return accept;
}

Scalar mm_accept_prob(const Mm1Qfa& m, const Word& w) {
    check_symbols(m.input_alphabet, w);
    const Matrix& pa = m.observable.projector_for(kAccept);
    const Matrix& pg = m.observable.projector_for(kGo);
    Matrix v = m.pi;
    Scalar accept = Scalar::zero(m.backend());
    for (std::size_t i = 0; i <= w.size(); ++i) {
        const std::string& sym = i < w.size() ? w[i] : kEndMarker;
        v = mat_mul(v, m.unitary_for(sym));
        accept = accept + norm_sq(mat_mul(v, pa));
        if (i < w.size()) v = mat_mul(v, pg);
    }
    return accept;
}

OutcomeDistribution mm_outcome_distribution(const Mm1Qfa& m, const Word& w) {
    check_symbols(m.input_alphabet, w);
    const Matrix& pa = m.observable.projector_for(kAccept);
    const Matrix& pr = m.observable.projector_for(kReject);
    const Matrix& pg = m.observable.projector_for(kGo);
    Matrix v = m.pi;
    Scalar accept = Scalar::zero(m.backend());
    Scalar reject = Scalar::zero(m.backend());
    for (std::size_t i = 0; i <= w.size(); ++i) {
        const std::string& sym = i < w.size() ? w[i] : kEndMarker;
        v = mat_mul(v, m.unitary_for(sym));
        accept = accept + norm_sq(mat_mul(v, pa));
        reject = reject + norm_sq(mat_mul(v, pr));
        v = mat_mul(v, pg);
    }
    // Mass still in the go subspace after the end marker never halts; it
    // counts as rejection so the two outcomes exhaust the distribution.
    reject = reject + norm_sq(v);
    return {accept, reject};
}

Scalar cl_outcome_prob(const Cl1Qfa& m, const Word& x, const Word& y) {
    check_symbols(m.input_alphabet, x);
    if (y.size() != x.size() + 1)
        throw Error("result sequence must have length |x|+1 (one result per working symbol)");
    Matrix v = m.pi;
    for (std::size_t i = 0; i <= x.size(); ++i) {
        const std::string& sym = i < x.size() ? x[i] : kEndMarker;
        v = mat_mul(v, m.unitary_for(sym));
        v = mat_mul(v, m.observable.projector_for(y[i]));
    }
    return norm_sq(v);
}

namespace {

void check_sequence_cap(std::size_t branching, std::size_t depth, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < depth; ++i) {
        if (total > cap / std::max<std::size_t>(branching, 1)) {
            throw CapExceeded("outcome-sequence enumeration needs more than " +
                              std::to_string(cap) +
                              " sequences; use the bilinear reduction instead");
        }
        total *= branching;
    }
}

// Depth-first sum over measurement-result sequences. `dfa_state` is ignored
// when `control` is null (every sequence counts).
Scalar enumerate_mass(const Matrix& v, std::size_t depth, std::size_t total_depth,
                      const std::vector<Matrix>& step_unitaries, const Observable& o,
                      const ClassicalDfa* control, std::size_t dfa_state) {
    if (depth == total_depth) {
        if (control && !control->accepting[dfa_state]) return Scalar::zero(v.backend());
        return norm_sq(v);
    }
    Matrix evolved = mat_mul(v, step_unitaries[depth]);
    Scalar sum = Scalar::zero(v.backend());
    for (std::size_t r = 0; r < o.results.size(); ++r) {
        Matrix child = mat_mul(evolved, o.projectors[r]);
        if (norm_sq(child).is_zero()) continue;  // dead branch, no mass below
        std::size_t next_state = control ? control->delta[dfa_state][r] : 0;
        sum = sum + enumerate_mass(child, depth + 1, total_depth, step_unitaries, o, control,
                                   next_state);
    }
    return sum;
}

}  // namespace

Scalar cl_accept_prob_bruteforce(const Cl1Qfa& m, const Word& x, std::uint64_t cap) {
    check_symbols(m.input_alphabet, x);
    check_sequence_cap(m.observable.results.size(), x.size() + 1, cap);
    std::vector<Matrix> steps;
    for (const auto& sym : x) steps.push_back(m.unitary_for(sym));
    steps.push_back(m.unitary_for(kEndMarker));
    return enumerate_mass(m.pi, 0, steps.size(), steps, m.observable, &m.control, m.control.initial);
}

Scalar total_outcome_mass(const std::vector<std::string>& alphabet,
                          const std::vector<Matrix>& evolutions, const Observable& o,
                          const Matrix& alpha, const Word& x, std::uint64_t cap) {
    if (!alpha.is_row()) throw DimensionError("alpha must be a row vector");
    check_symbols(alphabet, x);
    check_sequence_cap(o.results.size(), x.size(), cap);
    std::vector<Matrix> steps;
    for (const auto& sym : x) steps.push_back(lookup(alphabet, evolutions, sym));
    return enumerate_mass(alpha, 0, steps.size(), steps, o, nullptr, 0);
}

Mo1Qfa amplitude_folding_mo(const Mm1Qfa& m) {
    auto partition = m.observable.basis_partition();
    if (partition.empty())
        throw Error("amplitude folding requires basis-aligned projectors");
    const auto& accept_block = partition[m.observable.result_index(kAccept)];
    if (accept_block.size() != 1)
        throw Error("amplitude folding is defined only for a single accepting basis state");
    const std::size_t accept_idx = accept_block[0];
    const std::size_t n = m.state_count();
    const auto working = m.working_alphabet();
    const Backend b = m.backend();

    // Layout: original states minus the accepting one (order kept), then one
    // sink state per working symbol.
    std::vector<std::size_t> old_to_new(n, 0);
    std::size_t next = 0;
    for (std::size_t q = 0; q < n; ++q)
        if (q != accept_idx) old_to_new[q] = next++;
    const std::size_t sink_base = next;
    const std::size_t total = sink_base + working.size();

    Mo1Qfa out;
    out.alphabet = working;
    out.allow_nonunitary = true;
    out.pi = Matrix::zeros(b, 1, total);
    for (std::size_t q = 0; q < n; ++q)
        if (q != accept_idx) out.pi.set(0, old_to_new[q], m.pi.at(0, q));

    for (std::size_t s = 0; s < working.size(); ++s) {
        const Matrix& u = m.unitaries[s];
        Matrix t = Matrix::zeros(b, total, total);
        for (std::size_t q = 0; q < n; ++q) {
            if (q == accept_idx) continue;
            for (std::size_t p = 0; p < n; ++p) {
                Scalar amp = u.at(q, p);
                if (amp.is_zero()) continue;
                // Amplitude into the accepting state is rerouted to this
                // symbol's sink; everything else keeps its target.
                t.set(old_to_new[q], p == accept_idx ? sink_base + s : old_to_new[p], amp);
            }
        }
        for (std::size_t k = 0; k < working.size(); ++k)
            t.set(sink_base + k, sink_base + k, Scalar::one(b));  // sinks are fixed points
        out.unitaries.push_back(std::move(t));
    }

    std::vector<std::size_t> accept_states, reject_states;
    for (std::size_t k = 0; k < working.size(); ++k) accept_states.push_back(sink_base + k);
    for (std::size_t q = 0; q < sink_base; ++q) reject_states.push_back(q);
    out.observable = Observable::from_partition(b, total, {kAccept, kReject},
                                                {accept_states, reject_states});
    return out;
}

}  // namespace qfa
