#include "qfa/document.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qfa/regular.hpp"
#include "qfa/scalar_expr.hpp"

namespace qfa {

using nlohmann::json;

const char* to_string(MachineKind k) {
    switch (k) {
        case MachineKind::blm: return "blm";
        case MachineKind::dfa: return "dfa";
        case MachineKind::mo1qfa: return "mo1qfa";
        case MachineKind::mm1qfa: return "mm1qfa";
        case MachineKind::cl1qfa: return "cl1qfa";
    }
    return "blm";
}

const std::vector<std::string>& MachineDocument::input_alphabet() const {
    switch (kind) {
        case MachineKind::blm: return blm().alphabet;
        case MachineKind::dfa: return dfa().alphabet;
        case MachineKind::mo1qfa: return mo().alphabet;
        case MachineKind::mm1qfa: return mm().input_alphabet;
        case MachineKind::cl1qfa: return cl().input_alphabet;
    }
    return blm().alphabet;
}

std::size_t MachineDocument::state_count() const {
    switch (kind) {
        case MachineKind::blm: return blm().state_count();
        case MachineKind::dfa: return dfa().state_count;
        case MachineKind::mo1qfa: return mo().state_count();
        case MachineKind::mm1qfa: return mm().state_count();
        case MachineKind::cl1qfa: return cl().state_count();
    }
    return 0;
}

Backend MachineDocument::backend() const {
    switch (kind) {
        case MachineKind::blm: return blm().backend();
        case MachineKind::dfa: return Backend::exact;
        case MachineKind::mo1qfa: return mo().backend();
        case MachineKind::mm1qfa: return mm().backend();
        case MachineKind::cl1qfa: return cl().backend();
    }
    return Backend::exact;
}

MachineDocument MachineDocument::to_float() const {
    MachineDocument out = *this;
    switch (kind) {
        case MachineKind::blm: out.machine = blm().to_float(); break;
        case MachineKind::dfa: break;
        case MachineKind::mo1qfa: out.machine = mo().to_float(); break;
        case MachineKind::mm1qfa: out.machine = mm().to_float(); break;
        case MachineKind::cl1qfa: out.machine = cl().to_float(); break;
    }
    return out;
}

namespace {

[[noreturn]] void bad(const std::string& what) {
    throw ValidationError({what});
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing field '") + key + "'");
    return *it;
}

std::vector<std::string> string_list(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) bad(std::string(what) + " must contain only strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::vector<std::size_t> index_list(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array of state indices");
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        if (!v.is_number_unsigned()) bad(std::string(what) + " must contain only state indices");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

// Scalar-expression walker. First pass records whether anything needs the
// float backend; the second pass materializes values on the decided backend.
class EntryReader {
  public:
    explicit EntryReader(std::optional<Backend> hint) : hint_(hint) {}

    void scan(const json& j, const std::string& where) {
        if (!j.is_string()) bad(where + ": scalar entries must be expression strings");
        const std::string& text = j.get_ref<const std::string&>();
        try {
            if (parse_scalar(text).backend() == Backend::floating) needs_float_ = true;
        } catch (const ParseError& e) {
            bad(where + ": " + e.what());
        }
    }

    Backend decide() const {
        if (hint_) {
            if (*hint_ == Backend::exact && needs_float_)
                bad("document requests the exact backend but contains irrational entries");
            return *hint_;
        }
        return needs_float_ ? Backend::floating : Backend::exact;
    }

    static Scalar value(const json& j, Backend b) {
        return parse_scalar_as(j.get_ref<const std::string&>(), b);
    }

  private:
    std::optional<Backend> hint_;
    bool needs_float_ = false;
};

void scan_matrix(EntryReader& reader, const json& j, const std::string& where) {
    if (!j.is_array()) bad(where + " must be an array of rows");
    for (const auto& row : j) {
        if (!row.is_array()) bad(where + " must be an array of rows");
        for (const auto& cell : row) reader.scan(cell, where);
    }
}

void scan_vector(EntryReader& reader, const json& j, const std::string& where) {
    if (!j.is_array()) bad(where + " must be an array of entries");
    for (const auto& cell : j) reader.scan(cell, where);
}

Matrix read_matrix(const json& j, Backend b, const std::string& where) {
    const std::size_t rows = j.size();
    std::size_t cols = rows == 0 ? 0 : j[0].size();
    std::vector<Scalar> entries;
    for (const auto& row : j) {
        if (row.size() != cols) bad(where + ": ragged matrix rows");
        for (const auto& cell : row) entries.push_back(EntryReader::value(cell, b));
    }
    return Matrix::from_scalars(b, rows, cols, entries);
}

Matrix read_row(const json& j, Backend b) {
    std::vector<Scalar> entries;
    for (const auto& cell : j) entries.push_back(EntryReader::value(cell, b));
    return Matrix::from_scalars(b, 1, entries.size(), entries);
}

Matrix read_col(const json& j, Backend b) {
    std::vector<Scalar> entries;
    for (const auto& cell : j) entries.push_back(EntryReader::value(cell, b));
    return Matrix::from_scalars(b, entries.size(), 1, entries);
}

// Symbol-keyed matrices in declared-alphabet order.
std::vector<Matrix> read_symbol_matrices(const json& j, const std::vector<std::string>& symbols,
                                         Backend b, const std::string& where) {
    if (!j.is_object()) bad(where + " must map symbols to matrices");
    std::vector<Matrix> out;
    for (const auto& sym : symbols) {
        auto it = j.find(sym);
        if (it == j.end()) bad(where + ": missing matrix for symbol '" + sym + "'");
        out.push_back(read_matrix(*it, b, where + "['" + sym + "']"));
    }
    if (j.size() != symbols.size()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            if (std::find(symbols.begin(), symbols.end(), it.key()) == symbols.end())
                bad(where + ": matrix for undeclared symbol '" + it.key() + "'");
    }
    return out;
}

void scan_symbol_matrices(EntryReader& reader, const json& j, const std::string& where) {
    if (!j.is_object()) bad(where + " must map symbols to matrices");
    for (auto it = j.begin(); it != j.end(); ++it) scan_matrix(reader, it.value(), where);
}

ClassicalDfa read_dfa_payload(const json& j, const std::vector<std::string>& alphabet) {
    ClassicalDfa d;
    d.alphabet = alphabet;
    const json& states = field(j, "states");
    if (!states.is_number_unsigned()) bad("'states' must be a state count");
    d.state_count = states.get<std::size_t>();
    const json& initial = field(j, "initial");
    if (!initial.is_number_unsigned()) bad("'initial' must be a state index");
    d.initial = initial.get<std::size_t>();
    const json& trans = field(j, "transitions");
    if (!trans.is_object()) bad("'transitions' must map symbols to target arrays");
    d.delta.assign(d.state_count, std::vector<std::size_t>(alphabet.size(), 0));
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
        auto it = trans.find(alphabet[a]);
        if (it == trans.end()) bad("missing transitions for symbol '" + alphabet[a] + "'");
        auto targets = index_list(*it, "transitions");
        if (targets.size() != d.state_count)
            bad("transitions for '" + alphabet[a] + "' must list one target per state");
        for (std::size_t s = 0; s < d.state_count; ++s) d.delta[s][a] = targets[s];
    }
    d.accepting.assign(d.state_count, false);
    for (std::size_t s : index_list(field(j, "accepting"), "accepting")) {
        if (s >= d.state_count) bad("accepting state " + std::to_string(s) + " out of range");
        d.accepting[s] = true;
    }
    d.check_well_formed();
    return d;
}

Observable read_observable(const json& j, MachineKind kind, std::size_t n, Backend b,
                           EntryReader* scan_only) {
    if (!j.is_object()) bad("'observable' must be an object");

    std::vector<std::string> results;
    if (kind == MachineKind::mo1qfa)
        results = {kAccept, kReject};
    else if (kind == MachineKind::mm1qfa)
        results = {kAccept, kReject, kGo};
    else
        results = string_list(field(j, "results"), "'results'");

    if (j.contains("projectors")) {
        if (scan_only) {
            scan_symbol_matrices(*scan_only, j["projectors"], "observable projectors");
            return {};
        }
        Observable o;
        o.results = results;
        o.projectors = read_symbol_matrices(j["projectors"], results, b, "observable projectors");
        return o;
    }
    if (scan_only) return {};

    // Partition form: per-result basis index blocks.
    std::vector<std::vector<std::size_t>> blocks(results.size());
    auto fill_rest = [&](std::size_t rest_slot) {
        std::vector<bool> used(n, false);
        for (const auto& block : blocks)
            for (std::size_t i : block) {
                if (i >= n) bad("observable partition index out of range");
                used[i] = true;
            }
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i]) blocks[rest_slot].push_back(i);
    };
    if (kind == MachineKind::mo1qfa) {
        blocks[0] = index_list(field(j, "accept_states"), "'accept_states'");
        fill_rest(1);
    } else if (kind == MachineKind::mm1qfa) {
        blocks[0] = index_list(field(j, "accept_states"), "'accept_states'");
        blocks[1] = index_list(field(j, "reject_states"), "'reject_states'");
        fill_rest(2);
    } else {
        const json& part = field(j, "partition");
        if (!part.is_object()) bad("'partition' must map results to index blocks");
        for (std::size_t r = 0; r < results.size(); ++r) {
            auto it = part.find(results[r]);
            if (it != part.end()) blocks[r] = index_list(*it, "partition block");
        }
    }
    try {
        return Observable::from_partition(b, n, results, blocks);
    } catch (const Error& e) {
        bad(std::string("observable: ") + e.what());
    }
}

struct QuantumPayload {
    Matrix pi;
    std::vector<Matrix> unitaries;
    Observable observable;
    Backend backend;
};

QuantumPayload read_quantum(const json& j, MachineKind kind,
                            const std::vector<std::string>& working,
                            std::optional<Backend> hint) {
    EntryReader reader(hint);
    scan_vector(reader, field(j, "initial"), "'initial'");
    scan_symbol_matrices(reader, field(j, "unitaries"), "'unitaries'");
    if (j.contains("observable")) read_observable(field(j, "observable"), kind, 0, {}, &reader);
    const Backend b = reader.decide();

    QuantumPayload p;
    p.backend = b;
    p.pi = read_row(field(j, "initial"), b);
    p.unitaries = read_symbol_matrices(field(j, "unitaries"), working, b, "'unitaries'");
    p.observable = read_observable(field(j, "observable"), kind, p.pi.cols(), b, nullptr);
    return p;
}

std::optional<Backend> backend_hint(const json& j) {
    if (!j.contains("backend")) return std::nullopt;
    const std::string& s = j["backend"].get_ref<const std::string&>();
    if (s == "exact") return Backend::exact;
    if (s == "float") return Backend::floating;
    bad("'backend' must be \"exact\" or \"float\"");
}

void require_valid(const std::vector<std::string>& issues) {
    if (!issues.empty()) throw ValidationError(issues);
}

}  // namespace

MachineDocument parse_machine_json(const std::string& text, double tol) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("document is not valid JSON: ") + e.what(),
                         static_cast<std::size_t>(e.byte));
    }
    if (!j.is_object()) bad("document must be a JSON object");

    MachineDocument doc;
    const std::string kind_text = field(j, "kind").get<std::string>();
    if (kind_text == "blm")
        doc.kind = MachineKind::blm;
    else if (kind_text == "dfa")
        doc.kind = MachineKind::dfa;
    else if (kind_text == "mo1qfa")
        doc.kind = MachineKind::mo1qfa;
    else if (kind_text == "mm1qfa")
        doc.kind = MachineKind::mm1qfa;
    else if (kind_text == "cl1qfa")
        doc.kind = MachineKind::cl1qfa;
    else
        bad("unknown machine kind '" + kind_text + "'");

    if (j.contains("name")) doc.name = j["name"].get<std::string>();
    if (j.contains("description")) doc.description = j["description"].get<std::string>();
    auto hint = backend_hint(j);
    auto alphabet = string_list(field(j, "alphabet"), "'alphabet'");

    switch (doc.kind) {
        case MachineKind::blm: {
            EntryReader reader(hint);
            scan_vector(reader, field(j, "pi"), "'pi'");
            scan_symbol_matrices(reader, field(j, "matrices"), "'matrices'");
            scan_vector(reader, field(j, "eta"), "'eta'");
            const Backend b = reader.decide();
            BilinearMachine m;
            m.alphabet = alphabet;
            m.pi = read_row(field(j, "pi"), b);
            m.transition = read_symbol_matrices(field(j, "matrices"), alphabet, b, "'matrices'");
            m.eta = read_col(field(j, "eta"), b);
            if (j.contains("real_valued")) m.certified_real = j["real_valued"].get<bool>();
            m.check_well_formed();
            doc.machine = std::move(m);
            break;
        }
        case MachineKind::dfa: {
            doc.machine = read_dfa_payload(j, alphabet);
            break;
        }
        case MachineKind::mo1qfa: {
            auto p = read_quantum(j, doc.kind, alphabet, hint);
            Mo1Qfa m;
            m.alphabet = alphabet;
            m.pi = std::move(p.pi);
            m.unitaries = std::move(p.unitaries);
            m.observable = std::move(p.observable);
            if (j.contains("allow_nonunitary")) m.allow_nonunitary = j["allow_nonunitary"].get<bool>();
            require_valid(m.validate(tol));
            doc.machine = std::move(m);
            break;
        }
        case MachineKind::mm1qfa: {
            std::vector<std::string> working = alphabet;
            working.push_back(kEndMarker);
            auto p = read_quantum(j, doc.kind, working, hint);
            Mm1Qfa m;
            m.input_alphabet = alphabet;
            m.pi = std::move(p.pi);
            m.unitaries = std::move(p.unitaries);
            m.observable = std::move(p.observable);
            require_valid(m.validate(tol));
            doc.machine = std::move(m);
            break;
        }
        case MachineKind::cl1qfa: {
            std::vector<std::string> working = alphabet;
            working.push_back(kEndMarker);
            auto p = read_quantum(j, doc.kind, working, hint);
            Cl1Qfa m;
            m.input_alphabet = alphabet;
            m.pi = std::move(p.pi);
            m.unitaries = std::move(p.unitaries);
            m.observable = std::move(p.observable);
            const json& control = field(j, "control");
            if (control.contains("regex")) {
                const std::string& pattern = control["regex"].get_ref<const std::string&>();
                m.control = regex_to_dfa(parse_regex(pattern, m.observable.results),
                                         m.observable.results);
                m.control_regex = pattern;
            } else if (control.contains("dfa")) {
                m.control = read_dfa_payload(control["dfa"], m.observable.results);
            } else {
                bad("'control' must contain either a \"regex\" or a \"dfa\"");
            }
            require_valid(m.validate(tol));
            doc.machine = std::move(m);
            break;
        }
    }
    return doc;
}

MachineDocument load_machine(const std::string& path, double tol) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_machine_json(buf.str(), tol);
    } catch (const ValidationError& e) {
        std::vector<std::string> issues;
        for (const auto& issue : e.issues) issues.push_back(path + ": " + issue);
        throw ValidationError(std::move(issues));
    }
}

namespace {

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

json row_json(const Matrix& m) {
    json out = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.at(0, j).str());
    return out;
}

json col_json(const Matrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.at(i, 0).str());
    return out;
}

json symbol_matrices_json(const std::vector<std::string>& symbols,
                          const std::vector<Matrix>& mats) {
    json out = json::object();
    for (std::size_t i = 0; i < symbols.size(); ++i) out[symbols[i]] = matrix_json(mats[i]);
    return out;
}

json dfa_payload_json(const ClassicalDfa& d) {
    json out = json::object();
    out["states"] = d.state_count;
    out["initial"] = d.initial;
    json trans = json::object();
    for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
        json targets = json::array();
        for (std::size_t s = 0; s < d.state_count; ++s) targets.push_back(d.delta[s][a]);
        trans[d.alphabet[a]] = std::move(targets);
    }
    out["transitions"] = std::move(trans);
    json acc = json::array();
    for (std::size_t s = 0; s < d.state_count; ++s)
        if (d.accepting[s]) acc.push_back(s);
    out["accepting"] = std::move(acc);
    return out;
}

json observable_json(const Observable& o, MachineKind kind) {
    json out = json::object();
    auto partition = o.basis_partition();
    if (!partition.empty()) {
        if (kind == MachineKind::mo1qfa) {
            out["accept_states"] = partition[o.result_index(kAccept)];
        } else if (kind == MachineKind::mm1qfa) {
            out["accept_states"] = partition[o.result_index(kAccept)];
            out["reject_states"] = partition[o.result_index(kReject)];
        } else {
            out["results"] = o.results;
            json blocks = json::object();
            for (std::size_t r = 0; r < o.results.size(); ++r) blocks[o.results[r]] = partition[r];
            out["partition"] = std::move(blocks);
        }
    } else {
        if (kind == MachineKind::cl1qfa) out["results"] = o.results;
        out["projectors"] = symbol_matrices_json(o.results, o.projectors);
    }
    return out;
}

}  // namespace

std::string save_machine(const MachineDocument& doc) {
    json j = json::object();
    j["kind"] = to_string(doc.kind);
    if (doc.name) j["name"] = *doc.name;
    if (doc.description) j["description"] = *doc.description;
    j["alphabet"] = doc.input_alphabet();
    if (doc.kind != MachineKind::dfa) j["backend"] = to_string(doc.backend());

    switch (doc.kind) {
        case MachineKind::blm: {
            const BilinearMachine& m = doc.blm();
            j["pi"] = row_json(m.pi);
            j["matrices"] = symbol_matrices_json(m.alphabet, m.transition);
            j["eta"] = col_json(m.eta);
            if (m.certified_real) j["real_valued"] = true;
            break;
        }
        case MachineKind::dfa: {
            j.update(dfa_payload_json(doc.dfa()));
            break;
        }
        case MachineKind::mo1qfa: {
            const Mo1Qfa& m = doc.mo();
            j["initial"] = row_json(m.pi);
            j["unitaries"] = symbol_matrices_json(m.alphabet, m.unitaries);
            j["observable"] = observable_json(m.observable, doc.kind);
            if (m.allow_nonunitary) j["allow_nonunitary"] = true;
            break;
        }
        case MachineKind::mm1qfa: {
            const Mm1Qfa& m = doc.mm();
            j["initial"] = row_json(m.pi);
            j["unitaries"] = symbol_matrices_json(m.working_alphabet(), m.unitaries);
            j["observable"] = observable_json(m.observable, doc.kind);
            break;
        }
        case MachineKind::cl1qfa: {
            const Cl1Qfa& m = doc.cl();
            j["initial"] = row_json(m.pi);
            j["unitaries"] = symbol_matrices_json(m.working_alphabet(), m.unitaries);
            j["observable"] = observable_json(m.observable, doc.kind);
            json control = json::object();
            if (m.control_regex)
                control["regex"] = *m.control_regex;
            else
                control["dfa"] = dfa_payload_json(m.control);
            j["control"] = std::move(control);
            break;
        }
    }
    return j.dump(2) + "\n";
}

void save_machine_file(const MachineDocument& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << save_machine(doc);
}

json verdict_to_json(const EquivalenceVerdict& v) {
    json j = json::object();
    j["equivalent"] = v.equivalent;
    j["bound_used"] = v.bound_used;
    j["basis_dimension"] = v.basis_dimension;
    j["tolerance"] = v.tolerance;
    if (!v.equivalent) {
        j["witness"] = v.witness;
        j["f1"] = v.f1.str();
        j["f2"] = v.f2.str();
    }
    return j;
}

Word parse_word_text(const std::string& text, const std::vector<std::string>& alphabet) {
    Word w;
    if (text.empty()) return w;
    auto require_symbol = [&](const std::string& sym) {
        if (std::find(alphabet.begin(), alphabet.end(), sym) == alphabet.end())
            throw Error("symbol '" + sym + "' is not in the machine's input alphabet");
        w.push_back(sym);
    };
    if (text.find(',') != std::string::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t comma = text.find(',', start);
            std::string part = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
            if (part.empty()) throw Error("empty symbol in comma-separated word");
            require_symbol(part);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return w;
    }
    if (std::any_of(alphabet.begin(), alphabet.end(),
                    [](const std::string& s) { return s.size() != 1; }))
        throw Error("alphabet has multi-character symbols; separate word symbols with commas");
    for (char c : text) require_symbol(std::string(1, c));
    return w;
}

}  // namespace qfa
