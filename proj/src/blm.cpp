#include "qfa/blm.hpp"

#include <algorithm>

namespace qfa {

std::string word_to_display(const Word& w) {
    if (w.empty()) return "\xce\xb5";  // ε
    bool single = std::all_of(w.begin(), w.end(), [](const std::string& s) { return s.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i && !single) out += ",";
        out += w[i];
    }
    return out;
}

std::optional<std::size_t> BilinearMachine::symbol_index(std::string_view symbol) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == symbol) return i;
    return std::nullopt;
}

const Matrix& BilinearMachine::matrix_for(std::string_view symbol) const {
    auto idx = symbol_index(symbol);
    if (!idx) throw Error("unknown symbol '" + std::string(symbol) + "'");
    return transition[*idx];
}

void BilinearMachine::check_well_formed() const {
    std::vector<std::string> issues;
    const std::size_t n = state_count();
    if (pi.rows() != 1) issues.push_back("pi must be a 1xn row vector");
    if (eta.rows() != n || eta.cols() != 1)
        issues.push_back("eta must be an nx1 column vector matching pi");
    if (transition.size() != alphabet.size())
        issues.push_back("one transition matrix per alphabet symbol is required");
    for (std::size_t i = 0; i < transition.size() && i < alphabet.size(); ++i) {
        const Matrix& t = transition[i];
        if (t.rows() != n || t.cols() != n)
            issues.push_back("transition matrix for '" + alphabet[i] + "' is not " +
                             std::to_string(n) + "x" + std::to_string(n));
        if (t.backend() != backend())
            issues.push_back("transition matrix for '" + alphabet[i] +
                             "' is not on the machine backend");
    }
    if (eta.backend() != backend()) issues.push_back("eta is not on the machine backend");
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        for (std::size_t j = i + 1; j < alphabet.size(); ++j)
            if (alphabet[i] == alphabet[j]) issues.push_back("duplicate symbol '" + alphabet[i] + "'");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

BilinearMachine BilinearMachine::to_float() const {
    BilinearMachine out;
    out.alphabet = alphabet;
    out.pi = pi.to_float();
    out.transition.reserve(transition.size());
    for (const Matrix& t : transition) out.transition.push_back(t.to_float());
    out.eta = eta.to_float();
    out.certified_real = certified_real;
    return out;
}

Scalar word_function(const BilinearMachine& m, const Word& w) {
    Matrix v = m.pi;
    for (const auto& sym : w) v = mat_mul(v, m.matrix_for(sym));
    return mat_mul(v, m.eta).at(0, 0);
}

const char* to_string(MachineClass c) {
    switch (c) {
        case MachineClass::dfa: return "dfa";
        case MachineClass::pa: return "pa";
        case MachineClass::ga: return "ga";
        case MachineClass::rblm: return "rblm";
        case MachineClass::blm: return "blm";
    }
    return "blm";
}

namespace {

bool near(const Scalar& s, double target, double tol) {
    if (s.backend() == Backend::exact)
        return s.exact_value() == ExactComplex::from_int(static_cast<long>(target));
    FloatComplex v = s.float_value();
    return std::abs(v.real() - target) <= tol && std::abs(v.imag()) <= tol;
}

bool is_zero_one(const Scalar& s, double tol) {
    return near(s, 0.0, tol) || near(s, 1.0, tol);
}

// Nonnegative real entries summing to 1 across each row. Exact entries are
// checked exactly; float entries within tol.
bool rows_stochastic(const Matrix& m, double tol) {
    const bool exact = m.backend() == Backend::exact;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Scalar sum = Scalar::zero(m.backend());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Scalar v = m.at(i, j);
            if (exact) {
                if (!v.exact_value().is_real() || sgn(v.exact_value().re) < 0) return false;
            } else {
                if (std::abs(v.imag_double()) > tol || v.real_double() < -tol) return false;
            }
            sum = sum + v;
        }
        if (!near(sum, 1.0, tol)) return false;
    }
    return true;
}

bool entries_zero_one(const Matrix& m, double tol) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!is_zero_one(m.at(i, j), tol)) return false;
    return true;
}

}  // namespace

bool is_ga_form(const BilinearMachine& m) {
    if (!m.pi.all_entries_real() || !m.eta.all_entries_real()) return false;
    for (const Matrix& t : m.transition)
        if (!t.all_entries_real()) return false;
    return true;
}

bool is_pa_form(const BilinearMachine& m, double tol) {
    if (!is_ga_form(m)) return false;
    if (!rows_stochastic(m.pi, tol)) return false;
    for (const Matrix& t : m.transition)
        if (!rows_stochastic(t, tol)) return false;
    return entries_zero_one(m.eta, tol);
}

bool is_dfa_form(const BilinearMachine& m, double tol) {
    if (!is_pa_form(m, tol)) return false;
    if (!entries_zero_one(m.pi, tol)) return false;  // stochastic + 0/1 = degenerate
    for (const Matrix& t : m.transition)
        if (!entries_zero_one(t, tol)) return false;
    return true;
}

MachineClass classify(const BilinearMachine& m, double tol) {
    if (is_dfa_form(m, tol)) return MachineClass::dfa;
    if (is_pa_form(m, tol)) return MachineClass::pa;
    if (is_ga_form(m)) return MachineClass::ga;
    if (m.certified_real) return MachineClass::rblm;
    return MachineClass::blm;
}

BilinearMachine strip_endmarker(const BilinearMachine& m, std::string_view marker) {
    auto idx = m.symbol_index(marker);
    if (!idx) throw Error("end marker '" + std::string(marker) + "' is not in the alphabet");
    BilinearMachine out;
    out.pi = m.pi;
    out.eta = mat_mul(m.transition[*idx], m.eta);
    for (std::size_t i = 0; i < m.alphabet.size(); ++i) {
        if (i == *idx) continue;
        out.alphabet.push_back(m.alphabet[i]);
        out.transition.push_back(m.transition[i]);
    }
    out.certified_real = m.certified_real;
    return out;
}

namespace {

// a+bi -> [[a, b], [-b, a]] per entry; an r×c matrix becomes 2r×2c.
Matrix realify(const Matrix& m) {
    Matrix out = Matrix::zeros(m.backend(), 2 * m.rows(), 2 * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Scalar v = m.at(i, j);
            Scalar re, im;
            if (v.backend() == Backend::exact) {
                re = Scalar::exact(v.exact_value().re);
                im = Scalar::exact(v.exact_value().im);
            } else {
                re = Scalar::floating(v.float_value().real());
                im = Scalar::floating(v.float_value().imag());
            }
            out.set(2 * i, 2 * j, re);
            out.set(2 * i, 2 * j + 1, im);
            out.set(2 * i + 1, 2 * j, -im);
            out.set(2 * i + 1, 2 * j + 1, re);
        }
    return out;
}

}  // namespace

BilinearMachine to_real(const BilinearMachine& m) {
    BilinearMachine out;
    out.alphabet = m.alphabet;
    out.pi = realify(m.pi).row_slice(0);
    for (const Matrix& t : m.transition) out.transition.push_back(realify(t));
    out.eta = realify(m.eta).col_slice(0);
    out.certified_real = true;
    return out;
}

}  // namespace qfa
