#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfa/matrix.hpp"

namespace qfa {

// An input word: a sequence of alphabet symbols. Symbols are strings so
// multi-character names are possible (measurement results, for example).
using Word = std::vector<std::string>;

std::string word_to_display(const Word& w);

// (pi, {M(sigma)}, eta) over an ordered alphabet. pi is 1×n, eta is n×1 and
// every transition matrix is n×n on one shared backend. The word function is
// f(w) = pi · M(w_1) · ... · M(w_k) · eta, with f(ε) = pi · eta.
struct BilinearMachine {
    std::vector<std::string> alphabet;
    Matrix pi;
    std::vector<Matrix> transition;  // parallel to alphabet
    Matrix eta;
    // Set by constructions whose outputs are provably real-valued on every
    // word (quantum reductions, realification). classify() trusts this flag;
    // it is not derivable from the entries alone.
    bool certified_real = false;

    std::size_t state_count() const { return pi.cols(); }
    Backend backend() const { return pi.backend(); }

    std::optional<std::size_t> symbol_index(std::string_view symbol) const;
    const Matrix& matrix_for(std::string_view symbol) const;  // throws on unknown symbol

    // Shape, backend and alphabet-coverage invariants; throws ValidationError.
    void check_well_formed() const;

    BilinearMachine to_float() const;
};

Scalar word_function(const BilinearMachine& m, const Word& w);

// Most-specific class along the inclusion chain dfa ⊂ pa ⊂ ga ⊂ rblm ⊂ blm.
enum class MachineClass { dfa, pa, ga, rblm, blm };
const char* to_string(MachineClass c);

// Structural predicates behind classify(). tol bounds the float backend's
// entry deviations; the exact backend ignores it.
bool is_dfa_form(const BilinearMachine& m, double tol = 1e-9);
bool is_pa_form(const BilinearMachine& m, double tol = 1e-9);
bool is_ga_form(const BilinearMachine& m);

// Real-valuedness over all words (rblm) is not decidable by inspection, so it
// is recognized only structurally: all-real machines and machines carrying
// the certified_real flag. Everything else complex-entried reports blm.
MachineClass classify(const BilinearMachine& m, double tol = 1e-9);

// Folds M(marker) into eta and drops the marker from the alphabet, so that
// f_out(w) = f_in(w · marker) with the same state count.
BilinearMachine strip_endmarker(const BilinearMachine& m, std::string_view marker);

// Embeds each complex entry a+bi as the 2×2 real block [[a, b], [-b, a]],
// giving a 2n-state all-real machine with the same word function. The caller
// asserts that f is real-valued on every word; for machines that do not
// satisfy this the output's word function is the real part only.
BilinearMachine to_real(const BilinearMachine& m);

}  // namespace qfa
