#pragma once

#include <optional>
#include <string>
#include <variant>

#include "json.hpp"
#include "qfa/equivalence.hpp"
#include "qfa/qfa_models.hpp"

namespace qfa {

enum class MachineKind { blm, dfa, mo1qfa, mm1qfa, cl1qfa };
const char* to_string(MachineKind k);

// A machine file: one of the five machine kinds plus optional metadata.
// Scalar entries are expression strings ("1/2", "1/sqrt(2)", "3/4+1/4*i").
// Without an explicit "backend" field a document loads exact when every
// entry stays rational and float otherwise.
struct MachineDocument {
    MachineKind kind = MachineKind::blm;
    std::optional<std::string> name;
    std::optional<std::string> description;
    std::variant<BilinearMachine, ClassicalDfa, Mo1Qfa, Mm1Qfa, Cl1Qfa> machine;

    const BilinearMachine& blm() const { return std::get<BilinearMachine>(machine); }
    const ClassicalDfa& dfa() const { return std::get<ClassicalDfa>(machine); }
    const Mo1Qfa& mo() const { return std::get<Mo1Qfa>(machine); }
    const Mm1Qfa& mm() const { return std::get<Mm1Qfa>(machine); }
    const Cl1Qfa& cl() const { return std::get<Cl1Qfa>(machine); }

    // The alphabet input words are written in (excludes the end marker).
    const std::vector<std::string>& input_alphabet() const;
    std::size_t state_count() const;
    Backend backend() const;  // dfa documents report exact

    MachineDocument to_float() const;
};

// Parses and fully validates; throws ParseError for malformed text and
// ValidationError listing every semantic violation.
MachineDocument parse_machine_json(const std::string& text, double tol = 1e-9);
MachineDocument load_machine(const std::string& path, double tol = 1e-9);

// Canonical serialization: sorted keys, normalized rationals, shortest
// round-tripping decimals, basis-aligned projectors written as partitions.
// save(load(x)) is byte-identical once x is canonical.
std::string save_machine(const MachineDocument& doc);
void save_machine_file(const MachineDocument& doc, const std::string& path);

nlohmann::json verdict_to_json(const EquivalenceVerdict& v);

// Splits CLI word text against an alphabet: with any comma present the text
// is comma-separated symbols; otherwise each character is one symbol (which
// requires a single-character alphabet). Empty text is the empty word.
Word parse_word_text(const std::string& text, const std::vector<std::string>& alphabet);

}  // namespace qfa
