#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qfa {

// Base class for every failure the library reports.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact and floating values were mixed in one operation.
struct BackendError : Error {
    using Error::Error;
};

// Shape violations: dimension mismatches, non-square or non-row inputs.
struct DimensionError : Error {
    using Error::Error;
};

// Syntax error in a scalar expression, regex, or document. `offset` is the
// byte position in the offending text.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& what, std::size_t off) : Error(what), offset(off) {}
};

// Semantic validation failure. `issues` lists every violated check, not just
// the first one.
struct ValidationError : Error {
    std::vector<std::string> issues;
    explicit ValidationError(std::vector<std::string> list)
        : Error(join(list)), issues(std::move(list)) {}

  private:
    static std::string join(const std::vector<std::string>& list) {
        std::string msg = "validation failed:";
        for (const auto& s : list) {
            msg += "\n  - ";
            msg += s;
        }
        return msg;
    }
};

// An enumeration or construction exceeded its configured cap.
struct CapExceeded : Error {
    using Error::Error;
};

// A NotEquivalent witness failed re-verification against the original
// model's simulator. Signals tolerance trouble; never silently dropped.
struct WitnessVerificationError : Error {
    using Error::Error;
};

}  // namespace qfa
