#pragma once

#include <string_view>

#include "qfa/scalar.hpp"

namespace qfa {

// Evaluates a scalar expression. Grammar (whitespace insignificant):
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := ('-'|'+') unary | primary
//   primary := number | 'i' | 'sqrt' '(' expr ')' | '(' expr ')'
//   number  := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
//
// Purely rational expressions evaluate on the exact backend; a sqrt whose
// argument is not a perfect square of a rational forces the whole expression
// onto the float backend. sqrt of a negative or non-real value is an error.
Scalar parse_scalar(std::string_view text);

// Same grammar with the backend forced. Requesting `exact` for an expression
// that needs an irrational value is an error.
Scalar parse_scalar_as(std::string_view text, Backend b);

}  // namespace qfa
