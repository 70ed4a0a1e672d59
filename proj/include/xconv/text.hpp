#pragma once

#include <string>
#include <string_view>

#include "xconv/explanation.hpp"
#include "xconv/formula.hpp"
#include "xconv/syntax.hpp"

namespace xconv {

// ASCII grammar
//
//   prop     := unary ('->' prop)?            right associative
//   unary    := atom | 'false' | '~' unary | '(' prop ')'
//   formula  := funary ('->' formula)?
//   funary   := 'B1' funary | 'B2' funary | 'T1' unary | 'T2' unary
//             | '[' term ']' ('1'|'2') unary | '~' funary | atom | 'false'
//             | '(' formula ')'
//   term     := tprimary ('.' tprimary)*      left associative
//   tprimary := ident | 'x{' prop ('|' prop (',' prop)*)? '}' | '(' term ')'
//   expl     := item ('/' prop)*
//   item     := '[' expl (',' expl)+ ']' | prop
//
// Atoms match [a-z][a-zA-Z0-9_]*; `false` is reserved. Bit trees use the
// explanation grammar with 0 and 1 in place of formulas: "1/0/0".

PropFormula parse_prop(std::string_view src);
Formula parse_formula(std::string_view src);
Term parse_term(std::string_view src);
Explanation parse_explanation(std::string_view src);
BitTree parse_bits(std::string_view src);

std::string print(const PropFormula& f);
std::string print(const Term& t);
/// Dynamic operators print as "[2: expl] body" / "[1: bits on expl] body";
/// those forms are for display and are not accepted by parse_formula.
std::string print(const Formula& f);
std::string print(const Explanation& e);
std::string print(const BitTree& b);

/// Human rendering with →, ⊥, □, ⟦t⟧, △ and ·.
std::string pretty(const PropFormula& f);
std::string pretty(const Term& t);
std::string pretty(const Formula& f);
std::string pretty(const Explanation& e);

}  // namespace xconv
