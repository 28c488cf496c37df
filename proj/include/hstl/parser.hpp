#pragma once

#include <map>
#include <string>
#include <vector>

#include "hstl/formula.hpp"

namespace hstl {

/* Concrete syntax:
 *
 *   formula   := or_expr
 *   or_expr   := and_expr ( "|" and_expr )*
 *   and_expr  := unary ( "&" unary )*
 *   unary     := "!" unary | "G" bound unary | "F" bound unary
 *              | atom ( "U" bound unary )?
 *   bound     := "[" INT "," ( INT | "inf" ) ")"
 *   atom      := "(" formula ")" | predicate
 *   predicate := linexp ( "<" | ">" ) NUMBER
 *   linexp    := [ "-" ] term ( ("+"|"-") term )*
 *   term      := [ NUMBER "*" ] IDENT
 *
 * "G", "F", "U" and "inf" are reserved words. NUMBER accepts integers,
 * decimals ("0.5") and exact ratios ("7/2"). Chains of "&" and "|" fold
 * into right-nested binary nodes. Throws ParseError with the position of
 * the offending token.
 */
FormulaPtr parse_stl(const std::string& text, const std::vector<std::string>& variables);

// Replaces every whole-word occurrence of an alias name with its definition
// wrapped in parentheses, repeating until no alias remains. Throws
// ConfigError if expansion does not terminate (alias cycle).
std::string expand_aliases(const std::string& text,
                           const std::map<std::string, std::string>& aliases);

}  // namespace hstl
