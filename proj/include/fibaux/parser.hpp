#ifndef FIBAUX_PARSER_HPP
#define FIBAUX_PARSER_HPP

#include "fibaux/reduction.hpp"

namespace fibaux {

// Small infix grammar: identifiers, rationals, + - * / ^, parentheses,
// function calls, derivative suffixes (u_t, u_xx, and (expr)_xx on groups).
// Unknown identifiers raise E_SYMBOL listing the declared names; syntax
// errors carry line/column.
Expr parse_expression(const std::string& text,
                      const std::vector<std::string>& extra_symbols = {});

// Parses "lhs = rhs" (or a bare lhs) into jet form; derivative suffixes are
// lowered through the total derivative on the jet alphabet.
PdeSpec parse_pde(const std::string& text);

// "name = expr" or a bare expression in x, t.
SimilarityTransform parse_transform(const std::string& text,
                                    const std::string& default_name = "xi");

} // namespace fibaux

#endif
