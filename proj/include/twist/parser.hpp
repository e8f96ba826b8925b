#pragma once

#include <span>
#include <string>
#include <string_view>

#include "twist/ast.hpp"
#include "twist/lexer.hpp"

namespace twist {

SurfaceModule parse_module(std::span<const Token> tokens);
SurfaceModule parse_source(std::string_view source, std::string file = {});

/// Parses a single expression (used by the REPL). The whole token list must
/// be consumed.
Expr parse_expression(std::span<const Token> tokens);

/// Renders a module back to script text; parsing the result yields an
/// equal module.
std::string print_module(const SurfaceModule& module);
std::string print_expr(const Expr& expr);
std::string print_pattern(const Pattern& pattern);

}  // namespace twist
