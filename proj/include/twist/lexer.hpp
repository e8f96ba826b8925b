#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "twist/error.hpp"

namespace twist {

enum class TokenKind {
  Keyword,
  UpperIdent,
  LowerIdent,
  Operator,
  Integer,
  Text,
  Punctuation,
};

const char* to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string lexeme;  // exact slice of the source
  Position pos;
  std::size_t offset = 0;

  bool is(TokenKind k, std::string_view text) const {
    return kind == k && lexeme == text;
  }
  bool is_punct(std::string_view text) const {
    return is(TokenKind::Punctuation, text);
  }
  bool is_keyword(std::string_view text) const {
    return is(TokenKind::Keyword, text);
  }
};

/// Splits a script into tokens. Whitespace and `#` line comments are skipped.
/// Throws CompileError on an illegal character or an unterminated text.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);
bool is_operator_char(char c);

/// Decodes the escapes of a text literal lexeme (quotes included).
std::string decode_text(std::string_view lexeme);
std::string encode_text(std::string_view text);

}  // namespace twist
