#include "twist/lexer.hpp"

#include <array>
#include <cctype>

namespace twist {

namespace {

constexpr std::array kKeywords = {"import", "namespace", "using", "data",
                                  "def",    "try",       "catch"};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Tokens after which a '-' is a binary operator rather than a sign.
bool ends_operand(const Token& t) {
  switch (t.kind) {
    case TokenKind::UpperIdent:
    case TokenKind::LowerIdent:
    case TokenKind::Integer:
    case TokenKind::Text:
      return true;
    case TokenKind::Punctuation:
      return t.lexeme == ")" || t.lexeme == "]";
    default:
      return false;
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      if (at_end()) break;
      out.push_back(next(out.empty() ? nullptr : &out.back()));
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }

  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  void skip_blank() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, std::size_t start, Position pos) const {
    return Token{kind, std::string(src_.substr(start, i_ - start)), pos, start};
  }

  Token next(const Token* previous) {
    const std::size_t start = i_;
    const Position pos = pos_;
    const char c = peek();

    if (is_ident_start(c)) {
      while (!at_end() && is_ident_char(peek())) advance();
      std::string_view word = src_.substr(start, i_ - start);
      if (is_keyword(word)) return make(TokenKind::Keyword, start, pos);
      bool upper = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      return make(upper ? TokenKind::UpperIdent : TokenKind::LowerIdent, start,
                  pos);
    }

    bool signed_literal = c == '-' && is_digit(peek(1)) &&
                          (previous == nullptr || !ends_operand(*previous));
    if (is_digit(c) || signed_literal) {
      advance();
      while (!at_end() && is_digit(peek())) advance();
      if (!at_end() && is_ident_start(peek())) {
        throw CompileError("malformed integer literal", pos);
      }
      return make(TokenKind::Integer, start, pos);
    }

    if (c == '"') {
      advance();
      while (true) {
        if (at_end() || peek() == '\n') {
          throw CompileError("unterminated text literal", pos);
        }
        if (peek() == '\\') {
          advance();
          if (at_end()) throw CompileError("unterminated text literal", pos);
          char e = peek();
          if (e != 'n' && e != 't' && e != '"' && e != '\\') {
            throw CompileError(std::string("unknown escape \\") + e, pos_);
          }
          advance();
          continue;
        }
        if (peek() == '"') {
          advance();
          break;
        }
        advance();
      }
      return make(TokenKind::Text, start, pos);
    }

    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',') {
      advance();
      return make(TokenKind::Punctuation, start, pos);
    }

    if (c == ':' && peek(1) == ':') {
      advance();
      advance();
      return make(TokenKind::Punctuation, start, pos);
    }

    if (is_operator_char(c)) {
      while (!at_end() && is_operator_char(peek())) advance();
      std::string_view op = src_.substr(start, i_ - start);
      bool punct = op == "->" || op == "|";
      return make(punct ? TokenKind::Punctuation : TokenKind::Operator, start,
                  pos);
    }

    std::string shown = std::isprint(static_cast<unsigned char>(c))
                            ? std::string(1, c)
                            : "\\x" + std::to_string(static_cast<unsigned char>(c));
    throw CompileError("illegal character '" + shown + "'", pos);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Position pos_;
};

}  // namespace

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::UpperIdent: return "upper-identifier";
    case TokenKind::LowerIdent: return "lower-identifier";
    case TokenKind::Operator: return "operator";
    case TokenKind::Integer: return "integer";
    case TokenKind::Text: return "text";
    case TokenKind::Punctuation: return "punctuation";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  for (const char* k : kKeywords) {
    if (word == k) return true;
  }
  return false;
}

bool is_operator_char(char c) {
  switch (c) {
    case '+': case '-': case '*': case '/': case '<': case '>': case '=':
    case '!': case '&': case '%': case '^': case '~': case '|': case '.':
    case '$': case '@': case '?':
      return true;
    default:
      return false;
  }
}

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

std::string decode_text(std::string_view lexeme) {
  std::string out;
  for (std::size_t i = 1; i + 1 < lexeme.size(); ++i) {
    char c = lexeme[i];
    if (c == '\\') {
      char e = lexeme[++i];
      out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
    } else {
      out += c;
    }
  }
  return out;
}

std::string encode_text(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace twist
