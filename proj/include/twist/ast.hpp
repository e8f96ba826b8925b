#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twist/error.hpp"

namespace twist {

// Surface syntax as written in a script. Equality ignores source positions.

struct Pattern {
  enum class Kind { Var, Int, Text, Tag, Compound };

  Kind kind = Kind::Var;
  std::string name;  // Var: variable name (`_` is the wildcard); Tag/Compound: constant as written
  std::int64_t integer = 0;
  std::string text;
  std::vector<Pattern> items;  // Compound arguments, never empty
  Position pos;

  static Pattern var(std::string name) { return {Kind::Var, std::move(name)}; }
  static Pattern tag(std::string name) { return {Kind::Tag, std::move(name)}; }
  static Pattern int_lit(std::int64_t v) { return {Kind::Int, {}, v}; }
  static Pattern compound(std::string head, std::vector<Pattern> items) {
    return {Kind::Compound, std::move(head), 0, {}, std::move(items)};
  }

  bool operator==(const Pattern& o) const;
};

struct Clause;

struct Expr {
  enum class Kind {
    Variable,
    Constant,
    Int,
    Text,
    Apply,        // items = {function, argument}
    Abstraction,  // clauses
    BinaryOp,     // name = operator symbol, items = {left, right}
    Try,          // items = {body, handler}
  };

  Kind kind = Kind::Int;
  std::string name;
  std::int64_t integer = 0;
  std::string text;
  std::vector<Expr> items;
  std::vector<Clause> clauses;
  Position pos;

  static Expr variable(std::string name);
  static Expr constant(std::string name);
  static Expr int_lit(std::int64_t v);
  static Expr text_lit(std::string v);
  static Expr apply(Expr fn, Expr arg);
  static Expr binary(std::string op, Expr lhs, Expr rhs);
  static Expr abstraction(std::vector<Clause> clauses);
  static Expr try_catch(Expr body, Expr handler);

  bool operator==(const Expr& o) const;
};

struct Clause {
  std::vector<Pattern> patterns;
  Expr body;
  Position pos;

  bool operator==(const Clause& o) const {
    return patterns == o.patterns && body == o.body;
  }
};

struct Decl {
  enum class Kind { Data, Def, Using };

  Kind kind = Kind::Def;
  std::vector<std::string> ns;     // enclosing namespace path, empty at top level
  std::vector<std::string> names;  // Data: tag names; Using: namespace path
  std::string name;                // Def
  Expr body;                       // Def
  Position pos;

  bool operator==(const Decl& o) const {
    return kind == o.kind && ns == o.ns && names == o.names &&
           name == o.name && body == o.body;
  }
};

struct Import {
  std::string path;
  Position pos;

  bool operator==(const Import& o) const { return path == o.path; }
};

struct SurfaceModule {
  std::string file;  // source file name, empty for in-memory text
  std::vector<Import> imports;
  std::vector<Decl> decls;

  bool operator==(const SurfaceModule& o) const {
    return imports == o.imports && decls == o.decls;
  }
};

}  // namespace twist
