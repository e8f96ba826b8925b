#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "twist/bytecode.hpp"
#include "twist/resolve.hpp"

namespace twist {

enum class CombinatorKind { Defined, DataTag, Builtin };

enum class BuiltinId {
  None,
  Add,
  Sub,
  Mul,
  Inc,
  Div,
  Mod,
  Less,
  LessEq,
  Equal,
  Print,
  Throw,
  Try,
  Par,
};

struct BuiltinSpec {
  const char* name;  // unqualified, lives in System
  BuiltinId id;
  int arity;
};

/// Host operations shipped in System.
const std::vector<BuiltinSpec>& builtin_catalog();
/// Data tags shipped in System.
const std::vector<const char*>& system_data_tags();
/// All System symbols, for the resolver.
std::vector<Symbol> system_symbols();

struct Combinator {
  std::string name;     // qualified
  std::string display;  // short name when unambiguous in the program
  CombinatorKind kind = CombinatorKind::Defined;
  std::vector<ClauseProgram> clauses;
  BuiltinId builtin = BuiltinId::None;
  int builtin_arity = 0;
  NodePtr ref;  // the one CombinatorNode naming this combinator

  /// Smallest clause arity (the builtin arity for builtins).
  int min_arity() const;
  /// A definition with a zero-arity clause: a bare reference is a redex.
  bool is_constant_definition() const;
};

/// The compiled combinator table of a whole script.
class Program {
 public:
  Program() = default;
  Program(const Program&) = delete;
  Program& operator=(const Program&) = delete;
  Program(Program&&) = default;
  Program& operator=(Program&&) = default;

  Combinator& add(const std::string& name, CombinatorKind kind);
  const Combinator* find(std::string_view name) const;
  Combinator* find(std::string_view name);
  const Combinator& at(std::string_view name) const;
  const std::vector<std::unique_ptr<Combinator>>& combinators() const {
    return table_;
  }
  /// Recomputes display names after the table changed.
  void assign_display_names();

  /// The program after lambda lifting; bodies of `main` and friends are
  /// wired from here.
  ResolvedProgram lifted;

 private:
  std::vector<std::unique_ptr<Combinator>> table_;
  std::unordered_map<std::string, Combinator*> index_;
};

}  // namespace twist
