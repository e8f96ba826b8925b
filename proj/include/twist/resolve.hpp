#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "twist/ast.hpp"

namespace twist {

// Resolved terms: every constant is fully qualified, every variable carries a
// program-unique id, applications are flattened to head + arguments.

struct TermPattern {
  enum class Kind { Var, Wildcard, Int, Text, Tag, Compound };

  Kind kind = Kind::Wildcard;
  int var = -1;
  std::string name;  // Var: source name; Tag/Compound: qualified constant
  std::int64_t integer = 0;
  std::string text;
  std::vector<TermPattern> items;

  bool operator==(const TermPattern&) const = default;
};

struct TermClause;

struct Term {
  enum class Kind { Var, Const, Int, Text, Apply, Lambda, Try };

  Kind kind = Kind::Int;
  int var = -1;
  std::string name;  // Var: source name; Const: qualified name
  std::int64_t integer = 0;
  std::string text;
  std::vector<Term> items;  // Apply: head then arguments (>= 1); Try: body, handler
  std::vector<TermClause> clauses;

  static Term var_ref(int id, std::string name);
  static Term constant(std::string qualified);
  static Term int_lit(std::int64_t v);
  static Term text_lit(std::string v);
  static Term apply(Term head, std::vector<Term> args);
  static Term lambda(std::vector<TermClause> clauses);

  bool operator==(const Term& o) const;
};

struct TermClause {
  std::vector<TermPattern> patterns;
  Term body;

  bool operator==(const TermClause&) const = default;
};

enum class SymbolKind { Data, Def, Builtin };

struct Symbol {
  std::string name;
  SymbolKind kind;

  bool operator==(const Symbol&) const = default;
};

struct ResolvedDef {
  std::string name;
  Term body;
  std::string file;
  Position pos;

  bool operator==(const ResolvedDef& o) const {
    return name == o.name && body == o.body;
  }
};

/// The global declaration table: predeclared symbols first, then data tags
/// and definitions in source order.
struct ResolvedProgram {
  std::vector<Symbol> symbols;
  std::vector<ResolvedDef> defs;
  int var_count = 0;

  const Symbol* find(const std::string& qualified) const;
  const ResolvedDef* find_def(const std::string& qualified) const;

  bool operator==(const ResolvedProgram& o) const {
    return symbols == o.symbols && defs == o.defs && var_count == o.var_count;
  }
};

/// Namespace holding the builtins; visible everywhere without `using`.
inline constexpr const char* kSystemNamespace = "System";

ResolvedProgram resolve(std::span<const SurfaceModule> modules,
                        std::span<const Symbol> predeclared);

/// Loads a script and, transitively and at most once each, everything it
/// imports. Modules are returned dependencies first. An import is searched
/// relative to the importing file, then in each include directory.
std::vector<SurfaceModule> load_modules(
    const std::filesystem::path& file,
    std::span<const std::filesystem::path> include_dirs);

/// Same, for in-memory source; imports resolve against `base_dir`.
std::vector<SurfaceModule> load_source(
    std::string_view source, const std::string& name,
    const std::filesystem::path& base_dir,
    std::span<const std::filesystem::path> include_dirs);

std::string qualify(const std::vector<std::string>& ns, const std::string& name);
std::string short_name(const std::string& qualified);

}  // namespace twist
