#include "twist/program.hpp"

#include <algorithm>

namespace twist {

const std::vector<BuiltinSpec>& builtin_catalog() {
  static const std::vector<BuiltinSpec> catalog = {
      {"+", BuiltinId::Add, 2},      {"-", BuiltinId::Sub, 2},
      {"*", BuiltinId::Mul, 2},      {"mul", BuiltinId::Mul, 2},
      {"inc", BuiltinId::Inc, 1},    {"div", BuiltinId::Div, 2},
      {"mod", BuiltinId::Mod, 2},    {"<", BuiltinId::Less, 2},
      {"<=", BuiltinId::LessEq, 2},  {"==", BuiltinId::Equal, 2},
      {"print", BuiltinId::Print, 1}, {"throw", BuiltinId::Throw, 1},
      {"try", BuiltinId::Try, 2},    {"par", BuiltinId::Par, 2},
  };
  return catalog;
}

const std::vector<const char*>& system_data_tags() {
  static const std::vector<const char*> tags = {"true", "false", "nop",
                                                "tuple"};
  return tags;
}

std::vector<Symbol> system_symbols() {
  std::vector<Symbol> out;
  for (const BuiltinSpec& b : builtin_catalog()) {
    out.push_back({qualify({kSystemNamespace}, b.name), SymbolKind::Builtin});
  }
  for (const char* tag : system_data_tags()) {
    out.push_back({qualify({kSystemNamespace}, tag), SymbolKind::Data});
  }
  return out;
}

int Combinator::min_arity() const {
  if (kind == CombinatorKind::Builtin) return builtin_arity;
  if (clauses.empty()) return 0;
  int m = clauses.front().arity;
  for (const ClauseProgram& c : clauses) m = std::min(m, c.arity);
  return m;
}

bool Combinator::is_constant_definition() const {
  return kind == CombinatorKind::Defined &&
         std::any_of(clauses.begin(), clauses.end(),
                     [](const ClauseProgram& c) { return c.arity == 0; });
}

Combinator& Program::add(const std::string& name, CombinatorKind kind) {
  auto c = std::make_unique<Combinator>();
  c->name = name;
  c->display = name;
  c->kind = kind;
  c->ref = std::make_shared<CombinatorNode>(c.get());
  Combinator& out = *c;
  index_[name] = c.get();
  table_.push_back(std::move(c));
  return out;
}

const Combinator* Program::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : it->second;
}

Combinator* Program::find(std::string_view name) {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : it->second;
}

const Combinator& Program::at(std::string_view name) const {
  const Combinator* c = find(name);
  if (!c) throw InternalFault("unknown combinator " + std::string(name));
  return *c;
}

void Program::assign_display_names() {
  std::unordered_map<std::string, int> uses;
  for (const auto& c : table_) ++uses[short_name(c->name)];
  for (const auto& c : table_) {
    std::string s = short_name(c->name);
    c->display = uses[s] == 1 ? s : c->name;
  }
}

}  // namespace twist
