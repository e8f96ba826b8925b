#include <map>
#include <optional>
#include <set>

#include "twist/compiler.hpp"

namespace twist {

namespace {

class ClauseCompiler {
 public:
  ClauseCompiler(const TermClause& clause, const Program& program)
      : clause_(clause), program_(program) {}

  ClauseProgram run() {
    out_.arity = static_cast<int>(clause_.patterns.size());
    for (int i = 0; i < out_.arity; ++i) {
      int r = fresh();
      out_.match.push_back(BindArg{i, r});
      pattern(clause_.patterns[i], r);
    }
    Operand body = term(clause_.body);
    if (body.thunk) {
      out_.build.push_back(ReturnChain{*first_thunk_, body.reg});
    } else {
      out_.build.push_back(ReturnValue{body.reg});
    }
    out_.registers = next_reg_;
    return std::move(out_);
  }

 private:
  struct Operand {
    int reg;
    bool thunk;
  };

  int fresh() { return next_reg_++; }

  const Combinator& lookup(const std::string& name) const {
    const Combinator* c = program_.find(name);
    if (!c) throw CompileError("unknown combinator " + name);
    return *c;
  }

  static NodePtr literal(const TermPattern& p) {
    return p.kind == TermPattern::Kind::Int ? make_int(p.integer)
                                            : make_text(p.text);
  }

  void pattern(const TermPattern& p, int reg) {
    switch (p.kind) {
      case TermPattern::Kind::Wildcard:
        return;
      case TermPattern::Kind::Var:
        if (!vars_.emplace(p.var, reg).second) {
          throw CompileError("duplicate pattern variable " + p.name);
        }
        return;
      case TermPattern::Kind::Int:
      case TermPattern::Kind::Text:
        out_.match.push_back(TestLiteral{reg, literal(p)});
        return;
      case TermPattern::Kind::Tag:
        out_.match.push_back(TestTag{reg, &lookup(p.name), 0});
        return;
      case TermPattern::Kind::Compound: {
        const int n = static_cast<int>(p.items.size());
        out_.match.push_back(TestTag{reg, &lookup(p.name), n});
        std::vector<int> fields;
        for (int j = 0; j < n; ++j) {
          int r = fresh();
          out_.match.push_back(Project{reg, j, r});
          fields.push_back(r);
        }
        for (int j = 0; j < n; ++j) pattern(p.items[j], fields[j]);
        return;
      }
    }
  }

  int load(NodePtr value) {
    int r = fresh();
    out_.build.push_back(LoadConst{std::move(value), r});
    return r;
  }

  Operand make_thunk(int head, std::vector<int> args) {
    int r = fresh();
    out_.build.push_back(MakeThunk{head, std::move(args), r});
    if (!first_thunk_) first_thunk_ = r;
    return {r, true};
  }

  // Emission order is post-order with arguments right to left, which is
  // exactly the order the resulting redexes must run in.
  Operand term(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Var: {
        auto it = vars_.find(t.var);
        if (it == vars_.end()) {
          throw CompileError("unbound variable " + t.name);
        }
        return {it->second, false};
      }
      case Term::Kind::Int:
        return {load(make_int(t.integer)), false};
      case Term::Kind::Text:
        return {load(make_text(t.text)), false};
      case Term::Kind::Const: {
        const Combinator& c = lookup(t.name);
        int r = load(c.ref);
        if (c.is_constant_definition()) return make_thunk(r, {});
        return {r, false};
      }
      case Term::Kind::Apply: {
        const std::size_t n = t.items.size() - 1;
        std::vector<Operand> args(n);
        for (std::size_t i = n; i-- > 0;) args[i] = term(t.items[i + 1]);
        const Term& head = t.items[0];
        Operand h{};
        const Combinator* head_comb = nullptr;
        if (head.kind == Term::Kind::Const) {
          head_comb = &lookup(head.name);
          h = {load(head_comb->ref), false};
        } else {
          h = term(head);
        }
        std::vector<int> regs;
        bool any_thunk = h.thunk;
        for (const Operand& a : args) {
          regs.push_back(a.reg);
          any_thunk = any_thunk || a.thunk;
        }
        if (head_comb && head_comb->kind == CombinatorKind::DataTag &&
            !any_thunk) {
          int r = fresh();
          out_.build.push_back(MakeCompound{h.reg, std::move(regs), r});
          return {r, false};
        }
        return make_thunk(h.reg, std::move(regs));
      }
      case Term::Kind::Lambda:
      case Term::Kind::Try:
        throw InternalFault("compile_clauses expects lifted terms");
    }
    return {};
  }

  const TermClause& clause_;
  const Program& program_;
  ClauseProgram out_;
  int next_reg_ = 0;
  std::map<int, int> vars_;
  std::optional<int> first_thunk_;
};

}  // namespace

std::vector<ClauseProgram> compile_clauses(std::span<const TermClause> clauses,
                                           const Program& program) {
  std::vector<ClauseProgram> out;
  for (const TermClause& c : clauses) {
    out.push_back(ClauseCompiler(c, program).run());
  }
  return out;
}

Program compile_program(const ResolvedProgram& resolved) {
  Program program;
  program.lifted = lift_lambdas(resolved);
  const ResolvedProgram& lifted = program.lifted;

  std::map<std::string, const BuiltinSpec*> builtins;
  for (const BuiltinSpec& b : builtin_catalog()) {
    builtins[qualify({kSystemNamespace}, b.name)] = &b;
  }
  for (const Symbol& s : lifted.symbols) {
    switch (s.kind) {
      case SymbolKind::Data:
        program.add(s.name, CombinatorKind::DataTag);
        break;
      case SymbolKind::Def:
        program.add(s.name, CombinatorKind::Defined);
        break;
      case SymbolKind::Builtin: {
        Combinator& c = program.add(s.name, CombinatorKind::Builtin);
        auto it = builtins.find(s.name);
        if (it == builtins.end()) {
          throw InternalFault("no host operation for " + s.name);
        }
        c.builtin = it->second->id;
        c.builtin_arity = it->second->arity;
        break;
      }
    }
  }

  // Clause arities first: whether a bare reference is a redex depends on
  // them, for every definition, before any body is compiled.
  for (const ResolvedDef& def : lifted.defs) {
    Combinator& c = *program.find(def.name);
    for (const TermClause& tc : definition_clauses(def.body)) {
      ClauseProgram shell;
      shell.arity = static_cast<int>(tc.patterns.size());
      c.clauses.push_back(std::move(shell));
    }
  }
  for (const ResolvedDef& def : lifted.defs) {
    auto clauses = definition_clauses(def.body);
    try {
      program.find(def.name)->clauses = compile_clauses(clauses, program);
    } catch (const CompileError& e) {
      throw CompileError(e.message() + " in " + def.name, def.pos, def.file);
    }
  }
  program.assign_display_names();
  return program;
}

std::vector<std::string> verify(const ClauseProgram& program) {
  std::vector<std::string> problems;
  std::vector<bool> written(program.registers, false);
  std::map<int, int> tag_arity;
  std::set<int> thunks;
  std::set<int> consumed;

  auto check_reg = [&](int r, const char* what) {
    if (r < 0 || r >= program.registers) {
      problems.push_back(std::string(what) + ": register r" +
                         std::to_string(r) + " out of range");
      return false;
    }
    return true;
  };
  auto read = [&](int r, const char* what) {
    if (check_reg(r, what) && !written[r]) {
      problems.push_back(std::string(what) + ": r" + std::to_string(r) +
                         " read before written");
    }
  };
  auto write = [&](int r, const char* what) {
    if (!check_reg(r, what)) return;
    if (written[r]) {
      problems.push_back(std::string(what) + ": r" + std::to_string(r) +
                         " written twice");
    }
    written[r] = true;
  };

  for (const MatchInstr& m : program.match) {
    std::visit(
        [&](const auto& in) {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, BindArg>) {
            if (in.arg < 0 || in.arg >= program.arity) {
              problems.push_back("bind_arg: argument " +
                                 std::to_string(in.arg) + " beyond arity");
            }
            write(in.reg, "bind_arg");
          } else if constexpr (std::is_same_v<T, TestLiteral>) {
            read(in.reg, "test_literal");
            if (!in.literal || (in.literal->kind() != NodeKind::Int &&
                                in.literal->kind() != NodeKind::Text)) {
              problems.push_back("test_literal: not a literal");
            }
          } else if constexpr (std::is_same_v<T, TestTag>) {
            read(in.reg, "test_tag");
            if (!in.tag) problems.push_back("test_tag: missing tag");
            tag_arity[in.reg] = in.arity;
          } else if constexpr (std::is_same_v<T, Project>) {
            read(in.reg, "project");
            auto it = tag_arity.find(in.reg);
            if (it == tag_arity.end() || in.field < 0 ||
                in.field >= it->second) {
              problems.push_back("project: field " + std::to_string(in.field) +
                                 " of r" + std::to_string(in.reg) +
                                 " not guarded by a tag test");
            }
            write(in.dest, "project");
          }
        },
        m);
  }

  std::optional<int> first_thunk;
  std::optional<int> last_thunk;
  int returns = 0;
  for (std::size_t i = 0; i < program.build.size(); ++i) {
    const BuildInstr& b = program.build[i];
    if (returns) problems.push_back("instruction after return");
    std::visit(
        [&](const auto& in) {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, LoadConst>) {
            if (!in.value || !in.value->is_value()) {
              problems.push_back("load_const: not a value");
            }
            write(in.reg, "load_const");
          } else if constexpr (std::is_same_v<T, MakeCompound>) {
            read(in.head, "make_compound");
            if (in.args.empty()) problems.push_back("make_compound: no arguments");
            for (int a : in.args) {
              read(a, "make_compound");
              if (thunks.count(a)) {
                problems.push_back("make_compound: argument r" +
                                   std::to_string(a) + " is a thunk");
              }
            }
            if (thunks.count(in.head)) {
              problems.push_back("make_compound: head is a thunk");
            }
            write(in.dest, "make_compound");
          } else if constexpr (std::is_same_v<T, MakeThunk>) {
            auto use = [&](int r) {
              read(r, "make_thunk");
              if (thunks.count(r) && !consumed.insert(r).second) {
                problems.push_back("make_thunk: thunk r" + std::to_string(r) +
                                   " used twice");
              }
            };
            use(in.head);
            for (int a : in.args) use(a);
            write(in.dest, "make_thunk");
            thunks.insert(in.dest);
            if (!first_thunk) first_thunk = in.dest;
            last_thunk = in.dest;
          } else if constexpr (std::is_same_v<T, ReturnValue>) {
            ++returns;
            read(in.reg, "return_value");
            if (thunks.count(in.reg)) {
              problems.push_back("return_value: r" + std::to_string(in.reg) +
                                 " is a thunk");
            }
            if (!thunks.empty()) {
              problems.push_back("return_value: body built thunks");
            }
          } else if constexpr (std::is_same_v<T, ReturnChain>) {
            ++returns;
            read(in.first, "return_chain");
            read(in.last, "return_chain");
            if (in.first != first_thunk || in.last != last_thunk) {
              problems.push_back("return_chain: must name the first and last "
                                 "thunk built");
            }
            consumed.insert(in.last);
          }
        },
        b);
  }
  if (returns != 1) {
    problems.push_back("expected exactly one return, found " +
                       std::to_string(returns));
  }
  for (int t : thunks) {
    if (!consumed.count(t)) {
      problems.push_back("thunk r" + std::to_string(t) + " is never consumed");
    }
  }
  return problems;
}

}  // namespace twist
