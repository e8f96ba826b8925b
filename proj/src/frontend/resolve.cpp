#include "twist/resolve.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace twist {

Term Term::var_ref(int id, std::string name) {
  Term t;
  t.kind = Kind::Var;
  t.var = id;
  t.name = std::move(name);
  return t;
}

Term Term::constant(std::string qualified) {
  Term t;
  t.kind = Kind::Const;
  t.name = std::move(qualified);
  return t;
}

Term Term::int_lit(std::int64_t v) {
  Term t;
  t.kind = Kind::Int;
  t.integer = v;
  return t;
}

Term Term::text_lit(std::string v) {
  Term t;
  t.kind = Kind::Text;
  t.text = std::move(v);
  return t;
}

Term Term::apply(Term head, std::vector<Term> args) {
  if (args.empty()) return head;
  if (head.kind == Kind::Apply) {
    for (Term& a : args) head.items.push_back(std::move(a));
    return head;
  }
  Term t;
  t.kind = Kind::Apply;
  t.items.reserve(args.size() + 1);
  t.items.push_back(std::move(head));
  for (Term& a : args) t.items.push_back(std::move(a));
  return t;
}

Term Term::lambda(std::vector<TermClause> clauses) {
  Term t;
  t.kind = Kind::Lambda;
  t.clauses = std::move(clauses);
  return t;
}

bool Term::operator==(const Term& o) const {
  return kind == o.kind && var == o.var && name == o.name &&
         integer == o.integer && text == o.text && items == o.items &&
         clauses == o.clauses;
}

const Symbol* ResolvedProgram::find(const std::string& qualified) const {
  for (const Symbol& s : symbols) {
    if (s.name == qualified) return &s;
  }
  return nullptr;
}

const ResolvedDef* ResolvedProgram::find_def(const std::string& qualified) const {
  for (const ResolvedDef& d : defs) {
    if (d.name == qualified) return &d;
  }
  return nullptr;
}

std::string qualify(const std::vector<std::string>& ns, const std::string& name) {
  std::string out;
  for (const std::string& part : ns) {
    out += part;
    out += "::";
  }
  return out + name;
}

std::string short_name(const std::string& qualified) {
  // Operator names may themselves contain ':'-free symbols only, so the last
  // "::" always separates the namespace.
  auto sep = qualified.rfind("::");
  return sep == std::string::npos ? qualified : qualified.substr(sep + 2);
}

namespace {

struct UsingEntry {
  std::size_t module;
  std::vector<std::string> scope;  // namespace the using appears in
  std::string target;              // resolved namespace, qualified
};

bool is_prefix(const std::vector<std::string>& prefix,
               const std::vector<std::string>& path) {
  return prefix.size() <= path.size() &&
         std::equal(prefix.begin(), prefix.end(), path.begin());
}

class Resolver {
 public:
  Resolver(std::span<const SurfaceModule> modules,
           std::span<const Symbol> predeclared)
      : modules_(modules) {
    namespaces_.insert(kSystemNamespace);
    for (const Symbol& s : predeclared) add_symbol(s, {}, {});
  }

  ResolvedProgram run() {
    declare();
    bind_usings();
    for (std::size_t m = 0; m < modules_.size(); ++m) {
      const SurfaceModule& mod = modules_[m];
      for (const Decl& d : mod.decls) {
        if (d.kind != Decl::Kind::Def) continue;
        Scope scope{m, d.ns, {}};
        for (const UsingEntry& u : usings_) {
          if (u.module == m && is_prefix(u.scope, d.ns)) {
            scope.usings.push_back(u.target);
          }
        }
        scope.usings.push_back(kSystemNamespace);
        std::vector<std::pair<std::string, int>> env;
        ResolvedDef def;
        def.name = qualify(d.ns, d.name);
        def.file = mod.file;
        def.pos = d.pos;
        def.body = term(d.body, scope, env);
        out_.defs.push_back(std::move(def));
      }
    }
    if (const ResolvedDef* main = out_.find_def("main")) {
      if (main->body.kind == Term::Kind::Lambda) {
        throw CompileError("main must be a zero-argument definition",
                           main->pos, main->file);
      }
    }
    return std::move(out_);
  }

 private:
  struct Scope {
    std::size_t module;
    std::vector<std::string> ns;
    std::vector<std::string> usings;
  };

  [[noreturn]] void fail(const std::string& msg, Position pos,
                         std::size_t module) const {
    throw CompileError(msg, pos, modules_[module].file);
  }

  void add_symbol(const Symbol& s, Position pos, const std::string& file) {
    if (index_.count(s.name)) {
      throw CompileError("duplicate definition of " + s.name, pos, file);
    }
    index_[s.name] = out_.symbols.size();
    out_.symbols.push_back(s);
    auto sep = s.name.rfind("::");
    if (sep != std::string::npos) {
      std::string ns = s.name.substr(0, sep);
      while (true) {
        namespaces_.insert(ns);
        auto up = ns.rfind("::");
        if (up == std::string::npos) break;
        ns.resize(up);
      }
    }
  }

  void declare() {
    for (std::size_t m = 0; m < modules_.size(); ++m) {
      for (const Decl& d : modules_[m].decls) {
        for (std::size_t k = 1; k <= d.ns.size(); ++k) {
          namespaces_.insert(qualify({d.ns.begin(), d.ns.begin() + k - 1},
                                     d.ns[k - 1]));
        }
        if (d.kind == Decl::Kind::Data) {
          for (const std::string& tag : d.names) {
            add_symbol({qualify(d.ns, tag), SymbolKind::Data}, d.pos,
                       modules_[m].file);
          }
        } else if (d.kind == Decl::Kind::Def) {
          add_symbol({qualify(d.ns, d.name), SymbolKind::Def}, d.pos,
                     modules_[m].file);
        }
      }
    }
  }

  void bind_usings() {
    for (std::size_t m = 0; m < modules_.size(); ++m) {
      for (const Decl& d : modules_[m].decls) {
        if (d.kind != Decl::Kind::Using) continue;
        std::string written = qualify({d.names.begin(), d.names.end() - 1},
                                      d.names.back());
        std::string target;
        for (std::size_t k = d.ns.size() + 1; k-- > 0;) {
          std::string candidate =
              qualify({d.ns.begin(), d.ns.begin() + k}, written);
          if (namespaces_.count(candidate)) {
            target = candidate;
            break;
          }
        }
        if (target.empty()) fail("unknown namespace " + written, d.pos, m);
        usings_.push_back({m, d.ns, target});
      }
    }
  }

  std::string lookup(const std::string& written, const Scope& scope,
                     Position pos) const {
    for (std::size_t k = scope.ns.size() + 1; k-- > 0;) {
      std::string candidate =
          qualify({scope.ns.begin(), scope.ns.begin() + k}, written);
      if (index_.count(candidate)) return candidate;
    }
    std::set<std::string> found;
    for (const std::string& u : scope.usings) {
      std::string candidate = u + "::" + written;
      if (index_.count(candidate)) found.insert(candidate);
    }
    if (found.size() == 1) return *found.begin();
    if (found.empty()) fail("unresolved identifier " + written, pos, scope.module);
    std::string msg = "ambiguous identifier " + written + " (";
    bool first = true;
    for (const std::string& f : found) {
      msg += (first ? "" : ", ") + f;
      first = false;
    }
    fail(msg + ")", pos, scope.module);
  }

  using Env = std::vector<std::pair<std::string, int>>;

  TermPattern pattern(const Pattern& p, const Scope& scope, Env& env,
                      std::set<std::string>& bound) {
    TermPattern t;
    switch (p.kind) {
      case Pattern::Kind::Var:
        if (p.name == "_") {
          t.kind = TermPattern::Kind::Wildcard;
          return t;
        }
        if (!bound.insert(p.name).second) {
          fail("duplicate pattern variable " + p.name, p.pos, scope.module);
        }
        t.kind = TermPattern::Kind::Var;
        t.var = out_.var_count++;
        t.name = p.name;
        env.emplace_back(p.name, t.var);
        return t;
      case Pattern::Kind::Int:
        t.kind = TermPattern::Kind::Int;
        t.integer = p.integer;
        return t;
      case Pattern::Kind::Text:
        t.kind = TermPattern::Kind::Text;
        t.text = p.text;
        return t;
      case Pattern::Kind::Tag:
        t.kind = TermPattern::Kind::Tag;
        t.name = lookup(p.name, scope, p.pos);
        return t;
      case Pattern::Kind::Compound:
        t.kind = TermPattern::Kind::Compound;
        t.name = lookup(p.name, scope, p.pos);
        for (const Pattern& sub : p.items) {
          t.items.push_back(pattern(sub, scope, env, bound));
        }
        return t;
    }
    return t;
  }

  Term term(const Expr& e, const Scope& scope, Env& env) {
    switch (e.kind) {
      case Expr::Kind::Variable: {
        if (e.name == "_") {
          fail("'_' cannot be used as a value", e.pos, scope.module);
        }
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
          if (it->first == e.name) return Term::var_ref(it->second, e.name);
        }
        fail("unbound variable " + e.name, e.pos, scope.module);
      }
      case Expr::Kind::Constant:
        return Term::constant(lookup(e.name, scope, e.pos));
      case Expr::Kind::Int:
        return Term::int_lit(e.integer);
      case Expr::Kind::Text:
        return Term::text_lit(e.text);
      case Expr::Kind::Apply: {
        Term head = term(e.items[0], scope, env);
        std::vector<Term> args;
        args.push_back(term(e.items[1], scope, env));
        return Term::apply(std::move(head), std::move(args));
      }
      case Expr::Kind::BinaryOp: {
        Term op = Term::constant(lookup(e.name, scope, e.pos));
        std::vector<Term> args;
        args.push_back(term(e.items[0], scope, env));
        args.push_back(term(e.items[1], scope, env));
        return Term::apply(std::move(op), std::move(args));
      }
      case Expr::Kind::Abstraction: {
        std::vector<TermClause> clauses;
        for (const Clause& c : e.clauses) {
          std::size_t mark = env.size();
          std::set<std::string> bound;
          TermClause tc;
          for (const Pattern& p : c.patterns) {
            tc.patterns.push_back(pattern(p, scope, env, bound));
          }
          tc.body = term(c.body, scope, env);
          env.resize(mark);
          clauses.push_back(std::move(tc));
        }
        return Term::lambda(std::move(clauses));
      }
      case Expr::Kind::Try: {
        Term t;
        t.kind = Term::Kind::Try;
        t.items.push_back(term(e.items[0], scope, env));
        t.items.push_back(term(e.items[1], scope, env));
        return t;
      }
    }
    return {};
  }

  std::span<const SurfaceModule> modules_;
  ResolvedProgram out_;
  std::unordered_map<std::string, std::size_t> index_;
  std::set<std::string> namespaces_;
  std::vector<UsingEntry> usings_;
};

}  // namespace

ResolvedProgram resolve(std::span<const SurfaceModule> modules,
                        std::span<const Symbol> predeclared) {
  return Resolver(modules, predeclared).run();
}

}  // namespace twist
