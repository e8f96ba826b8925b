#include <algorithm>
#include <set>

#include "twist/compiler.hpp"

namespace twist {

namespace {

void collect_bound(const TermPattern& p, std::set<int>& out) {
  if (p.kind == TermPattern::Kind::Var) out.insert(p.var);
  for (const TermPattern& sub : p.items) collect_bound(sub, out);
}

void collect_refs(const Term& t, std::vector<std::pair<int, std::string>>& out,
                  std::set<int>& seen) {
  if (t.kind == Term::Kind::Var && seen.insert(t.var).second) {
    out.emplace_back(t.var, t.name);
  }
  for (const Term& sub : t.items) collect_refs(sub, out, seen);
  for (const TermClause& c : t.clauses) collect_refs(c.body, out, seen);
}

// Variables a lambda uses but does not bind, in order of first use.
std::vector<std::pair<int, std::string>> free_variables(
    const std::vector<TermClause>& clauses) {
  std::vector<std::pair<int, std::string>> out;
  std::set<int> taken;
  for (const TermClause& c : clauses) {
    std::set<int> bound;
    for (const TermPattern& p : c.patterns) collect_bound(p, bound);
    std::vector<std::pair<int, std::string>> refs;
    std::set<int> seen;
    collect_refs(c.body, refs, seen);
    for (auto& r : refs) {
      if (!bound.count(r.first) && taken.insert(r.first).second) {
        out.push_back(r);
      }
    }
  }
  return out;
}

class DefLifter {
 public:
  explicit DefLifter(const ResolvedDef& parent) : parent_(parent) {}

  Term top(const Term& body) {
    if (body.kind != Term::Kind::Lambda) return lift(body);
    std::vector<TermClause> clauses;
    for (const TermClause& c : body.clauses) {
      clauses.push_back({c.patterns, lift(c.body)});
    }
    return Term::lambda(std::move(clauses));
  }

  std::vector<ResolvedDef> take_lifts() {
    std::sort(lifts_.begin(), lifts_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<ResolvedDef> out;
    for (auto& [k, def] : lifts_) out.push_back(std::move(def));
    return out;
  }

 private:
  Term lift(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Var:
      case Term::Kind::Const:
      case Term::Kind::Int:
      case Term::Kind::Text:
        return t;
      case Term::Kind::Apply: {
        Term head = lift(t.items[0]);
        std::vector<Term> args;
        for (std::size_t i = 1; i < t.items.size(); ++i) {
          args.push_back(lift(t.items[i]));
        }
        return Term::apply(std::move(head), std::move(args));
      }
      case Term::Kind::Try: {
        TermClause delayed;
        delayed.patterns.push_back({});  // wildcard, applied to nop
        delayed.body = t.items[0];
        Term body = lift(Term::lambda({std::move(delayed)}));
        Term handler = lift(t.items[1]);
        std::vector<Term> args;
        args.push_back(std::move(handler));
        args.push_back(std::move(body));
        return Term::apply(Term::constant(qualify({kSystemNamespace}, "try")),
                           std::move(args));
      }
      case Term::Kind::Lambda:
        return lift_lambda(t);
    }
    return t;
  }

  Term lift_lambda(const Term& t) {
    const int k = counter_++;
    std::string name = parent_.name + "/lift" + std::to_string(k);
    std::vector<TermClause> clauses;
    for (const TermClause& c : t.clauses) {
      clauses.push_back({c.patterns, lift(c.body)});
    }
    auto captured = free_variables(clauses);
    for (TermClause& c : clauses) {
      std::vector<TermPattern> patterns;
      for (const auto& [id, var_name] : captured) {
        TermPattern p;
        p.kind = TermPattern::Kind::Var;
        p.var = id;
        p.name = var_name;
        patterns.push_back(std::move(p));
      }
      patterns.insert(patterns.end(), c.patterns.begin(), c.patterns.end());
      c.patterns = std::move(patterns);
    }
    ResolvedDef def;
    def.name = name;
    def.body = Term::lambda(std::move(clauses));
    def.file = parent_.file;
    def.pos = parent_.pos;
    lifts_.emplace_back(k, std::move(def));

    std::vector<Term> args;
    for (const auto& [id, var_name] : captured) {
      args.push_back(Term::var_ref(id, var_name));
    }
    return Term::apply(Term::constant(name), std::move(args));
  }

  const ResolvedDef& parent_;
  int counter_ = 0;
  std::vector<std::pair<int, ResolvedDef>> lifts_;
};

}  // namespace

ResolvedProgram lift_lambdas(const ResolvedProgram& program) {
  ResolvedProgram out;
  out.var_count = program.var_count;
  std::unordered_map<std::string, std::vector<std::string>> lifted_names;
  for (const ResolvedDef& def : program.defs) {
    DefLifter lifter(def);
    ResolvedDef top = def;
    top.body = lifter.top(def.body);
    out.defs.push_back(std::move(top));
    for (ResolvedDef& lifted : lifter.take_lifts()) {
      lifted_names[def.name].push_back(lifted.name);
      out.defs.push_back(std::move(lifted));
    }
  }
  for (const Symbol& s : program.symbols) {
    out.symbols.push_back(s);
    auto it = lifted_names.find(s.name);
    if (it == lifted_names.end()) continue;
    for (const std::string& name : it->second) {
      out.symbols.push_back({name, SymbolKind::Def});
    }
  }
  return out;
}

std::vector<TermClause> definition_clauses(const Term& body) {
  if (body.kind == Term::Kind::Lambda) return body.clauses;
  return {TermClause{{}, body}};
}

}  // namespace twist
