#include "twist/engine.hpp"

#include <exception>
#include <thread>

namespace twist {

namespace {

bool matches_tag(const Node& v, const Combinator* tag, int arity) {
  if (arity == 0) {
    return v.kind() == NodeKind::Combinator &&
           static_cast<const CombinatorNode&>(v).combinator == tag;
  }
  if (v.kind() != NodeKind::Compound) return false;
  const auto& c = static_cast<const CompoundNode&>(v);
  return c.head->kind() == NodeKind::Combinator &&
         static_cast<const CombinatorNode&>(*c.head).combinator == tag &&
         c.args.size() == static_cast<std::size_t>(arity);
}

bool run_match(const ClauseProgram& clause, std::span<const NodePtr> args,
               std::vector<NodePtr>& regs) {
  regs.assign(clause.registers, nullptr);
  for (const MatchInstr& m : clause.match) {
    bool ok = std::visit(
        [&](const auto& in) {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, BindArg>) {
            regs[in.reg] = args[in.arg];
            return true;
          } else if constexpr (std::is_same_v<T, TestLiteral>) {
            return same_literal(*regs[in.reg], *in.literal);
          } else if constexpr (std::is_same_v<T, TestTag>) {
            return matches_tag(*regs[in.reg], in.tag, in.arity);
          } else {
            regs[in.dest] =
                static_cast<const CompoundNode&>(*regs[in.reg]).args[in.field];
            return true;
          }
        },
        m);
    if (!ok) return false;
  }
  return true;
}

// Structural equality of reduced values, without host recursion.
bool same_value(const Node& a, const Node& b) {
  std::vector<std::pair<const Node*, const Node*>> todo{{&a, &b}};
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    if (x == y) continue;
    if (x->kind() != y->kind()) return false;
    switch (x->kind()) {
      case NodeKind::Int:
      case NodeKind::Text:
        if (!same_literal(*x, *y)) return false;
        break;
      case NodeKind::Combinator:
        if (static_cast<const CombinatorNode*>(x)->combinator !=
            static_cast<const CombinatorNode*>(y)->combinator) {
          return false;
        }
        break;
      case NodeKind::Compound: {
        const auto& p = static_cast<const CompoundNode&>(*x);
        const auto& q = static_cast<const CompoundNode&>(*y);
        if (p.args.size() != q.args.size()) return false;
        todo.emplace_back(p.head.get(), q.head.get());
        for (std::size_t i = 0; i < p.args.size(); ++i) {
          todo.emplace_back(p.args[i].get(), q.args[i].get());
        }
        break;
      }
      default:
        return false;
    }
  }
  return true;
}

const std::int64_t* as_int(const NodePtr& n) {
  if (n->kind() != NodeKind::Int) return nullptr;
  return &static_cast<const IntNode&>(*n).value;
}

std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

MatchOutcome match_clauses(const Combinator& combinator,
                           std::span<const NodePtr> args) {
  MatchOutcome out;
  bool applicable = false;
  for (std::size_t i = 0; i < combinator.clauses.size(); ++i) {
    const ClauseProgram& clause = combinator.clauses[i];
    if (static_cast<std::size_t>(clause.arity) > args.size()) continue;
    applicable = true;
    if (run_match(clause, args, out.registers)) {
      out.kind = MatchKind::Matched;
      out.clause = i;
      return out;
    }
  }
  out.registers.clear();
  out.kind = applicable ? MatchKind::NoClause : MatchKind::TooFewArgs;
  return out;
}

Engine::Engine(const Program& program, RunOptions options)
    : program_(program), options_(std::move(options)) {
  const std::string sys = kSystemNamespace;
  nop_ = program_.at(sys + "::nop").ref;
  tuple_ = program_.at(sys + "::tuple").ref;
  true_ = program_.at(sys + "::true").ref;
  false_ = program_.at(sys + "::false").ref;
}

bool Engine::limit_reached() const {
  return options_.step_limit && steps_.load() >= *options_.step_limit;
}

void Engine::print(const Node& value) {
  if (!options_.out) return;
  std::string line = render_plain(value) + "\n";
  std::lock_guard lock(out_mutex_);
  *options_.out << line << std::flush;
}

void Engine::deliver(RewriteState& state, const ThunkPtr& t, NodePtr value) {
  write_result(state, t->target, std::move(value));
  state.root = t->next;
}

void Engine::splice(RewriteState& state, const ThunkPtr& t, ThunkPtr first,
                    const ThunkPtr& last) {
  last->next = t->next;
  last->target = t->target;
  state.root = std::move(first);
}

void Engine::fault(RewriteState& state, const std::string& message) {
  raise(state, make_text(message));
}

void Engine::raise(RewriteState& state, NodePtr value) {
  HandlerPtr h = state.root ? state.root->handler : nullptr;
  if (!h) {
    state.exception = std::move(value);
    state.root = nullptr;
    return;
  }
  auto r = std::make_shared<Thunk>(std::vector<NodePtr>{h->value, std::move(value)});
  r->next = h->next;
  r->target = h->target;
  r->handler = h->enclosing;
  state.root = std::move(r);
}

void Engine::step(RewriteState& state) {
  if (!state.root) throw InternalFault("step past the runtime sink");
  ThunkPtr t = state.root;
  if (!t->filled()) throw InternalFault("root redex has holes");
  ++state.steps;
  ++steps_;
  std::vector<NodePtr> cells = std::move(t->cells);
  t->cells.assign(cells.size(), nullptr);
  // A compound head contributes its fields as leading arguments.
  if (cells[0]->kind() == NodeKind::Compound) {
    const auto& c = static_cast<const CompoundNode&>(*cells[0]);
    std::vector<NodePtr> flat{c.head};
    flat.insert(flat.end(), c.args.begin(), c.args.end());
    flat.insert(flat.end(), cells.begin() + 1, cells.end());
    cells = std::move(flat);
  }
  rewrite(state, t, std::move(cells));
}

void Engine::rewrite(RewriteState& state, const ThunkPtr& t,
                     std::vector<NodePtr> cells) {
  const NodePtr& head = cells[0];
  std::span<const NodePtr> args(cells.data() + 1, cells.size() - 1);
  auto inert = [&] {
    deliver(state, t, make_compound(head, {args.begin(), args.end()}));
  };
  if (head->kind() != NodeKind::Combinator) return inert();
  const Combinator& c = *static_cast<const CombinatorNode&>(*head).combinator;

  switch (c.kind) {
    case CombinatorKind::DataTag:
      return inert();
    case CombinatorKind::Builtin: {
      const auto k = static_cast<std::size_t>(c.builtin_arity);
      if (args.size() < k) return inert();
      if (args.size() == k) return builtin(state, t, c, args);
      // Saturate first on a thunk of its own, then apply the result to the
      // rest.
      std::vector<NodePtr> rest{nullptr};
      rest.insert(rest.end(), args.begin() + k, args.end());
      auto s = std::make_shared<Thunk>(std::move(rest));
      s->next = t->next;
      s->target = t->target;
      s->handler = t->handler;
      auto sat = std::make_shared<Thunk>(
          std::vector<NodePtr>(cells.begin(), cells.begin() + 1 + k));
      sat->next = s;
      sat->target = {s, 0};
      sat->handler = t->handler;
      state.root = std::move(sat);
      return;
    }
    case CombinatorKind::Defined:
      break;
  }

  MatchOutcome m = match_clauses(c, args);
  if (m.kind != MatchKind::Matched) return inert();
  const ClauseProgram& clause = c.clauses[m.clause];
  std::vector<NodePtr>& regs = m.registers;

  ThunkPtr first;
  ThunkPtr last;
  NodePtr value;
  for (const BuildInstr& b : clause.build) {
    std::visit(
        [&](const auto& in) {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, LoadConst>) {
            regs[in.reg] = in.value;
          } else if constexpr (std::is_same_v<T, MakeCompound>) {
            std::vector<NodePtr> fields;
            for (int a : in.args) fields.push_back(regs[a]);
            regs[in.dest] = make_compound(regs[in.head], std::move(fields));
          } else if constexpr (std::is_same_v<T, MakeThunk>) {
            auto n = std::make_shared<Thunk>(
                std::vector<NodePtr>(in.args.size() + 1));
            n->handler = t->handler;
            auto place = [&](int reg, std::size_t slot) {
              NodePtr& operand = regs[reg];
              if (operand->kind() == NodeKind::Thunk) {
                static_cast<Thunk&>(*operand).target = {n, slot};
              } else {
                n->cells[slot] = operand;
              }
            };
            place(in.head, 0);
            for (std::size_t i = 0; i < in.args.size(); ++i) {
              place(in.args[i], i + 1);
            }
            if (last) {
              last->next = n;
            } else {
              first = n;
            }
            last = n;
            regs[in.dest] = std::move(n);
          } else if constexpr (std::is_same_v<T, ReturnValue>) {
            value = regs[in.reg];
          } else {
            // ReturnChain: the chain was linked while it was built.
          }
        },
        b);
  }
  regs.clear();

  const std::size_t k = static_cast<std::size_t>(clause.arity);
  if (args.size() == k) {
    if (first) return splice(state, t, std::move(first), last);
    return deliver(state, t, std::move(value));
  }
  apply_surplus(state, t, first ? nullptr : std::move(value),
                args.subspan(k));
  if (first) {
    last->next = state.root;
    last->target = {state.root, 0};
    state.root = std::move(first);
  }
}

// The clause result (or, with a chain, the hole it fills) applied to the
// arguments the clause did not consume.
void Engine::apply_surplus(RewriteState& state, const ThunkPtr& t,
                           NodePtr value, std::span<const NodePtr> surplus) {
  std::vector<NodePtr> cells{std::move(value)};
  cells.insert(cells.end(), surplus.begin(), surplus.end());
  auto s = std::make_shared<Thunk>(std::move(cells));
  s->next = t->next;
  s->target = t->target;
  s->handler = t->handler;
  state.root = std::move(s);
}

void Engine::builtin(RewriteState& state, const ThunkPtr& t,
                     const Combinator& c, std::span<const NodePtr> args) {
  const std::string& name = c.display;
  auto ints = [&](std::int64_t& x, std::int64_t& y) {
    const std::int64_t* a = as_int(args[0]);
    const std::int64_t* b = as_int(args[1]);
    if (!a || !b) return false;
    x = *a;
    y = *b;
    return true;
  };
  auto boolean = [&](bool b) { deliver(state, t, b ? true_ : false_); };
  std::int64_t x = 0;
  std::int64_t y = 0;

  switch (c.builtin) {
    case BuiltinId::Add:
    case BuiltinId::Sub:
    case BuiltinId::Mul:
    case BuiltinId::Div:
    case BuiltinId::Mod: {
      if (!ints(x, y)) return fault(state, name + " expects integers");
      const auto ux = static_cast<std::uint64_t>(x);
      const auto uy = static_cast<std::uint64_t>(y);
      std::int64_t r = 0;
      switch (c.builtin) {
        case BuiltinId::Add: r = wrap(ux + uy); break;
        case BuiltinId::Sub: r = wrap(ux - uy); break;
        case BuiltinId::Mul: r = wrap(ux * uy); break;
        default:
          if (y == 0) return fault(state, "division by zero");
          if (y == -1) {
            r = c.builtin == BuiltinId::Div ? wrap(0 - ux) : 0;
          } else {
            r = c.builtin == BuiltinId::Div ? x / y : x % y;
          }
      }
      return deliver(state, t, make_int(r));
    }
    case BuiltinId::Inc: {
      const std::int64_t* a = as_int(args[0]);
      if (!a) return fault(state, name + " expects an integer");
      return deliver(state, t, make_int(wrap(static_cast<std::uint64_t>(*a) + 1)));
    }
    case BuiltinId::Less:
    case BuiltinId::LessEq: {
      const bool strict = c.builtin == BuiltinId::Less;
      if (ints(x, y)) return boolean(strict ? x < y : x <= y);
      if (args[0]->kind() == NodeKind::Text && args[1]->kind() == NodeKind::Text) {
        const auto& a = static_cast<const TextNode&>(*args[0]).value;
        const auto& b = static_cast<const TextNode&>(*args[1]).value;
        return boolean(strict ? a < b : a <= b);
      }
      return fault(state, name + " expects two integers or two texts");
    }
    case BuiltinId::Equal:
      return boolean(same_value(*args[0], *args[1]));
    case BuiltinId::Print:
      print(*args[0]);
      return deliver(state, t, nop_);
    case BuiltinId::Throw:
      return raise(state, args[0]);
    case BuiltinId::Try: {
      auto h = std::make_shared<Handler>(args[0], t->next, t->target, t->handler);
      auto body = std::make_shared<Thunk>(std::vector<NodePtr>{args[1], nop_});
      body->next = t->next;
      body->target = t->target;
      body->handler = std::move(h);
      state.root = std::move(body);
      return;
    }
    case BuiltinId::Par:
      return spawn_parallel(state, *t, args[0], args[1]);
    case BuiltinId::None:
      break;
  }
  throw InternalFault("no host operation for " + c.name);
}

void Engine::spawn_parallel(RewriteState& state, const Thunk& thunk,
                            const NodePtr& left, const NodePtr& right) {
  auto join = std::make_shared<Thunk>(std::vector<NodePtr>{tuple_, nullptr, nullptr});
  RewriteState branches[2];
  std::exception_ptr errors[2];
  const NodePtr* fns[2] = {&left, &right};
  for (int i = 0; i < 2; ++i) {
    auto root = std::make_shared<Thunk>(std::vector<NodePtr>{*fns[i], nop_});
    root->target = {join, static_cast<std::size_t>(i + 1)};
    branches[i].root = std::move(root);
    branches[i].boundary = join.get();
  }
  auto work = [&](int i) {
    try {
      run_loop(branches[i], false);
      // Abandoned thunks of this branch are reclaimed on its own thread.
      branches[i].root = nullptr;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  std::thread worker(work, 0);
  work(1);
  worker.join();

  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  if (branches[0].step_limit_hit || branches[1].step_limit_hit) {
    state.step_limit_hit = true;
    return;
  }
  for (RewriteState& b : branches) {
    if (b.exception) return raise(state, b.exception);
  }
  NodePtr pair = make_compound(tuple_, {join->cells[1], join->cells[2]});
  write_result(state, thunk.target, std::move(pair));
  state.root = thunk.next;
}

void Engine::run_loop(RewriteState& state, bool top) {
  while (state.root) {
    if (limit_reached()) {
      state.step_limit_hit = true;
      return;
    }
    step(state);
    if (state.step_limit_hit) return;
    if (options_.checked) {
      GraphReport report = check(state);
      if (!report.ok()) throw InvariantViolation(report, state.steps);
    }
    if (top && options_.observer) options_.observer(state);
  }
}

Outcome Engine::run(RewriteState& state) {
  if (options_.checked) {
    GraphReport report = check(state);
    if (!report.ok()) throw InvariantViolation(report, state.steps);
  }
  if (options_.observer) options_.observer(state);
  run_loop(state, true);
  Outcome out;
  out.steps = state.steps;
  if (state.step_limit_hit) {
    out.status = RunStatus::StepLimit;
  } else if (state.exception) {
    out.status = RunStatus::Uncaught;
    out.value = state.exception;
  } else {
    out.value = state.result;
  }
  return out;
}

Outcome Engine::run_definition(std::string_view name) {
  const ResolvedDef* def = program_.lifted.find_def(std::string(name));
  if (!def) throw InternalFault("no definition " + std::string(name));
  RewriteState state = wire_root(def->body, program_);
  return run(state);
}

}  // namespace twist
