#include "twist/wire.hpp"

namespace twist {

void write_result(RewriteState& state, const Target& target, NodePtr value) {
  if (!value || !value->is_value()) {
    throw InternalFault("only reduced values can be written as results");
  }
  if (target.is_root()) {
    if (state.result) throw InternalFault("root slot written twice");
    state.result = std::move(value);
    return;
  }
  auto& cells = target.thunk->cells;
  if (target.slot >= cells.size()) {
    throw InternalFault("result target slot out of range");
  }
  NodePtr& cell = cells[target.slot];
  if (cell) {
    throw InternalFault("result written into a filled cell (thunk #" +
                        std::to_string(target.thunk->serial()) + ", slot " +
                        std::to_string(target.slot) + ")");
  }
  cell = std::move(value);
}

namespace {

class Wirer {
 public:
  Wirer(const Program& program, const HandlerPtr& handler)
      : program_(program), handler_(handler) {}

  // Post-order, arguments right to left: the order thunks are created is the
  // order they will be rewritten in.
  NodePtr operand(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Int:
        return make_int(t.integer);
      case Term::Kind::Text:
        return make_text(t.text);
      case Term::Kind::Const: {
        const Combinator& c = program_.at(t.name);
        if (c.is_constant_definition()) return thunk({c.ref});
        return c.ref;
      }
      case Term::Kind::Apply: {
        const std::size_t n = t.items.size();
        std::vector<NodePtr> cells(n);
        for (std::size_t i = n; i-- > 1;) cells[i] = operand(t.items[i]);
        const Term& head = t.items[0];
        const Combinator* head_comb = nullptr;
        if (head.kind == Term::Kind::Const) {
          head_comb = &program_.at(head.name);
          cells[0] = head_comb->ref;
        } else {
          cells[0] = operand(head);
        }
        bool reduced = true;
        for (const NodePtr& c : cells) reduced = reduced && c->is_value();
        if (head_comb && head_comb->kind == CombinatorKind::DataTag && reduced) {
          std::vector<NodePtr> args(cells.begin() + 1, cells.end());
          return make_compound(cells[0], std::move(args));
        }
        return thunk(std::move(cells));
      }
      case Term::Kind::Var:
        throw InternalFault("wire_term: free variable " + t.name);
      case Term::Kind::Lambda:
      case Term::Kind::Try:
        throw InternalFault("wire_term expects a lifted term");
    }
    return nullptr;
  }

  ThunkPtr first() const { return first_; }

 private:
  ThunkPtr thunk(std::vector<NodePtr> operands) {
    auto t = std::make_shared<Thunk>(std::vector<NodePtr>(operands.size()));
    t->handler = handler_;
    for (std::size_t k = 0; k < operands.size(); ++k) {
      if (operands[k]->kind() == NodeKind::Thunk) {
        static_cast<Thunk&>(*operands[k]).target = {t, k};
      } else {
        t->cells[k] = std::move(operands[k]);
      }
    }
    if (last_) {
      last_->next = t;
    } else {
      first_ = t;
    }
    last_ = t;
    return t;
  }

  const Program& program_;
  const HandlerPtr& handler_;
  ThunkPtr first_;
  ThunkPtr last_;
};

}  // namespace

ThunkPtr wire_term(const Term& term, const Program& program,
                   RewriteState& state, const Target& target,
                   ThunkPtr continuation, const HandlerPtr& handler) {
  Wirer w(program, handler);
  NodePtr top = w.operand(term);
  if (top->kind() != NodeKind::Thunk) {
    write_result(state, target, std::move(top));
    return continuation;
  }
  auto& last = static_cast<Thunk&>(*top);
  last.target = target;
  last.next = std::move(continuation);
  return w.first();
}

RewriteState wire_root(const Term& term, const Program& program) {
  RewriteState state;
  state.root = wire_term(term, program, state, Target{}, nullptr, nullptr);
  return state;
}

}  // namespace twist
