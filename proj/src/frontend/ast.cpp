#include "twist/ast.hpp"

namespace twist {

bool Pattern::operator==(const Pattern& o) const {
  return kind == o.kind && name == o.name && integer == o.integer &&
         text == o.text && items == o.items;
}

bool Expr::operator==(const Expr& o) const {
  return kind == o.kind && name == o.name && integer == o.integer &&
         text == o.text && items == o.items && clauses == o.clauses;
}

Expr Expr::variable(std::string name) {
  Expr e;
  e.kind = Kind::Variable;
  e.name = std::move(name);
  return e;
}

Expr Expr::constant(std::string name) {
  Expr e;
  e.kind = Kind::Constant;
  e.name = std::move(name);
  return e;
}

Expr Expr::int_lit(std::int64_t v) {
  Expr e;
  e.kind = Kind::Int;
  e.integer = v;
  return e;
}

Expr Expr::text_lit(std::string v) {
  Expr e;
  e.kind = Kind::Text;
  e.text = std::move(v);
  return e;
}

Expr Expr::apply(Expr fn, Expr arg) {
  Expr e;
  e.kind = Kind::Apply;
  e.pos = fn.pos;
  e.items.push_back(std::move(fn));
  e.items.push_back(std::move(arg));
  return e;
}

Expr Expr::binary(std::string op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::BinaryOp;
  e.name = std::move(op);
  e.pos = lhs.pos;
  e.items.push_back(std::move(lhs));
  e.items.push_back(std::move(rhs));
  return e;
}

Expr Expr::abstraction(std::vector<Clause> clauses) {
  Expr e;
  e.kind = Kind::Abstraction;
  e.clauses = std::move(clauses);
  return e;
}

Expr Expr::try_catch(Expr body, Expr handler) {
  Expr e;
  e.kind = Kind::Try;
  e.items.push_back(std::move(body));
  e.items.push_back(std::move(handler));
  return e;
}

}  // namespace twist
