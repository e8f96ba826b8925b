#pragma once

#include <cstdint>

#include "twist/node.hpp"
#include "twist/program.hpp"
#include "twist/resolve.hpp"

namespace twist {

/// One reduction in progress. `root` is the redex to rewrite next; once it is
/// null the runtime sink has been reached and `result` (the root slot) or
/// `exception` holds the outcome.
struct RewriteState {
  ThunkPtr root;
  NodePtr result;
  NodePtr exception;
  std::uint64_t steps = 0;
  bool step_limit_hit = false;
  /// Thunk owned by an enclosing state; a parallel branch writes into it but
  /// never looks inside.
  const Thunk* boundary = nullptr;

  bool done() const { return root == nullptr; }
};

/// Fills the hole `target` addresses, or the root slot. Filling a cell twice
/// is an InternalFault.
void write_result(RewriteState& state, const Target& target, NodePtr value);

/// Builds the twisted form of a lifted, lambda-free term: a chain of thunks
/// that evaluates arguments right to left before each application. The last
/// thunk delivers to `target` and continues with `continuation`; every thunk
/// carries `handler`. Returns the first redex, or `continuation` when the term
/// is already a value (which is then written to `target` directly).
ThunkPtr wire_term(const Term& term, const Program& program,
                   RewriteState& state, const Target& target,
                   ThunkPtr continuation, const HandlerPtr& handler);

/// A fresh state whose redex chain is `term`, delivering to the root slot.
RewriteState wire_root(const Term& term, const Program& program);

}  // namespace twist
