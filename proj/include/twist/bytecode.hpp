#pragma once

#include <string>
#include <variant>
#include <vector>

#include "twist/node.hpp"

namespace twist {

// Clause bytecode. Match instructions only inspect the argument cells; build
// instructions allocate the clause body. Registers hold node links.

/// reg := argument `arg` (0-based, first argument after the head).
struct BindArg {
  int arg;
  int reg;
};

/// Fails unless reg holds an equal integer or text.
struct TestLiteral {
  int reg;
  NodePtr literal;
};

/// Fails unless reg holds `tag` (arity 0) or a compound `tag a1..a_arity`.
struct TestTag {
  int reg;
  const Combinator* tag;
  int arity;
};

/// dest := argument `field` of the compound in reg.
struct Project {
  int reg;
  int field;
  int dest;
};

using MatchInstr = std::variant<BindArg, TestLiteral, TestTag, Project>;

struct LoadConst {
  NodePtr value;
  int reg;
};

/// dest := inert compound; every register involved holds a value.
struct MakeCompound {
  int head;
  std::vector<int> args;
  int dest;
};

/// dest := new thunk. Argument registers holding thunks built earlier in this
/// body become holes filled by those thunks' results. Each new thunk is linked
/// as the next redex of the thunk made just before it.
struct MakeThunk {
  int head;
  std::vector<int> args;
  int dest;
};

struct ReturnValue {
  int reg;
};

/// The body is the chain first..last; last inherits the rewritten thunk's
/// continuation, target and handler.
struct ReturnChain {
  int first;
  int last;
};

using BuildInstr =
    std::variant<LoadConst, MakeCompound, MakeThunk, ReturnValue, ReturnChain>;

struct ClauseProgram {
  int arity = 0;
  std::vector<MatchInstr> match;
  std::vector<BuildInstr> build;
  int registers = 0;
};

/// Static checks: registers written before they are read, exactly one
/// terminating return, projections guarded by a tag test of sufficient arity,
/// thunk registers consumed exactly once. Returns the problems found.
std::vector<std::string> verify(const ClauseProgram& program);

}  // namespace twist
