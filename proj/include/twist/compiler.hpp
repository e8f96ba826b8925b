#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twist/program.hpp"
#include "twist/resolve.hpp"

namespace twist {

/// Hoists every nested abstraction into a fresh definition named
/// `<def>/lift<k>` that takes its captured variables as leading parameters,
/// and desugars `try`/`catch` into the `System::try` control combinator.
/// Afterwards an abstraction only appears as the whole body of a definition.
ResolvedProgram lift_lambdas(const ResolvedProgram& program);

/// Compiles the clauses of one (lifted) abstraction. Constants are looked up
/// in `program`, which must already contain every combinator referenced.
std::vector<ClauseProgram> compile_clauses(std::span<const TermClause> clauses,
                                           const Program& program);

/// Resolve output to executable combinator table.
Program compile_program(const ResolvedProgram& resolved);

/// Clauses of a lifted definition body: the abstraction's clauses, or one
/// zero-arity clause for any other body.
std::vector<TermClause> definition_clauses(const Term& body);

std::string disassemble(const Combinator& combinator);
std::string disassemble(const Program& program);

struct AssembledCombinator {
  std::string name;
  CombinatorKind kind = CombinatorKind::Defined;
  std::vector<ClauseProgram> clauses;
};

/// Parses a listing produced by disassemble. Names are looked up in
/// `program`. Throws CompileError on malformed input.
std::vector<AssembledCombinator> assemble(std::string_view listing,
                                          const Program& program);

}  // namespace twist
