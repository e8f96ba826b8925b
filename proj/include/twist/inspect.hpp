#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twist/wire.hpp"

namespace twist {

struct Violation {
  std::vector<std::uint64_t> nodes;  // creation serials
  std::string rule;
  std::string description;
};

/// Result of checking a paused rewrite state. The three invariants are hard;
/// `tree` (no compound or thunk held by two cells) is informational, sharing
/// being legal.
struct GraphReport {
  bool acyclic = true;
  bool chain_linear = true;
  bool reduced_pure = true;
  bool tree = true;
  std::vector<Violation> violations;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t thunk_count = 0;

  bool ok() const { return acyclic && chain_linear && reduced_pure; }
  std::string summary() const;
};

/// Read-only walk over every link kind: next-redex, result-target, handler,
/// cells and compound fields.
///  - acyclic: depth-first search finds no back edge;
///  - chain_linear: next-redex links from the root form a simple path to the
///    sink, the root is fully filled, every thunk's target is a hole in a
///    thunk further down the chain, and no thunk is off the chain;
///  - reduced_pure: filled cells, compounds and results never reach a thunk
///    or handler, and compounds are flat and non-empty.
GraphReport check(const RewriteState& state);

enum class DotStyle { Standard, Thunked, Twisted };

const char* to_string(DotStyle style);

struct DotSnapshot {
  DotStyle style;
  std::string text;
  std::uint64_t step = 0;
};

/// Graphviz rendering of a paused state. Nodes are numbered by creation order
/// so identical states give byte-identical text.
///  - Standard: the term as an application tree with `@` nodes;
///  - Thunked: thunks as arrays of links, holes pointing at their producers;
///  - Twisted: the runtime layout, next-redex solid, result-target dashed,
///    handler dotted, `*` marking the root.
DotSnapshot emit_dot(const RewriteState& state, DotStyle style);

/// Thrown by the engine in checked mode when a step boundary fails check().
class InvariantViolation : public InternalFault {
 public:
  InvariantViolation(const GraphReport& report, std::uint64_t step)
      : InternalFault("graph invariant violated after step " +
                      std::to_string(step) + ": " + report.summary()),
        report_(report) {}
  const GraphReport& report() const { return report_; }

 private:
  GraphReport report_;
};

}  // namespace twist
