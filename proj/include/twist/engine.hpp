#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>

#include "twist/inspect.hpp"
#include "twist/program.hpp"
#include "twist/wire.hpp"

namespace twist {

enum class MatchKind { Matched, NoClause, TooFewArgs };

struct MatchOutcome {
  MatchKind kind = MatchKind::NoClause;
  std::size_t clause = 0;
  std::vector<NodePtr> registers;  // after the match code ran
};

/// Tries the clauses in order; a clause of arity k only when n >= k
/// arguments are present. TooFewArgs when n is below every clause arity.
MatchOutcome match_clauses(const Combinator& combinator,
                           std::span<const NodePtr> args);

enum class RunStatus { Value, Uncaught, StepLimit };

struct RunOptions {
  /// check() before the first step and after every step.
  bool checked = false;
  std::optional<std::uint64_t> step_limit;
  /// Where `print` writes.
  std::ostream* out = nullptr;
  /// Called at every step boundary of the top-level state, step 0 included.
  std::function<void(const RewriteState&)> observer;
};

struct Outcome {
  RunStatus status = RunStatus::Value;
  NodePtr value;  // the result, or the uncaught exception
  std::uint64_t steps = 0;
};

class Engine {
 public:
  Engine(const Program& program, RunOptions options = {});

  /// One rewrite of the root redex.
  void step(RewriteState& state);
  /// Steps until the sink is reached or the step limit is exhausted.
  Outcome run(RewriteState& state);
  /// Wires `main` (or any zero-argument definition) and runs it.
  Outcome run_definition(std::string_view name);

  /// Transfers control to the handler of the current root, abandoning the
  /// chain up to the handler's continuation. Without a handler the state
  /// ends with `exception` set.
  void raise(RewriteState& state, NodePtr value);
  /// `par F G`: evaluates `F nop` and `G nop` on two threads and joins them
  /// into `tuple r1 r2`, delivered where `thunk` would have delivered.
  void spawn_parallel(RewriteState& state, const Thunk& thunk,
                      const NodePtr& left, const NodePtr& right);

  std::uint64_t total_steps() const { return steps_.load(); }

 private:
  void run_loop(RewriteState& state, bool top);
  void rewrite(RewriteState& state, const ThunkPtr& t,
               std::vector<NodePtr> cells);
  void builtin(RewriteState& state, const ThunkPtr& t, const Combinator& c,
               std::span<const NodePtr> args);
  void deliver(RewriteState& state, const ThunkPtr& t, NodePtr value);
  void splice(RewriteState& state, const ThunkPtr& t, ThunkPtr first,
              const ThunkPtr& last);
  void apply_surplus(RewriteState& state, const ThunkPtr& t, NodePtr value,
                     std::span<const NodePtr> surplus);
  void fault(RewriteState& state, const std::string& message);
  bool limit_reached() const;
  void print(const Node& value);

  const Program& program_;
  RunOptions options_;
  NodePtr nop_;
  NodePtr tuple_;
  NodePtr true_;
  NodePtr false_;
  std::atomic<std::uint64_t> steps_{0};
  std::mutex out_mutex_;
};

}  // namespace twist
