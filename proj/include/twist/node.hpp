#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace twist {

struct Combinator;

enum class NodeKind { Int, Text, Combinator, Compound, Thunk, Handler };

const char* to_string(NodeKind kind);

/// Base of everything allocated by the runtime. Every instance is counted;
/// live_nodes() reports the current population.
class Node {
 public:
  explicit Node(NodeKind kind);
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;
  virtual ~Node();

  NodeKind kind() const { return kind_; }
  /// Creation order, unique per process.
  std::uint64_t serial() const { return serial_; }
  /// Fully reduced: a literal, a combinator or an inert compound.
  bool is_value() const {
    return kind_ != NodeKind::Thunk && kind_ != NodeKind::Handler;
  }

 private:
  NodeKind kind_;
  std::uint64_t serial_;
};

using NodePtr = std::shared_ptr<Node>;

std::int64_t live_nodes();

class IntNode final : public Node {
 public:
  explicit IntNode(std::int64_t v) : Node(NodeKind::Int), value(v) {}
  const std::int64_t value;
};

class TextNode final : public Node {
 public:
  explicit TextNode(std::string v) : Node(NodeKind::Text), value(std::move(v)) {}
  const std::string value;
};

class CombinatorNode final : public Node {
 public:
  explicit CombinatorNode(const Combinator* c)
      : Node(NodeKind::Combinator), combinator(c) {}
  const Combinator* const combinator;
};

/// An inert application. The head is never itself a compound and the
/// argument list is never empty.
class CompoundNode final : public Node {
 public:
  CompoundNode(NodePtr head, std::vector<NodePtr> args)
      : Node(NodeKind::Compound), head(std::move(head)), args(std::move(args)) {}
  ~CompoundNode() override;

  NodePtr head;
  std::vector<NodePtr> args;
};

class Thunk;
class Handler;
using ThunkPtr = std::shared_ptr<Thunk>;
using HandlerPtr = std::shared_ptr<Handler>;

/// Where a reduced value goes: a cell of a waiting thunk, or the root slot
/// of the rewrite state when `thunk` is null.
struct Target {
  ThunkPtr thunk;
  std::size_t slot = 0;

  bool is_root() const { return thunk == nullptr; }
};

/// An application awaiting reduction, extended at the front with its control
/// links. A null `next` is the runtime sink. A null cell is a hole that some
/// other thunk's result will fill.
class Thunk final : public Node {
 public:
  explicit Thunk(std::vector<NodePtr> cells)
      : Node(NodeKind::Thunk), cells(std::move(cells)) {}
  ~Thunk() override;

  ThunkPtr next;
  Target target;
  HandlerPtr handler;
  std::vector<NodePtr> cells;  // cells[0] is the head

  bool filled() const;
};

/// An installed exception handler: the handler value, the continuation that
/// was current at installation, and the handler it shadows.
class Handler final : public Node {
 public:
  Handler(NodePtr handler, ThunkPtr next, Target target, HandlerPtr enclosing)
      : Node(NodeKind::Handler),
        value(std::move(handler)),
        next(std::move(next)),
        target(std::move(target)),
        enclosing(std::move(enclosing)) {}
  ~Handler() override;

  NodePtr value;
  ThunkPtr next;
  Target target;
  HandlerPtr enclosing;
};

NodePtr make_int(std::int64_t v);
NodePtr make_text(std::string v);
/// Builds `head args...`, flattening a compound head. With no arguments the
/// head itself is returned.
NodePtr make_compound(const NodePtr& head, std::vector<NodePtr> args);

/// Releases a link without recursing through the host stack: children freed
/// by the release are queued and freed by the outermost call.
void release(NodePtr link);

/// Text form of a reduced value, e.g. `(cons 1 (cons 2 nil))`.
std::string render(const Node& node);
/// Like render, but a top-level text is written without quotes.
std::string render_plain(const Node& node);

bool same_literal(const Node& a, const Node& b);

}  // namespace twist
