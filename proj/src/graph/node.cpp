#include "twist/node.hpp"

#include <sstream>

#include "twist/lexer.hpp"
#include "twist/program.hpp"

namespace twist {

namespace {

std::atomic<std::int64_t> g_live{0};
std::atomic<std::uint64_t> g_serial{0};

thread_local std::vector<NodePtr> t_pending;
thread_local bool t_draining = false;

}  // namespace

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Int: return "int";
    case NodeKind::Text: return "text";
    case NodeKind::Combinator: return "combinator";
    case NodeKind::Compound: return "compound";
    case NodeKind::Thunk: return "thunk";
    case NodeKind::Handler: return "handler";
  }
  return "?";
}

Node::Node(NodeKind kind)
    : kind_(kind), serial_(g_serial.fetch_add(1, std::memory_order_relaxed)) {
  g_live.fetch_add(1, std::memory_order_relaxed);
}

Node::~Node() { g_live.fetch_sub(1, std::memory_order_relaxed); }

std::int64_t live_nodes() { return g_live.load(std::memory_order_relaxed); }

void release(NodePtr link) {
  if (!link) return;
  t_pending.push_back(std::move(link));
  if (t_draining) return;
  t_draining = true;
  while (!t_pending.empty()) {
    NodePtr n = std::move(t_pending.back());
    t_pending.pop_back();
    n.reset();
  }
  t_draining = false;
}

CompoundNode::~CompoundNode() {
  release(std::move(head));
  for (NodePtr& a : args) release(std::move(a));
}

Thunk::~Thunk() {
  release(std::move(next));
  release(std::move(target.thunk));
  release(std::move(handler));
  for (NodePtr& c : cells) release(std::move(c));
}

bool Thunk::filled() const {
  for (const NodePtr& c : cells) {
    if (!c) return false;
  }
  return true;
}

Handler::~Handler() {
  release(std::move(value));
  release(std::move(next));
  release(std::move(target.thunk));
  release(std::move(enclosing));
}

NodePtr make_int(std::int64_t v) { return std::make_shared<IntNode>(v); }

NodePtr make_text(std::string v) {
  return std::make_shared<TextNode>(std::move(v));
}

NodePtr make_compound(const NodePtr& head, std::vector<NodePtr> args) {
  if (args.empty()) return head;
  if (head->kind() == NodeKind::Compound) {
    const auto& c = static_cast<const CompoundNode&>(*head);
    std::vector<NodePtr> all = c.args;
    all.insert(all.end(), std::make_move_iterator(args.begin()),
               std::make_move_iterator(args.end()));
    return std::make_shared<CompoundNode>(c.head, std::move(all));
  }
  return std::make_shared<CompoundNode>(head, std::move(args));
}

bool same_literal(const Node& a, const Node& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == NodeKind::Int) {
    return static_cast<const IntNode&>(a).value ==
           static_cast<const IntNode&>(b).value;
  }
  if (a.kind() == NodeKind::Text) {
    return static_cast<const TextNode&>(a).value ==
           static_cast<const TextNode&>(b).value;
  }
  return false;
}

std::string render(const Node& node) {
  // Explicit work list: lists can be far deeper than the host stack.
  struct Item {
    const Node* node;
    const char* text;
  };
  std::ostringstream os;
  std::vector<Item> work{{&node, nullptr}};
  while (!work.empty()) {
    Item item = work.back();
    work.pop_back();
    if (item.text) {
      os << item.text;
      continue;
    }
    const Node& n = *item.node;
    switch (n.kind()) {
      case NodeKind::Int:
        os << static_cast<const IntNode&>(n).value;
        break;
      case NodeKind::Text:
        os << encode_text(static_cast<const TextNode&>(n).value);
        break;
      case NodeKind::Combinator:
        os << static_cast<const CombinatorNode&>(n).combinator->display;
        break;
      case NodeKind::Compound: {
        const auto& c = static_cast<const CompoundNode&>(n);
        os << '(';
        work.push_back({nullptr, ")"});
        for (auto it = c.args.rbegin(); it != c.args.rend(); ++it) {
          work.push_back({it->get(), nullptr});
          work.push_back({nullptr, " "});
        }
        work.push_back({c.head.get(), nullptr});
        break;
      }
      case NodeKind::Thunk:
        os << "<thunk>";
        break;
      case NodeKind::Handler:
        os << "<handler>";
        break;
    }
  }
  return os.str();
}

std::string render_plain(const Node& node) {
  if (node.kind() == NodeKind::Text) {
    return static_cast<const TextNode&>(node).value;
  }
  return render(node);
}

}  // namespace twist
