#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "twist/inspect.hpp"

namespace twist {

const char* to_string(DotStyle style) {
  switch (style) {
    case DotStyle::Standard: return "standard";
    case DotStyle::Thunked: return "thunked";
    case DotStyle::Twisted: return "twisted";
  }
  return "?";
}

namespace {

bool is_leaf(const Node& n) {
  return n.kind() == NodeKind::Int || n.kind() == NodeKind::Text ||
         n.kind() == NodeKind::Combinator;
}

std::string escape_record(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::string_view("{}|<>\"\\ ").find(c) != std::string_view::npos) {
      out += '\\';
    }
    out += c;
  }
  return out;
}

std::string escape_quoted(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Thunks, handlers and compounds reachable from the state, by creation order.
// The boundary thunk of a parallel branch belongs to another state and is
// not collected.
std::vector<const Node*> collect(const RewriteState& state) {
  std::vector<const Node*> todo;
  std::unordered_map<const Node*, bool> seen;
  auto push = [&](const Node* n) {
    if (!n || is_leaf(*n) || n == state.boundary || seen[n]) return;
    seen[n] = true;
    todo.push_back(n);
  };
  push(state.root.get());
  push(state.result.get());
  push(state.exception.get());
  std::vector<const Node*> out;
  while (!todo.empty()) {
    const Node* n = todo.back();
    todo.pop_back();
    out.push_back(n);
    if (n->kind() == NodeKind::Thunk) {
      const auto& t = static_cast<const Thunk&>(*n);
      push(t.next.get());
      push(t.target.thunk.get());
      push(t.handler.get());
      for (const NodePtr& c : t.cells) push(c.get());
    } else if (n->kind() == NodeKind::Handler) {
      const auto& h = static_cast<const Handler&>(*n);
      push(h.value.get());
      push(h.next.get());
      push(h.target.thunk.get());
      push(h.enclosing.get());
    } else if (n->kind() == NodeKind::Compound) {
      const auto& c = static_cast<const CompoundNode&>(*n);
      push(c.head.get());
      for (const NodePtr& a : c.args) push(a.get());
    }
  }
  std::sort(out.begin(), out.end(), [](const Node* a, const Node* b) {
    return a->serial() < b->serial();
  });
  return out;
}

class DotWriter {
 public:
  DotWriter(const RewriteState& state, DotStyle style)
      : state_(state), style_(style) {}

  std::string run() {
    os_ << "digraph " << to_string(style_) << " {\n";
    os_ << "  // step " << state_.steps << '\n';
    os_ << "  node [shape=record];\n";
    if (style_ == DotStyle::Standard) {
      standard();
    } else {
      graph();
    }
    os_ << "}\n";
    return os_.str();
  }

 private:
  // ---- thunked and twisted ----------------------------------------------

  void graph() {
    std::vector<const Node*> nodes = collect(state_);
    const Node* top = nullptr;
    if (state_.done()) top = state_.exception ? state_.exception.get()
                                             : state_.result.get();
    if (top && is_leaf(*top)) nodes.insert(nodes.begin(), top);
    for (const Node* n : nodes) ids_.emplace(n, "n" + std::to_string(ids_.size()));

    os_ << "  root [shape=plaintext, label=\"*\"];\n";
    for (const Node* n : nodes) declare(*n);
    if (uses_sink()) os_ << "  sink [shape=plaintext, label=\"runtime\"];\n";
    if (state_.boundary) {
      os_ << "  boundary [shape=plaintext, label=\"parent\"];\n";
    }

    if (!state_.done()) {
      const Node* first = style_ == DotStyle::Twisted ? state_.root.get()
                                                      : term_root(nodes);
      if (first) os_ << "  root -> " << ids_.at(first) << ";\n";
    } else if (top) {
      os_ << "  root -> " << ids_.at(top)
          << (state_.exception ? " [label=\"exception\"]" : "") << ";\n";
    }
    for (const Node* n : nodes) edges(*n);
  }

  bool uses_sink() const {
    if (style_ != DotStyle::Twisted) return false;
    for (const auto& [n, id] : ids_) {
      if (n->kind() == NodeKind::Thunk) {
        const auto& t = static_cast<const Thunk&>(*n);
        if (!t.next || t.target.is_root()) return true;
      } else if (n->kind() == NodeKind::Handler) {
        const auto& h = static_cast<const Handler&>(*n);
        if (!h.next || h.target.is_root()) return true;
      }
    }
    return false;
  }

  // The thunk whose value is the value of the whole state.
  const Node* term_root(const std::vector<const Node*>& nodes) const {
    for (const Node* n : nodes) {
      if (n->kind() != NodeKind::Thunk) continue;
      const auto& t = static_cast<const Thunk&>(*n);
      if (t.target.is_root() || t.target.thunk.get() == state_.boundary) {
        return n;
      }
    }
    return state_.root.get();
  }

  std::string cell(const NodePtr& c, std::size_t k) const {
    std::string out = "<c" + std::to_string(k) + "> ";
    if (!c) return out + "_";
    if (is_leaf(*c)) return out + escape_record(render(*c));
    return out;
  }

  void declare(const Node& n) {
    os_ << "  " << ids_.at(&n) << " [";
    switch (n.kind()) {
      case NodeKind::Thunk: {
        const auto& t = static_cast<const Thunk&>(n);
        os_ << "label=\"";
        if (style_ == DotStyle::Twisted) os_ << "<next> |<target> |<handler> |";
        for (std::size_t k = 0; k < t.cells.size(); ++k) {
          os_ << (k ? "|" : "") << cell(t.cells[k], k);
        }
        os_ << '"';
        break;
      }
      case NodeKind::Handler: {
        const auto& h = static_cast<const Handler&>(n);
        os_ << "label=\"" << cell(h.value, 0)
            << "|<next> |<target> |<enclosing> \", style=rounded";
        break;
      }
      case NodeKind::Compound: {
        const auto& c = static_cast<const CompoundNode&>(n);
        os_ << "label=\"" << cell(c.head, 0);
        for (std::size_t k = 0; k < c.args.size(); ++k) {
          os_ << '|' << cell(c.args[k], k + 1);
        }
        os_ << "\", style=filled, fillcolor=lightgrey";
        break;
      }
      default:
        os_ << "shape=plaintext, label=\"" << escape_quoted(render(n)) << '"';
        break;
    }
    os_ << "];\n";
  }

  std::string id_or(const Node* n, const char* fallback) const {
    if (!n) return fallback;
    if (n == state_.boundary) return "boundary";
    return ids_.at(n);
  }

  std::string target_port(const Target& t) const {
    if (t.is_root()) return "sink";
    if (t.thunk.get() == state_.boundary) return "boundary";
    return ids_.at(t.thunk.get()) + ":c" + std::to_string(t.slot);
  }

  void value_edge(const std::string& from, const NodePtr& c, std::size_t k) {
    if (c && !is_leaf(*c)) {
      os_ << "  " << from << ":c" << k << " -> " << ids_.at(c.get())
          << " [style=bold];\n";
    }
  }

  void edges(const Node& n) {
    const std::string& id = ids_.at(&n);
    const bool twisted = style_ == DotStyle::Twisted;
    switch (n.kind()) {
      case NodeKind::Thunk: {
        const auto& t = static_cast<const Thunk&>(n);
        for (std::size_t k = 0; k < t.cells.size(); ++k) {
          value_edge(id, t.cells[k], k);
        }
        if (twisted) {
          os_ << "  " << id << ":next -> " << id_or(t.next.get(), "sink")
              << ";\n";
          os_ << "  " << id << ":target -> " << target_port(t.target)
              << " [style=dashed];\n";
          if (t.handler) {
            os_ << "  " << id << ":handler -> " << ids_.at(t.handler.get())
                << " [style=dotted];\n";
          }
        } else if (!t.target.is_root()) {
          // A hole points at the thunk that will fill it.
          os_ << "  " << target_port(t.target) << " -> " << id
              << " [style=dashed];\n";
        }
        break;
      }
      case NodeKind::Handler: {
        const auto& h = static_cast<const Handler&>(n);
        value_edge(id, h.value, 0);
        if (twisted) {
          os_ << "  " << id << ":next -> " << id_or(h.next.get(), "sink")
              << ";\n";
          os_ << "  " << id << ":target -> " << target_port(h.target)
              << " [style=dashed];\n";
          if (h.enclosing) {
            os_ << "  " << id << ":enclosing -> "
                << ids_.at(h.enclosing.get()) << " [style=dotted];\n";
          }
        }
        break;
      }
      case NodeKind::Compound: {
        const auto& c = static_cast<const CompoundNode&>(n);
        value_edge(id, c.head, 0);
        for (std::size_t k = 0; k < c.args.size(); ++k) {
          value_edge(id, c.args[k], k + 1);
        }
        break;
      }
      default:
        break;
    }
  }

  // ---- standard ------------------------------------------------------------

  // Rebuilds the term the state denotes: holes are replaced by the terms of
  // the thunks that will fill them, applications drawn as binary `@` nodes.
  void standard() {
    std::map<std::pair<const Thunk*, std::size_t>, const Thunk*> producer;
    for (const Node* n : collect(state_)) {
      if (n->kind() != NodeKind::Thunk) continue;
      const auto& t = static_cast<const Thunk&>(*n);
      if (!t.target.is_root()) producer[{t.target.thunk.get(), t.target.slot}] = &t;
    }
    const Node* top = nullptr;
    if (state_.done()) {
      top = state_.exception ? state_.exception.get() : state_.result.get();
    } else {
      top = term_root(collect(state_));
    }
    if (!top) return;

    struct Item {
      const Node* node;
      std::string parent;  // edge source, empty for the top
      const char* label;
    };
    int counter = 0;
    std::vector<Item> todo{{top, "", nullptr}};
    while (!todo.empty()) {
      Item item = todo.back();
      todo.pop_back();
      std::vector<const Node*> parts;
      if (item.node->kind() == NodeKind::Thunk) {
        const auto& t = static_cast<const Thunk&>(*item.node);
        for (std::size_t k = 0; k < t.cells.size(); ++k) {
          const Node* c = t.cells[k].get();
          if (!c) {
            auto it = producer.find({&t, k});
            c = it == producer.end() ? nullptr : it->second;
          }
          parts.push_back(c);
        }
      } else if (item.node->kind() == NodeKind::Compound) {
        const auto& c = static_cast<const CompoundNode&>(*item.node);
        parts.push_back(c.head.get());
        for (const NodePtr& a : c.args) parts.push_back(a.get());
      }
      auto emit = [&](const std::string& label, const std::string& parent,
                      const char* edge) {
        std::string id = "n" + std::to_string(counter++);
        os_ << "  " << id << " [shape=plaintext, label=\""
            << escape_quoted(label) << "\"];\n";
        if (!parent.empty()) {
          os_ << "  " << parent << " -> " << id;
          if (edge) os_ << " [label=\"" << edge << "\"]";
          os_ << ";\n";
        }
        return id;
      };
      if (parts.empty()) {
        emit(item.node->kind() == NodeKind::Handler ? "?" : render(*item.node),
             item.parent, item.label);
        continue;
      }
      if (parts.size() == 1) {
        todo.push_back({parts[0], item.parent, item.label});
        continue;
      }
      // Curried spine: ((h a1) a2) ... an, outermost @ first.
      std::string parent = item.parent;
      const char* label = item.label;
      std::vector<Item> pending;
      for (std::size_t k = parts.size() - 1; k >= 1; --k) {
        std::string at = emit("@", parent, label);
        pending.push_back({parts[k], at, "arg"});
        parent = at;
        label = "fun";
      }
      pending.push_back({parts[0], parent, "fun"});
      for (auto it = pending.rbegin(); it != pending.rend(); ++it) {
        if (it->node) {
          todo.push_back(*it);
        } else {
          emit("_", it->parent, it->label);
        }
      }
    }
  }

  const RewriteState& state_;
  DotStyle style_;
  std::ostringstream os_;
  std::map<const Node*, std::string> ids_;
};

}  // namespace

DotSnapshot emit_dot(const RewriteState& state, DotStyle style) {
  return {style, DotWriter(state, style).run(), state.steps};
}

}  // namespace twist
