#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "twist/inspect.hpp"

namespace twist {

namespace {

std::vector<const Node*> links(const Node& n, const Thunk* boundary) {
  std::vector<const Node*> out;
  auto add = [&](const auto& p) {
    if (p) out.push_back(p.get());
  };
  switch (n.kind()) {
    case NodeKind::Thunk: {
      if (&n == boundary) break;
      const auto& t = static_cast<const Thunk&>(n);
      add(t.next);
      add(t.target.thunk);
      add(t.handler);
      for (const NodePtr& c : t.cells) add(c);
      break;
    }
    case NodeKind::Handler: {
      const auto& h = static_cast<const Handler&>(n);
      add(h.value);
      add(h.next);
      add(h.target.thunk);
      add(h.enclosing);
      break;
    }
    case NodeKind::Compound: {
      const auto& c = static_cast<const CompoundNode&>(n);
      add(c.head);
      for (const NodePtr& a : c.args) add(a);
      break;
    }
    default:
      break;
  }
  return out;
}

class Checker {
 public:
  explicit Checker(const RewriteState& state) : state_(state) {}

  GraphReport run() {
    const Node* roots[] = {state_.root.get(), state_.result.get(),
                           state_.exception.get()};
    for (const Node* r : roots) {
      if (r) search(r);
    }
    report_.node_count = order_.size();
    sharing();
    chain();
    purity();
    return std::move(report_);
  }

 private:
  void violate(bool GraphReport::*flag, std::string rule, std::string text,
               std::vector<std::uint64_t> nodes) {
    if (flag) report_.*flag = false;
    report_.violations.push_back({std::move(nodes), std::move(rule), std::move(text)});
  }

  // Iterative DFS with three colours; a grey target is a back edge.
  void search(const Node* start) {
    if (colour_.count(start)) {
      return;
    }
    struct Frame {
      const Node* node;
      std::vector<const Node*> out;
      std::size_t next = 0;
    };
    std::vector<Frame> stack;
    auto enter = [&](const Node* n) {
      colour_[n] = 1;
      order_.push_back(n);
      stack.push_back({n, links(*n, state_.boundary)});
      report_.edge_count += stack.back().out.size();
    };
    enter(start);
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == f.out.size()) {
        colour_[f.node] = 2;
        stack.pop_back();
        continue;
      }
      const Node* child = f.out[f.next++];
      auto it = colour_.find(child);
      if (it == colour_.end()) {
        enter(child);
      } else if (it->second == 1) {
        std::vector<std::uint64_t> cycle;
        bool on = false;
        for (const Frame& g : stack) {
          if (g.node == child) on = true;
          if (on) cycle.push_back(g.node->serial());
        }
        violate(&GraphReport::acyclic, "acyclic", "cycle through a back edge",
                std::move(cycle));
      }
    }
  }

  // Atoms may be shared freely; a compound or thunk held by two cells is not.
  void sharing() {
    std::unordered_map<const Node*, int> held;
    for (const Node* n : order_) {
      std::vector<const Node*> data;
      if (n->kind() == NodeKind::Thunk && n != state_.boundary) {
        for (const NodePtr& c : static_cast<const Thunk*>(n)->cells) data.push_back(c.get());
      } else if (n->kind() == NodeKind::Compound) {
        const auto* c = static_cast<const CompoundNode*>(n);
        data.push_back(c->head.get());
        for (const NodePtr& a : c->args) data.push_back(a.get());
      }
      for (const Node* d : data) {
        if (!d || (d->kind() != NodeKind::Compound && d->kind() != NodeKind::Thunk)) continue;
        if (++held[d] > 1) report_.tree = false;
      }
    }
  }

  void chain() {
    std::unordered_map<const Thunk*, std::size_t> position;
    std::size_t index = 0;
    for (const Thunk* t = state_.root.get(); t; t = t->next.get()) {
      if (t == state_.boundary) break;
      if (!position.emplace(t, index++).second) {
        violate(&GraphReport::chain_linear, "chain-cycle",
                "next-redex chain revisits a thunk", {t->serial()});
        break;
      }
    }
    if (state_.root && !state_.root->filled()) {
      violate(&GraphReport::chain_linear, "root-unfilled",
              "the root redex still has holes", {state_.root->serial()});
    }

    std::map<std::pair<const Thunk*, std::size_t>, const Thunk*> producers;
    for (const Node* n : order_) {
      if (n->kind() != NodeKind::Thunk || n == state_.boundary) continue;
      ++report_.thunk_count;
      const auto& t = static_cast<const Thunk&>(*n);
      auto pos = position.find(&t);
      if (pos == position.end()) {
        violate(&GraphReport::chain_linear, "orphan-thunk",
                "thunk is not on the redex chain", {t.serial()});
        continue;
      }
      if (t.target.is_root()) continue;
      const Thunk* dest = t.target.thunk.get();
      const std::size_t slot = t.target.slot;
      if (slot >= dest->cells.size()) {
        violate(&GraphReport::chain_linear, "target-range",
                "result target slot out of range", {t.serial(), dest->serial()});
        continue;
      }
      if (dest->cells[slot]) {
        violate(&GraphReport::chain_linear, "target-filled",
                "result target is not a hole", {t.serial(), dest->serial()});
      }
      if (!producers.emplace(std::make_pair(dest, slot), &t).second) {
        violate(&GraphReport::chain_linear, "target-shared",
                "two thunks deliver to the same hole",
                {t.serial(), dest->serial()});
      }
      if (dest == state_.boundary) continue;
      auto dpos = position.find(dest);
      if (dpos == position.end() || dpos->second <= pos->second) {
        violate(&GraphReport::chain_linear, "target-upstream",
                "result target does not run after its producer",
                {t.serial(), dest->serial()});
      }
    }
    for (const auto& [t, at] : position) {
      for (std::size_t k = 0; k < t->cells.size(); ++k) {
        if (!t->cells[k] && !producers.count({t, k})) {
          violate(&GraphReport::chain_linear, "hole-orphan",
                  "hole with no producer", {t->serial()});
        }
      }
    }
  }

  void need_value(const Node* n, const Node& owner, const char* what) {
    if (n && !n->is_value()) {
      violate(&GraphReport::reduced_pure, "reduced-purity",
              std::string(what) + " links to a " + to_string(n->kind()),
              {owner.serial(), n->serial()});
    }
  }

  void purity() {
    for (const Node* n : order_) {
      switch (n->kind()) {
        case NodeKind::Thunk:
          if (n == state_.boundary) break;
          for (const NodePtr& c : static_cast<const Thunk&>(*n).cells) {
            need_value(c.get(), *n, "filled cell");
          }
          break;
        case NodeKind::Handler:
          need_value(static_cast<const Handler&>(*n).value.get(), *n,
                     "handler value");
          break;
        case NodeKind::Compound: {
          const auto& c = static_cast<const CompoundNode&>(*n);
          need_value(c.head.get(), *n, "compound head");
          for (const NodePtr& a : c.args) need_value(a.get(), *n, "compound field");
          if (c.args.empty() || c.head->kind() == NodeKind::Compound) {
            violate(&GraphReport::reduced_pure, "compound-shape",
                    "compound must have a flat head and arguments", {n->serial()});
          }
          break;
        }
        default:
          break;
      }
    }
    const Node* outcomes[] = {state_.result.get(), state_.exception.get()};
    for (const Node* r : outcomes) {
      if (r && !r->is_value()) {
        violate(&GraphReport::reduced_pure, "reduced-purity",
                "final result is not reduced", {r->serial()});
      }
    }
  }

  const RewriteState& state_;
  GraphReport report_;
  std::unordered_map<const Node*, int> colour_;
  std::vector<const Node*> order_;
};

}  // namespace

std::string GraphReport::summary() const {
  std::ostringstream os;
  os << "acyclic=" << acyclic << " chain_linear=" << chain_linear
     << " reduced_pure=" << reduced_pure << " tree=" << tree
     << " nodes=" << node_count << " edges=" << edge_count
     << " thunks=" << thunk_count;
  for (const Violation& v : violations) {
    os << "\n  " << v.rule << ": " << v.description << " [";
    for (std::size_t i = 0; i < v.nodes.size(); ++i) {
      os << (i ? " " : "") << '#' << v.nodes[i];
    }
    os << ']';
  }
  return os.str();
}

GraphReport check(const RewriteState& state) { return Checker(state).run(); }

}  // namespace twist
