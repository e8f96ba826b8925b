#include <charconv>
#include <sstream>

#include "twist/compiler.hpp"
#include "twist/lexer.hpp"

namespace twist {

namespace {

const char* kind_name(CombinatorKind k) {
  switch (k) {
    case CombinatorKind::Defined: return "defined";
    case CombinatorKind::DataTag: return "data-tag";
    case CombinatorKind::Builtin: return "builtin";
  }
  return "?";
}

std::string constant(const Node& n) {
  switch (n.kind()) {
    case NodeKind::Int:
      return std::to_string(static_cast<const IntNode&>(n).value);
    case NodeKind::Text:
      return encode_text(static_cast<const TextNode&>(n).value);
    case NodeKind::Combinator:
      return static_cast<const CombinatorNode&>(n).combinator->name;
    default:
      return "<" + std::string(to_string(n.kind())) + ">";
  }
}

std::string reg(int r) { return "r" + std::to_string(r); }

std::string reg_list(const std::vector<int>& regs) {
  std::string out = "[";
  for (std::size_t i = 0; i < regs.size(); ++i) {
    if (i) out += ' ';
    out += reg(regs[i]);
  }
  return out + "]";
}

struct MatchPrinter {
  std::ostream& os;
  void operator()(const BindArg& i) {
    os << "bind_arg " << i.arg << ' ' << reg(i.reg);
  }
  void operator()(const TestLiteral& i) {
    os << "test_literal " << reg(i.reg) << ' ' << constant(*i.literal);
  }
  void operator()(const TestTag& i) {
    os << "test_tag " << reg(i.reg) << ' ' << i.tag->name << ' ' << i.arity;
  }
  void operator()(const Project& i) {
    os << "project " << reg(i.reg) << ' ' << i.field << ' ' << reg(i.dest);
  }
};

struct BuildPrinter {
  std::ostream& os;
  void operator()(const LoadConst& i) {
    os << "load_const " << constant(*i.value) << ' ' << reg(i.reg);
  }
  void operator()(const MakeCompound& i) {
    os << "make_compound " << reg(i.head) << ' ' << reg_list(i.args) << ' '
       << reg(i.dest);
  }
  void operator()(const MakeThunk& i) {
    os << "make_thunk " << reg(i.head) << ' ' << reg_list(i.args) << ' '
       << reg(i.dest);
  }
  void operator()(const ReturnValue& i) { os << "return_value " << reg(i.reg); }
  void operator()(const ReturnChain& i) {
    os << "return_chain " << reg(i.first) << ' ' << reg(i.last);
  }
};

// ---- assembler --------------------------------------------------------------

class Assembler {
 public:
  Assembler(std::string_view text, const Program& program)
      : program_(program) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!line.empty()) lines_.emplace_back(line);
      start = end + 1;
    }
  }

  std::vector<AssembledCombinator> run() {
    std::vector<AssembledCombinator> out;
    while (i_ < lines_.size()) out.push_back(combinator());
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw CompileError(msg, {static_cast<int>(i_) + 1, 1}, "<listing>");
  }

  static std::vector<std::string> words(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      if (line[i] == '"') {
        ++j;
        while (j < line.size() && line[j] != '"') j += line[j] == '\\' ? 2 : 1;
        ++j;
      } else {
        while (j < line.size() && line[j] != ' ') ++j;
      }
      out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }

  int number(const std::string& w) const {
    int v = 0;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || p != w.data() + w.size()) fail("expected a number: " + w);
    return v;
  }

  int reg(const std::string& w) const {
    if (w.size() < 2 || w[0] != 'r') fail("expected a register: " + w);
    return number(w.substr(1));
  }

  std::vector<int> reg_list(const std::vector<std::string>& ws, std::size_t& k) const {
    std::vector<int> out;
    if (k >= ws.size() || ws[k].front() != '[') fail("expected a register list");
    std::string joined;
    while (k < ws.size()) {
      joined += ws[k] + " ";
      if (ws[k++].back() == ']') break;
    }
    std::string inner = joined.substr(1, joined.rfind(']') - 1);
    for (const std::string& w : words(inner)) out.push_back(reg(w));
    return out;
  }

  const Combinator& comb(const std::string& name) const {
    const Combinator* c = program_.find(name);
    if (!c) fail("unknown combinator " + name);
    return *c;
  }

  NodePtr constant(const std::string& w) const {
    if (w.front() == '"') return make_text(decode_text(w));
    if (std::isdigit(static_cast<unsigned char>(w.front())) ||
        (w.front() == '-' && w.size() > 1)) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
      if (ec == std::errc() && p == w.data() + w.size()) return make_int(v);
    }
    return comb(w).ref;
  }

  const std::string& line() const { return lines_[i_]; }

  AssembledCombinator combinator() {
    const std::string& head = line();
    const std::string prefix = "combinator ";
    auto colon = head.rfind(": ");
    if (head.rfind(prefix, 0) != 0 || colon == std::string::npos) {
      fail("expected a combinator header");
    }
    AssembledCombinator c;
    c.name = head.substr(prefix.size(), colon - prefix.size());
    comb(c.name);
    std::string rest = head.substr(colon + 2);
    ++i_;
    if (rest.rfind("builtin", 0) == 0) {
      c.kind = CombinatorKind::Builtin;
      return c;
    }
    if (rest.rfind("data-tag", 0) == 0) {
      c.kind = CombinatorKind::DataTag;
      return c;
    }
    if (rest.rfind("defined", 0) != 0) fail("unknown combinator kind");
    while (i_ < lines_.size() && line().rfind("  clause ", 0) == 0) {
      c.clauses.push_back(clause());
    }
    return c;
  }

  ClauseProgram clause() {
    auto ws = words(line());
    // clause <k> arity <n> registers <m>
    if (ws.size() != 6 || ws[2] != "arity" || ws[4] != "registers") {
      fail("malformed clause header");
    }
    ClauseProgram p;
    p.arity = number(ws[3]);
    p.registers = number(ws[5]);
    ++i_;
    if (i_ >= lines_.size() || words(line()) != std::vector<std::string>{"match"}) {
      fail("expected 'match'");
    }
    ++i_;
    while (i_ < lines_.size() && line().rfind("      ", 0) == 0) {
      p.match.push_back(match_instr(words(line())));
      ++i_;
    }
    if (i_ >= lines_.size() || words(line()) != std::vector<std::string>{"build"}) {
      fail("expected 'build'");
    }
    ++i_;
    while (i_ < lines_.size() && line().rfind("      ", 0) == 0) {
      p.build.push_back(build_instr(words(line())));
      ++i_;
    }
    return p;
  }

  void arity(const std::vector<std::string>& ws, std::size_t n) const {
    if (ws.size() != n) fail("wrong operand count for " + ws[0]);
  }

  MatchInstr match_instr(const std::vector<std::string>& ws) const {
    const std::string& op = ws[0];
    if (op == "bind_arg") {
      arity(ws, 3);
      return BindArg{number(ws[1]), reg(ws[2])};
    }
    if (op == "test_literal") {
      arity(ws, 3);
      return TestLiteral{reg(ws[1]), constant(ws[2])};
    }
    if (op == "test_tag") {
      arity(ws, 4);
      return TestTag{reg(ws[1]), &comb(ws[2]), number(ws[3])};
    }
    if (op == "project") {
      arity(ws, 4);
      return Project{reg(ws[1]), number(ws[2]), reg(ws[3])};
    }
    fail("unknown match instruction " + op);
  }

  BuildInstr build_instr(const std::vector<std::string>& ws) const {
    const std::string& op = ws[0];
    if (op == "load_const") {
      arity(ws, 3);
      return LoadConst{constant(ws[1]), reg(ws[2])};
    }
    if (op == "make_compound" || op == "make_thunk") {
      if (ws.size() < 4) fail("wrong operand count for " + op);
      int head = reg(ws[1]);
      std::size_t k = 2;
      std::vector<int> args = reg_list(ws, k);
      if (k + 1 != ws.size()) fail("wrong operand count for " + op);
      int dest = reg(ws[k]);
      if (op == "make_compound") return MakeCompound{head, std::move(args), dest};
      return MakeThunk{head, std::move(args), dest};
    }
    if (op == "return_value") {
      arity(ws, 2);
      return ReturnValue{reg(ws[1])};
    }
    if (op == "return_chain") {
      arity(ws, 3);
      return ReturnChain{reg(ws[1]), reg(ws[2])};
    }
    fail("unknown build instruction " + op);
  }

  const Program& program_;
  std::vector<std::string> lines_;
  std::size_t i_ = 0;
};

}  // namespace

std::string disassemble(const Combinator& c) {
  std::ostringstream os;
  os << "combinator " << c.name << ": " << kind_name(c.kind);
  if (c.kind == CombinatorKind::Builtin) {
    os << ", arity " << c.builtin_arity << '\n';
    return os.str();
  }
  os << ", " << c.clauses.size() << " clauses\n";
  for (std::size_t k = 0; k < c.clauses.size(); ++k) {
    const ClauseProgram& p = c.clauses[k];
    os << "  clause " << k << " arity " << p.arity << " registers "
       << p.registers << '\n';
    os << "    match\n";
    for (const MatchInstr& m : p.match) {
      os << "      ";
      std::visit(MatchPrinter{os}, m);
      os << '\n';
    }
    os << "    build\n";
    for (const BuildInstr& b : p.build) {
      os << "      ";
      std::visit(BuildPrinter{os}, b);
      os << '\n';
    }
  }
  return os.str();
}

std::string disassemble(const Program& program) {
  std::string out;
  for (const auto& c : program.combinators()) out += disassemble(*c);
  return out;
}

std::vector<AssembledCombinator> assemble(std::string_view listing,
                                          const Program& program) {
  return Assembler(listing, program).run();
}

}  // namespace twist
