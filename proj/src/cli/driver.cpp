#include "twist/driver.hpp"

#include <fstream>
#include <iostream>

#include "twist/compiler.hpp"
#include "twist/parser.hpp"

#ifndef TWIST_PRELUDE_DIR
#define TWIST_PRELUDE_DIR "lib"
#endif

namespace twist {

namespace {

constexpr const char* kReplDef = "<repl>";

Program compile_modules(const std::vector<SurfaceModule>& modules) {
  std::vector<Symbol> predeclared = system_symbols();
  return compile_program(resolve(modules, predeclared));
}

void write_snapshot(const fs::path& dir, const RewriteState& state) {
  DotSnapshot snap = emit_dot(state, DotStyle::Twisted);
  fs::path file = dir / ("step-" + std::to_string(snap.step) + ".dot");
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << snap.text;
}

}  // namespace

fs::path default_prelude_dir() {
  if (const char* env = std::getenv("TWIST_PRELUDE_DIR")) return env;
  return TWIST_PRELUDE_DIR;
}

std::vector<fs::path> search_path(std::span<const fs::path> include_dirs) {
  std::vector<fs::path> out(include_dirs.begin(), include_dirs.end());
  out.push_back(default_prelude_dir());
  return out;
}

Program compile_file(const fs::path& script,
                     std::span<const fs::path> include_dirs) {
  return compile_modules(load_modules(script, search_path(include_dirs)));
}

Program compile_text(std::string_view source,
                     std::span<const fs::path> include_dirs,
                     const fs::path& base_dir) {
  return compile_modules(
      load_source(source, "<input>", base_dir, search_path(include_dirs)));
}

Evaluation evaluate_text(std::string_view source, const RunOptions& options,
                         std::span<const fs::path> include_dirs) {
  Program program = compile_text(source, include_dirs);
  if (!program.lifted.find_def("main")) throw CompileError("no main definition");
  Engine engine(program, options);
  Outcome out = engine.run_definition("main");
  return {out.status, out.value ? render(*out.value) : std::string(), out.steps};
}

int run_file(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Program program = compile_file(config.script, config.include_dirs);
    if (config.dump_bytecode) {
      out << disassemble(program);
      return kExitOk;
    }
    const ResolvedDef* main = program.lifted.find_def("main");
    if (!main) {
      throw CompileError("no main definition", {}, config.script.string());
    }

    RunOptions options;
    options.checked = config.checked;
    options.step_limit = config.step_limit;
    options.out = &out;
    if (config.trace_dir) {
      fs::create_directories(*config.trace_dir);
      options.observer = [dir = *config.trace_dir](const RewriteState& s) {
        write_snapshot(dir, s);
      };
    }
    Engine engine(program, options);
    RewriteState state = wire_root(main->body, program);
    Outcome result = engine.run(state);
    switch (result.status) {
      case RunStatus::Value: {
        const Combinator* nop = program.find(std::string(kSystemNamespace) + "::nop");
        const bool printed = result.value->kind() == NodeKind::Combinator &&
                             static_cast<const CombinatorNode&>(*result.value)
                                     .combinator == nop;
        if (!printed) out << render(*result.value) << '\n';
        out.flush();
        return kExitOk;
      }
      case RunStatus::Uncaught:
        out.flush();
        err << "uncaught exception: " << render(*result.value) << '\n';
        return kExitUncaught;
      case RunStatus::StepLimit:
        out.flush();
        err << "step limit of " << *config.step_limit << " exhausted\n";
        return kExitStepLimit;
    }
  } catch (const CompileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompileError;
  } catch (const InternalFault& e) {
    err << "internal fault: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

Session::Session(std::vector<fs::path> include_dirs)
    : include_dirs_(search_path(include_dirs)),
      source_("import \"prelude.eg\"\n") {}

Session::Reply Session::eval(std::string_view line, std::ostream& out) {
  try {
    std::vector<Token> tokens = tokenize(line);
    if (tokens.empty()) return {};
    const Token& first = tokens.front();
    const bool declaration =
        first.kind == TokenKind::Keyword && !first.is_keyword("try");
    if (declaration) {
      std::string extended = source_ + std::string(line) + "\n";
      compile_modules(load_source(extended, "<repl>", fs::current_path(),
                                  include_dirs_));
      source_ = std::move(extended);
      return {};
    }

    Expr expr = parse_expression(tokens);
    std::vector<SurfaceModule> modules =
        load_source(source_, "<repl>", fs::current_path(), include_dirs_);
    Decl def;
    def.kind = Decl::Kind::Def;
    def.name = kReplDef;
    def.body = std::move(expr);
    modules.back().decls.push_back(std::move(def));
    Program program = compile_modules(modules);

    RunOptions options;
    options.out = &out;
    Engine engine(program, options);
    RewriteState state = wire_root(Term::constant(kReplDef), program);
    Outcome result = engine.run(state);
    if (result.status == RunStatus::Uncaught) {
      return {false, "uncaught exception: " + render(*result.value)};
    }
    return {true, render(*result.value)};
  } catch (const std::exception& e) {
    return {false, std::string("error: ") + e.what()};
  }
}

int run_repl(std::istream& in, std::ostream& out, std::ostream& err,
             std::span<const fs::path> include_dirs) {
  Session session({include_dirs.begin(), include_dirs.end()});
  std::string line;
  while (true) {
    out << ">> " << std::flush;
    if (!std::getline(in, line)) break;
    Session::Reply reply = session.eval(line, out);
    if (reply.text.empty()) continue;
    (reply.ok ? out : err) << reply.text << std::endl;
  }
  out << '\n';
  return kExitOk;
}

}  // namespace twist
