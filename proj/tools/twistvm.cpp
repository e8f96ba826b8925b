#include <iostream>

#include <CLI11.hpp>

#include "twist/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"twistvm: run scripts on the twisted-thunk rewriting machine"};
  app.require_subcommand(1);

  twist::RunConfig config;
  std::string script;
  std::string trace_dir;
  std::vector<std::string> includes;
  std::uint64_t step_limit = 0;

  CLI::App* run = app.add_subcommand("run", "run a script's main");
  run->add_option("FILE", script, "script to run")->required();
  run->add_flag("--check", config.checked, "check graph invariants after every step");
  run->add_option("--trace-dot", trace_dir, "write step-<k>.dot snapshots to DIR");
  run->add_flag("--bytecode", config.dump_bytecode, "print the disassembly and exit");
  run->add_option("--include", includes, "extra import search directory");
  run->add_option("--step-limit", step_limit, "stop after N rewrite steps")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> repl_includes;
  CLI::App* repl = app.add_subcommand("repl", "interactive session");
  repl->add_option("--include", repl_includes, "extra import search directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the compile-error status.
    return app.exit(e) == 0 ? 0 : twist::kExitCompileError;
  }

  if (*run) {
    config.script = script;
    if (!trace_dir.empty()) config.trace_dir = trace_dir;
    if (step_limit > 0) config.step_limit = step_limit;
    for (const auto& i : includes) config.include_dirs.emplace_back(i);
    return twist::run_file(config, std::cout, std::cerr);
  }
  std::vector<twist::fs::path> dirs(repl_includes.begin(), repl_includes.end());
  return twist::run_repl(std::cin, std::cout, std::cerr, dirs);
}
