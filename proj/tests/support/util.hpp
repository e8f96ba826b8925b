#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "twist/compiler.hpp"
#include "twist/driver.hpp"
#include "twist/engine.hpp"
#include "twist/parser.hpp"
#include "twist/resolve.hpp"

#ifndef TWIST_SOURCE_DIR
#define TWIST_SOURCE_DIR "."
#endif

namespace testutil {

inline std::filesystem::path source_dir() { return TWIST_SOURCE_DIR; }
inline std::filesystem::path corpus_dir() { return source_dir() / "tests" / "corpus"; }
inline std::filesystem::path golden_dir() { return source_dir() / "tests" / "golden"; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Resolved (not yet lifted) form of a script, System predeclared.
inline twist::ResolvedProgram resolve_text(const std::string& source) {
  auto modules = twist::load_source(source, "<test>", std::filesystem::current_path(),
                                    twist::search_path({}));
  auto predeclared = twist::system_symbols();
  return twist::resolve(modules, predeclared);
}

struct Run {
  twist::RunStatus status = twist::RunStatus::Value;
  std::string value;
  std::string output;
  std::uint64_t steps = 0;
};

/// Compiles and runs `main`, capturing `print` output; the program is
/// released before returning.
inline Run run(const std::string& source, bool checked = false,
               std::optional<std::uint64_t> limit = std::nullopt) {
  std::ostringstream out;
  twist::RunOptions options;
  options.checked = checked;
  options.step_limit = limit;
  options.out = &out;
  twist::Evaluation e = twist::evaluate_text(source, options);
  return {e.status, e.value, out.str(), e.steps};
}

/// Runs a script file through the CLI driver in-process.
struct FileRun {
  int code = 0;
  std::string out;
  std::string err;
};

inline FileRun run_file(const twist::RunConfig& config) {
  std::ostringstream out;
  std::ostringstream err;
  int code = twist::run_file(config, out, err);
  return {code, out.str(), err.str()};
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("twist-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
