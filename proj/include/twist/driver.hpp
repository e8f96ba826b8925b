#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twist/engine.hpp"
#include "twist/program.hpp"

namespace twist {

namespace fs = std::filesystem;

enum ExitStatus : int {
  kExitOk = 0,
  kExitUncaught = 1,
  kExitCompileError = 2,
  kExitStepLimit = 3,
  kExitInternal = 4,
};

struct RunConfig {
  fs::path script;
  std::vector<fs::path> include_dirs;
  bool checked = false;
  std::optional<fs::path> trace_dir;
  bool dump_bytecode = false;
  std::optional<std::uint64_t> step_limit;
};

/// Where the shipped prelude lives when no include path provides it.
fs::path default_prelude_dir();

/// The include path list actually searched: the given ones, then the
/// default prelude directory.
std::vector<fs::path> search_path(std::span<const fs::path> include_dirs);

/// Load, resolve, lift and compile. Throws CompileError.
Program compile_file(const fs::path& script,
                     std::span<const fs::path> include_dirs = {});
Program compile_text(std::string_view source,
                     std::span<const fs::path> include_dirs = {},
                     const fs::path& base_dir = fs::current_path());

/// Compiles and runs `main`, printing its value. Returns the exit status.
int run_file(const RunConfig& config, std::ostream& out, std::ostream& err);

struct Evaluation {
  RunStatus status = RunStatus::Value;
  std::string value;  // rendered result or exception
  std::uint64_t steps = 0;
};

/// Compiles source text and runs `main` under the given options.
Evaluation evaluate_text(std::string_view source, const RunOptions& options = {},
                         std::span<const fs::path> include_dirs = {});

/// Interactive session: accumulated declarations plus one-line evaluation.
class Session {
 public:
  explicit Session(std::vector<fs::path> include_dirs = {});

  struct Reply {
    bool ok = true;
    std::string text;  // rendered value, or the error message
  };

  /// A declaration line extends the session (empty reply text); an
  /// expression line is evaluated. `out` receives `print` output.
  Reply eval(std::string_view line, std::ostream& out);

  const std::string& source() const { return source_; }

 private:
  std::vector<fs::path> include_dirs_;
  std::string source_;
};

/// Read-eval-print loop over a stream until end of input.
int run_repl(std::istream& in, std::ostream& out, std::ostream& err,
             std::span<const fs::path> include_dirs = {});

}  // namespace twist
