#pragma once

#include <cstdint>
#include <string>

#include "twist/resolve.hpp"

namespace ref {

enum class Status { Value, Uncaught, Diverged };

struct Result {
  Status status = Status::Value;
  std::string value;   // rendered value or exception
  std::string output;  // everything `print` wrote
};

/// Naive evaluator over resolved terms: eager, arguments right to left,
/// application by substituting argument values into clause bodies. Shares
/// nothing with the engine beyond the resolver's output.
Result evaluate(const twist::ResolvedProgram& program,
                const std::string& entry = "main",
                std::uint64_t budget = 2'000'000);

}  // namespace ref
