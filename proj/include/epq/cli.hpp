#pragma once

#include "epq/evaluator.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace epq::cli {

inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitError = 2;

/// Runs one command line (argv[0] is the program name). Exit code 0/1 for true/false
/// verdicts (0 for other successful commands), 2 on any error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// An instance bundle is a directory holding sentence.epq and structure.str.
void write_bundle(const std::string& dir, const Instance& instance);
Instance read_bundle(const std::string& dir);

} // namespace epq::cli
