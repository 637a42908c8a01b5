#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mechsq/types.hpp"

namespace mechsq::cli {

enum ExitCode : int { kSuccess = 0, kFatal = 1, kPartial = 2 };

/// Parses "0.2,0.3,0.4" (whitespace allowed). An empty string is an empty list.
std::vector<Real> parse_value_list(const std::string& text);

/// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mechsq::cli
