#pragma once

#include "arctelescope/catalog.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace arctelescope::cli {

enum ExitCode : int { kPass = 0, kFailure = 1, kUsage = 2, kConstraint = 3 };

/// Runs the command line `args` (without the program name) against `registry`.
int run(const Registry& registry, const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Report document for already computed results, as pretty-printed JSON.
std::string json_document(const std::vector<RecordResult>& results, unsigned bits);

}  // namespace arctelescope::cli
