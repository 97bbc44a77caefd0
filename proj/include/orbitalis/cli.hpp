#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace orbitalis {

/// Command-line front door. Returns 0 on success, 1 on usage/validation
/// errors, 2 on numerical non-convergence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbitalis
