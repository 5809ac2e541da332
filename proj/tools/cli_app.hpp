#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace horolab {

/// Parse `args` (without the program name) and run the experiment.
/// Exit codes: 0 success, 1 falsified claim, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace horolab
