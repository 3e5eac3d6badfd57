#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace saradon {

/// Entry point of the `sa_radon` tool. args excludes the program name.
/// Returns 0 when the requested artifact was written, 2 on invalid input or a
/// library error, 1 on anything unexpected.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace saradon
