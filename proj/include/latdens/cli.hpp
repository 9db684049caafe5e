#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace latdens {

// Runs one latdens command; args excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latdens
