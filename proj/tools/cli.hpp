#pragma once
#include <ostream>
#include <string>
#include <vector>

namespace picwb {

// Exit status: 0 success / member / equivalent, 1 non-member / inequivalent, 2 usage, input or cap error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace picwb
