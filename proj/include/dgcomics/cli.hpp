#pragma once

#include <iosfwd>

namespace dgc::cli {

// Exit codes: 0 success, 1 invalid input or flags, 2 file or store errors.
// Errors go to `err` as a single line starting with "ERR:".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dgc::cli
