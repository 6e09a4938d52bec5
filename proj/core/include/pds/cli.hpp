#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pds::cli {

// Exit codes: 0 success, 1 a verification failed, 2 usage error.
// args excludes the program name. Results go to out, diagnostics to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

// main() adapter; prints to stdout/stderr.
int dispatch(int argc, const char* const* argv);

}  // namespace pds::cli
