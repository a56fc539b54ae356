#pragma once

#include <iosfwd>

namespace ecpf::cli {

// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ecpf::cli
