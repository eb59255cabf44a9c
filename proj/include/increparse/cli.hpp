#pragma once

namespace increparse {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 contract violation.
int run_cli(int argc, const char* const* argv);

}  // namespace increparse
