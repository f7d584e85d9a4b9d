#pragma once

#include <ostream>

namespace kkcli {

// exit codes: 0 ok or open, 1 a check failed, 2 bad usage, 3 bad input
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kkcli
