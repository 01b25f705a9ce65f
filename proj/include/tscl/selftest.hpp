#pragma once

#include <ostream>

namespace tscl {

/// Quick randomised property checks over every module. Prints one line per
/// property and returns the number of failures.
int run_selftest(std::ostream& out, unsigned seed = 7);

} // namespace tscl
