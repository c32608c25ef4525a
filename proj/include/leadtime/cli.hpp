#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace leadtime {

// Runs one CLI invocation; args excludes the program name. Returns the
// process exit status: 0 success, 1 input error, 2 computation error.
// Scalar results go to `out` at 6 significant digits; CSV payloads keep
// full precision.
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace leadtime
