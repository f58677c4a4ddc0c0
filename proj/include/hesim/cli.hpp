// hesim command line: `ecp run|sweep`, `hqis run|tables|audit`.
//
// Exit codes are 0 (success), 2 (bad input or unwritable output) and 3
// (numerical or verification failure). HESIM_OUTPUT_DIR, when set, is where
// relative --output paths and the default sweep file land.

#pragma once

#include <iosfwd>

namespace hesim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitFailure = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace hesim::cli
