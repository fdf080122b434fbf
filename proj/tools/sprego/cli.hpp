#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sprego::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    bool interactive = false;  // show the REPL prompt
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, Streams io);

}  // namespace sprego::cli
