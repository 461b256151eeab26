#pragma once

#include <iosfwd>

namespace complag::cli {

/// Exit codes.
enum : int {
    kOk = 0,
    kUsage = 2,        // bad flags, unreadable or invalid system file
    kDerivation = 3,   // derivation error, or a must-pass verify check failed
    kPaperMode = 4,    // simulate asked for paper mode
    kSingular = 5,     // integration stopped at a singular locus or mass matrix
};

/// Runs the command line.  Documents and CSV go to `out` unless --out is
/// given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace complag::cli
