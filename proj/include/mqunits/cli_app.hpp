#pragma once

#include <iosfwd>

namespace mqunits {

// Command-line front end.  Stable exit codes:
//   0  success
//   2  shortfall (fewer results than requested below the bound)
//   3  a verified assertion failed (counterexample mode)
//   64 flag misuse / unknown subcommand or lemma id
//   65 bad mathematical input (non-prime, nonconforming triple, bad ell)
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace mqunits
