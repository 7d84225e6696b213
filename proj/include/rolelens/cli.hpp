#pragma once

#include <ostream>

namespace rolelens {

// Subcommands:
//   build --config <file> --out <dir> [--seed N]
//   serve --store <dir> --port N [--host H] [--static <dir>]   (STORE / PORT env as defaults)
//   eval  --store <dir>
// Exit codes: 0 ok, 1 runtime failure, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rolelens
