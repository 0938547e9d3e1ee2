#pragma once

/// \file cli.hpp
/// The `rerc` command line: run, eval, ablation and the single-stage
/// decompose / screen / read / compare commands that read JSON on stdin.
///
/// Exit codes: 0 ok, 1 operational error, 2 usage error.

#include <iosfwd>

namespace rerc {

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace rerc
