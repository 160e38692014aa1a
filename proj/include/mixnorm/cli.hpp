#pragma once

#include <iosfwd>

namespace mixnorm {

/// Entry point of the `mixnorm` tool. Exit codes: 0 success / feasible / PASS,
/// 1 infeasible / FAIL, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mixnorm
