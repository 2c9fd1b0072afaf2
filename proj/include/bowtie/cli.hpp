#pragma once

namespace bowtie {

/// Entry point for the command-line tool. Exit codes: 0 pass, 1 check
/// failure, 2 usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace bowtie
