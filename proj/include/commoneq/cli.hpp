#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace commoneq::cli {

// Exit codes: 0 ok, 1 parse/usage error, 2 hypothesis not applicable,
// 3 no witness for this case, 4 internal assertion failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitNotApplicable = 2;
inline constexpr int kExitNoWitness = 3;
inline constexpr int kExitInternal = 4;

// Runs the CLI on the given arguments (excluding argv[0]); results go to
// out, diagnostics to err. Identical arguments (and environment) produce
// byte-identical output.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run_main(int argc, char** argv);

}  // namespace commoneq::cli
