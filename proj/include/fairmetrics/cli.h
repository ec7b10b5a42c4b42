#ifndef FAIRMETRICS_CLI_H_
#define FAIRMETRICS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace fairmetrics {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
// Unreachable FMR target or no computable result; partial output is emitted.
inline constexpr int kExitDegraded = 2;

// Environment variable naming the directory for relative --out paths.
inline constexpr const char* kOutputDirEnv = "FAIRMETRICS_OUTPUT_DIR";

// Runs the tool. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace fairmetrics

#endif  // FAIRMETRICS_CLI_H_
