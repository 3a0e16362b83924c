#ifndef EMOINT_TOOLS_CLI_H_
#define EMOINT_TOOLS_CLI_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace emoint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Entry point shared by the executable and the integration tests. args[0]
// is the program name.
int Run(const std::vector<std::string>& args);

// Runs fn(0..n-1) on up to `jobs` threads (0 = hardware concurrency).
// Results are written by index, so callers see manifest order regardless of
// scheduling. The exception from the lowest failing index is rethrown.
void ParallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace emoint::cli

#endif  // EMOINT_TOOLS_CLI_H_
