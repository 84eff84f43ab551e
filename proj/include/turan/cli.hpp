#pragma once

// Command-line front end. Every result is written to `out` as one JSON
// object per line; human-readable summaries go to `err`.
//
// Exit codes: 0 success (or a valid certificate), 1 invalid certificate or
// failed rounding, 2 usage error, 3 I/O or solver error.

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace turan {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Environment variable naming the solver when --solver is not given.
inline constexpr const char* kSolverEnv = "TURAN_SDP_SOLVER";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ProcessResult {
    bool timed_out = false;
    int exit_status = -1;  // valid when !timed_out; -1 if killed by a signal
};

/// Runs `argv` with stdout redirected to stderr, killing it after
/// `timeout`. Throws IoError if it cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::seconds timeout);

}  // namespace turan
