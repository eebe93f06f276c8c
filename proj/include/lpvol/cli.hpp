#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lpvol/oracles.hpp"
#include "lpvol/specfun.hpp"

namespace lpvol::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kOk = 0, kCheckFailed = 1, kInvalidArgs = 2, kQuadratureFailure = 3 };

/// Settings read from a key=value file; see README for the keys.
struct FileConfig {
    QuadConfig quad;
    McConfig mc;
};

/// Parses `key = value` lines. Blank lines and text after '#' are ignored.
FileConfig parse_config(std::istream& in);
FileConfig load_config(const std::string& path);

/// Comma separated numbers, or the name of a file holding numbers separated by commas or whitespace.
std::vector<double> parse_number_list(const std::string& text);

/// Thread cap from LPVOL_THREADS, falling back to the hardware concurrency.
int thread_cap();

/// Runs one command line (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lpvol::cli
