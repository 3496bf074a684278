#pragma once

// Command-line front end. Every subcommand is a composition of library calls;
// this layer only resolves arguments, loads inputs and writes files.

#include <cstdint>
#include <iosfwd>
#include <string>

namespace diachron::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,          // bad arguments, unknown lemma, I/O failure
  kParseError = 2,     // malformed or empty corpus
  kEmptyDated = 3,     // chronological command on a corpus without dated documents
  kBadConfig = 4,      // bad lemma groups, config file or fixture plan
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "<command>_<target>_<fingerprint8>.<ext>", target reduced to a file-name
// safe form.
std::string output_name(const std::string& command, const std::string& target, std::uint64_t fingerprint,
                        const std::string& ext);

}  // namespace diachron::cli
