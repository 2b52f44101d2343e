#pragma once

#include <string>
#include <vector>

namespace lml::cli {

/// Entry point behind the `lml` binary. Exit codes: 0 success, 2
/// configuration/usage error, 1 runtime error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without program name

/// Reads a "key = value" config file ('#' comments) into long-option tokens
/// ("--key", "value", ...) so command-line flags can override it.
std::vector<std::string> config_file_to_args(const std::string& path);

}  // namespace lml::cli
