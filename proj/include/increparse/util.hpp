#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace increparse {

// Data-level failure (malformed input, validation, misaligned corpora).
// The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pipeline read a token beyond its declared delay horizon.
// The CLI maps this to exit code 3.
struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

// Level comes from INCREPARSE_LOG (debug|info|warn|error); default warn.
LogLevel log_level();
void log(LogLevel level, const std::string& message);

inline void log_warn(const std::string& m) { log(LogLevel::Warn, m); }
inline void log_info(const std::string& m) { log(LogLevel::Info, m); }

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

// Strict integer parse; returns false on garbage or overflow.
bool parse_int(std::string_view s, int& out);

}  // namespace increparse
