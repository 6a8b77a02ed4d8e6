#pragma once

#include <stdexcept>
#include <string>

namespace towerplan {

// Invalid parameter or configuration value.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mismatched grid/vector/layer dimensions between otherwise valid objects.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed text input (CSV, config file); message carries line/column.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File is not the expected kind at all (wrong magic or version).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File has the right magic but a structurally broken payload
// (truncation, inconsistent dimensions, non-numeric data).
struct CorruptionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (cannot open/read/write).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dataset-level failure (e.g. nothing left after cleaning).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace towerplan
