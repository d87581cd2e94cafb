#pragma once

#include <stdexcept>
#include <string>

namespace drawgraph {

// File-system and decode failures. CLI maps these to exit code 2.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Schema violations, inconsistent data, broken invariants. Exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace drawgraph
