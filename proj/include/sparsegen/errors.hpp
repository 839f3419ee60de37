#pragma once

#include <stdexcept>
#include <string>

namespace sparsegen {

// Bad user input (CLI exit code 2).
struct argument_error : std::runtime_error {
    explicit argument_error(const std::string& what) : std::runtime_error(what) {}
};

// Request is valid but outside what this build can compute (CLI exit code 3).
struct capability_error : std::runtime_error {
    explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

// A library invariant broke (CLI exit code 4).
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace sparsegen
