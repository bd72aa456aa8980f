#pragma once

#include <stdexcept>
#include <string>

namespace pandora {

// Bad input data or a violated operation contract (CLI exit code 2).
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// A size/state-space guard tripped; the caller should fall back to sampling
// or raise the guard explicitly (CLI exit code 3).
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant broke; always a bug (CLI exit code 4).
struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pandora
