#pragma once

#include <stdexcept>
#include <string>

namespace tomitafock {

// Bad input: schema violations, malformed words, impossible run configs.
// The CLI maps these to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric contract failed: cross-check disagreement or residual above tolerance.
// The CLI maps these to exit code 1.
struct ToleranceError : std::runtime_error {
    explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tomitafock
