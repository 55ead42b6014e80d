#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pulsedyn {

// Error carrying a stable machine-readable kind ("missing-parameter",
// "mass-matrix-singular", ...) next to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

} // namespace pulsedyn
