#pragma once

#include <stdexcept>
#include <string>

namespace saradon {

enum class ErrorKind {
    invalid_order,
    invalid_projection,
    domain,
    numeric,
    empty_region,
    insufficient_shift_set,
    uncertified_projection,
    duplicate_node,
    not_positive_definite,
    degenerate_signal,
    singular_system,
    determinability,
    degenerate_reference,
    config,
    parse,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace saradon
