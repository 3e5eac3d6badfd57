#include "saradon/error.hpp"

namespace saradon {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_order: return "invalid order";
        case ErrorKind::invalid_projection: return "invalid projection";
        case ErrorKind::domain: return "domain error";
        case ErrorKind::numeric: return "numeric error";
        case ErrorKind::empty_region: return "empty region";
        case ErrorKind::insufficient_shift_set: return "insufficient shift set";
        case ErrorKind::uncertified_projection: return "uncertified projection";
        case ErrorKind::duplicate_node: return "duplicate node";
        case ErrorKind::not_positive_definite: return "not positive definite";
        case ErrorKind::degenerate_signal: return "degenerate signal";
        case ErrorKind::singular_system: return "singular system";
        case ErrorKind::determinability: return "determinability failure";
        case ErrorKind::degenerate_reference: return "degenerate reference";
        case ErrorKind::config: return "config error";
        case ErrorKind::parse: return "parse error";
    }
    return "error";
}

}  // namespace saradon
