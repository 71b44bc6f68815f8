#pragma once

#include <stdexcept>
#include <string>

namespace nhg {

enum class ErrorKind {
    collinear,
    torus_too_sparse,
    not_enough_points,
    duplicate_point,
    unknown_id,
    outside_window,
    infeasible_base,
    undefined,
    too_large,
    no_feasible_lattice,
    infeasible_alpha,
    empty_sample_set,
    invalid_argument,
    parse_error,
    io_error,
    internal,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::collinear: return "Collinear";
        case ErrorKind::torus_too_sparse: return "TorusTooSparse";
        case ErrorKind::not_enough_points: return "NotEnoughPoints";
        case ErrorKind::duplicate_point: return "DuplicatePoint";
        case ErrorKind::unknown_id: return "UnknownId";
        case ErrorKind::outside_window: return "OutsideWindow";
        case ErrorKind::infeasible_base: return "InfeasibleBase";
        case ErrorKind::undefined: return "Undefined";
        case ErrorKind::too_large: return "TooLarge";
        case ErrorKind::no_feasible_lattice: return "NoFeasibleLattice";
        case ErrorKind::infeasible_alpha: return "InfeasibleAlpha";
        case ErrorKind::empty_sample_set: return "EmptySampleSet";
        case ErrorKind::invalid_argument: return "InvalidArgument";
        case ErrorKind::parse_error: return "ParseError";
        case ErrorKind::io_error: return "IoError";
        case ErrorKind::internal: return "InternalError";
    }
    return "Error";
}

// All library failures are reported through this type; kind() lets callers
// (the CLI in particular) map a failure to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline void require(bool ok, ErrorKind kind, const std::string& what) {
    if (!ok) throw Error(kind, what);
}

}  // namespace nhg
