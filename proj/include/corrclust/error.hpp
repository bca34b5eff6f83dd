#pragma once

#include <stdexcept>
#include <string>

namespace corrclust {

enum class errc {
    inconsistent_labeling,
    size_mismatch,
    non_finite,
    out_of_range,
    incomplete_cross,
    parse_error,
    missing_pair,
    duplicate_pair,
    too_large,
    empty_batch,
    insufficient_pairs,
    dimension_mismatch,
    unmapped_class,
    unassigned,
    empty_instance,
    empty_spec,
    invalid_argument,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::inconsistent_labeling: return "InconsistentLabeling";
        case errc::size_mismatch: return "SizeMismatch";
        case errc::non_finite: return "NonFinite";
        case errc::out_of_range: return "OutOfRange";
        case errc::incomplete_cross: return "IncompleteCross";
        case errc::parse_error: return "ParseError";
        case errc::missing_pair: return "MissingPair";
        case errc::duplicate_pair: return "DuplicatePair";
        case errc::too_large: return "TooLarge";
        case errc::empty_batch: return "EmptyBatch";
        case errc::insufficient_pairs: return "InsufficientPairs";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::unmapped_class: return "UnmappedClass";
        case errc::unassigned: return "Unassigned";
        case errc::empty_instance: return "EmptyInstance";
        case errc::empty_spec: return "EmptySpec";
        case errc::invalid_argument: return "InvalidArgument";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, errc code, const std::string& message) {
    if (!condition) fail(code, message);
}

}  // namespace corrclust
