#pragma once

#include <stdexcept>
#include <string>

namespace pbc {

/// Base class of every error raised by the library. Carries an optional
/// pipeline stage tag that is prepended to the message once set.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message)
        : std::runtime_error(message), message_(message) {}

    const char* what() const noexcept override { return full_.empty() ? message_.c_str() : full_.c_str(); }

    const std::string& stage() const noexcept { return stage_; }
    const std::string& message() const noexcept { return message_; }

    void set_stage(const std::string& stage) {
        stage_ = stage;
        full_ = "[" + stage + "] " + message_;
    }

private:
    std::string message_;
    std::string stage_;
    std::string full_;
};

#define PBC_DEFINE_ERROR(Name)                                       \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& message) : Error(message) {} \
    }

/// A triplet has two coincident consecutive points.
PBC_DEFINE_ERROR(ZeroLengthSegment);
/// Argument outside its documented domain.
PBC_DEFINE_ERROR(DomainError);
/// Point cloud unusable for graph construction (duplicates, too few points).
PBC_DEFINE_ERROR(DegenerateCloud);
/// Brute-force oracle called on a graph above its size cap.
PBC_DEFINE_ERROR(InstanceTooLarge);
/// Fewer distinct feature vectors than requested clusters.
PBC_DEFINE_ERROR(TooFewDistinctVectors);
/// Dataset has no intersection locus.
PBC_DEFINE_ERROR(NoIntersection);
/// Malformed input file (CSV, config, spec).
PBC_DEFINE_ERROR(ParseError);

#undef PBC_DEFINE_ERROR

}  // namespace pbc
