#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace geostat {

// Base class for all library errors. Carries a stable machine-readable name
// (the CLI prints it verbatim on stderr and maps it to an exit code).
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

struct SingularMetric : Error {
    explicit SingularMetric(const std::string& w) : Error("SingularMetric", w) {}
};

struct BoundaryProximity : Error {
    explicit BoundaryProximity(const std::string& w) : Error("BoundaryProximity", w) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& w) : Error("DimensionMismatch", w) {}
};

struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& w) : Error("OutOfDomain", w) {}
};

struct NotApplicable : Error {
    explicit NotApplicable(const std::string& w) : Error("NotApplicable", w) {}
};

struct InadmissibleConstants : Error {
    explicit InadmissibleConstants(const std::string& w) : Error("InadmissibleConstants", w) {}
};

struct QuadratureMismatch : Error {
    explicit QuadratureMismatch(const std::string& w) : Error("QuadratureMismatch", w) {}
};

struct NonFiniteValue : Error {
    explicit NonFiniteValue(const std::string& w) : Error("NonFiniteValue", w) {}
};

struct GradientUnavailable : Error {
    explicit GradientUnavailable(const std::string& w) : Error("GradientUnavailable", w) {}
};

struct DriftExceeded : Error {
    explicit DriftExceeded(const std::string& w) : Error("DriftExceeded", w) {}
};

struct InvalidInitialState : Error {
    explicit InvalidInitialState(const std::string& w) : Error("InvalidInitialState", w) {}
};

struct Unclassifiable : Error {
    explicit Unclassifiable(const std::string& w) : Error("Unclassifiable", w) {}
};

// Catch-all for malformed arguments that have no dedicated category above.
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& w) : Error("InvalidArgument", w) {}
};

}  // namespace geostat
