// Error hierarchy shared by every module.  All failures raised by the library
// derive from Error so callers can catch one type at the CLI boundary.
#pragma once

#include <stdexcept>
#include <string>

namespace contactlab {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed user input: bad chart name, dimension mismatch, out-of-range
// parameter, unknown fixture or builtin.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

// Operation asked of a chart that does not carry the needed structure,
// e.g. a contact form on a symplectization chart.
class UnsupportedFormError : public Error {
public:
    explicit UnsupportedFormError(const std::string& what) : Error(what) {}
};

// Structure tensors of a chart failed a rank check at some point.
class DegenerateChartError : public Error {
public:
    explicit DegenerateChartError(const std::string& what) : Error(what) {}
};

// A linear solve that must be consistent produced a residual above its
// bound.  Signals a bug in chart data or a gradient, not bad user input.
class InconsistentSystemError : public Error {
public:
    explicit InconsistentSystemError(const std::string& what) : Error(what) {}
};

// Parametrized patch whose jacobian drops rank at a sample point.
class DegeneratePatchError : public Error {
public:
    explicit DegeneratePatchError(const std::string& what) : Error(what) {}
};

// An operation's mathematical precondition failed at runtime, e.g. a
// subspace that was required to sit inside the contact hyperplane.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

// Trajectory escaped the trusted region during integration.  Carries the
// last time at which the state was still finite and in range.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, double last_valid_time)
        : Error(what), last_valid_time_(last_valid_time) {}
    double last_valid_time() const { return last_valid_time_; }

private:
    double last_valid_time_;
};

// A lifted object left the finite symplectization window it was certified on.
class WindowViolationError : public Error {
public:
    explicit WindowViolationError(const std::string& what) : Error(what) {}
};

} // namespace contactlab
