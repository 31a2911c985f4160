#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cb {

enum class ErrorKind {
    InvalidArgument,
    DegreeMismatch,
    ZeroForm,
    DegreeTooLarge,
    SeparabilityFailure,
    ZeroResultant,
    DegenerateForm,
    SingularFibre,
    CannotCertify,
    ToleranceNotMet,
    Overflow,
    Parse,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Surface validation collects every failed invariant; kind() is the first one.
class ValidationError : public Error {
public:
    ValidationError(std::vector<ErrorKind> failures, const std::string& what)
        : Error(failures.front(), what), failures_(std::move(failures)) {}

    const std::vector<ErrorKind>& failures() const noexcept { return failures_; }
    bool has(ErrorKind k) const noexcept {
        for (auto f : failures_)
            if (f == k)
                return true;
        return false;
    }

private:
    std::vector<ErrorKind> failures_;
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::ZeroForm: return "ZeroForm";
    case ErrorKind::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorKind::SeparabilityFailure: return "SeparabilityFailure";
    case ErrorKind::ZeroResultant: return "ZeroResultant";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::SingularFibre: return "SingularFibre";
    case ErrorKind::CannotCertify: return "CannotCertify";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

} // namespace cb
