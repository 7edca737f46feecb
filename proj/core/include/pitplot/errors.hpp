#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pitplot {

/// One validation finding. `project_id` is empty for portfolio- or
/// config-level problems.
struct Diagnostic {
    std::string project_id;
    std::string field;
    std::string message;

    std::string to_string() const;
    bool operator==(const Diagnostic&) const = default;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a type invariant. Carries every finding, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);
    ValidationError(std::string project_id, std::string field, std::string message);

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// A referenced project id does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// A metric or aggregate is undefined for its inputs (PI with zero cost,
/// exclusion from a one-project portfolio, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace pitplot
