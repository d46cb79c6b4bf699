#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace folds {

enum class ErrorKind {
    Syntax,
    Cycle,
    Composition,
    Name,
    LevelMismatch,
    UnknownSort,
    IllFormedContext,
    IncompatibleSort,
    SortMismatch,
    BoundaryMismatch,
    Functoriality,
    NonTotalMap,
    InvalidBoundary,
    UnboundVariable,
    OpenFormula,
    NotSaturated,
    HeightOutOfScope,
    NotAModel,
    PreconditionViolation,
    InvalidCategory,
    NotAHomomorphism,
};

std::string_view to_string(ErrorKind kind);

struct SourceLocation {
    std::size_t line = 0;  // 1-based; 0 means unknown
    std::size_t column = 0;
};

struct Diagnostic {
    ErrorKind kind;
    std::string message;
    SourceLocation where{};
};

// Every failure raised by the library carries a kind and, for file input,
// a location. Validation may collect several diagnostics before throwing.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, SourceLocation where = {});
    explicit Error(std::vector<Diagnostic> diagnostics);

    ErrorKind kind() const noexcept { return diagnostics_.front().kind; }
    const SourceLocation& where() const noexcept { return diagnostics_.front().where; }
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

std::string format_diagnostic(const Diagnostic& d);

}  // namespace folds
