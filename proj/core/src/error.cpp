#include "folds/error.hpp"

#include <sstream>

namespace folds {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax: return "syntax error";
        case ErrorKind::Cycle: return "cycle";
        case ErrorKind::Composition: return "composition error";
        case ErrorKind::Name: return "name error";
        case ErrorKind::LevelMismatch: return "level mismatch";
        case ErrorKind::UnknownSort: return "unknown sort";
        case ErrorKind::IllFormedContext: return "ill-formed context";
        case ErrorKind::IncompatibleSort: return "incompatible sort";
        case ErrorKind::SortMismatch: return "sort mismatch";
        case ErrorKind::BoundaryMismatch: return "boundary mismatch";
        case ErrorKind::Functoriality: return "functoriality violation";
        case ErrorKind::NonTotalMap: return "non-total map";
        case ErrorKind::InvalidBoundary: return "invalid boundary";
        case ErrorKind::UnboundVariable: return "unbound variable";
        case ErrorKind::OpenFormula: return "open formula";
        case ErrorKind::NotSaturated: return "not saturated";
        case ErrorKind::HeightOutOfScope: return "height out of scope";
        case ErrorKind::NotAModel: return "not a model";
        case ErrorKind::PreconditionViolation: return "precondition violation";
        case ErrorKind::InvalidCategory: return "invalid category";
        case ErrorKind::NotAHomomorphism: return "not a homomorphism";
    }
    return "error";
}

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream out;
    if (d.where.line != 0) out << d.where.line << ':' << d.where.column << ": ";
    out << to_string(d.kind) << ": " << d.message;
    return out.str();
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
    std::string out;
    for (const auto& d : ds) {
        if (!out.empty()) out += '\n';
        out += format_diagnostic(d);
    }
    return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message, SourceLocation where)
    : Error(std::vector<Diagnostic>{Diagnostic{kind, std::move(message), where}}) {}

Error::Error(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {
    if (diagnostics_.empty()) diagnostics_.push_back({ErrorKind::PreconditionViolation, "unspecified"});
}

}  // namespace folds
