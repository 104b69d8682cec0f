#pragma once

#include <stdexcept>
#include <string>

namespace uiopt {

enum class Errc {
    malformed_document,
    empty_tree,
    malformed_bounds,
    schema_violation,
    syntax_error,
    depth_exceeded,
    predicate_evaluation,
    external_counter_failure,
    external_generator_unavailable,
    iteration_out_of_range,
    empty_log,
    library_load_failure,
    missing_seed,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::malformed_document: return "MalformedDocument";
        case Errc::empty_tree: return "EmptyTree";
        case Errc::malformed_bounds: return "MalformedBounds";
        case Errc::schema_violation: return "SchemaViolation";
        case Errc::syntax_error: return "SyntaxError";
        case Errc::depth_exceeded: return "DepthExceeded";
        case Errc::predicate_evaluation: return "PredicateEvaluationError";
        case Errc::external_counter_failure: return "ExternalCounterFailure";
        case Errc::external_generator_unavailable: return "ExternalGeneratorUnavailable";
        case Errc::iteration_out_of_range: return "IterationOutOfRange";
        case Errc::empty_log: return "EmptyLog";
        case Errc::library_load_failure: return "LibraryLoadFailure";
        case Errc::missing_seed: return "MissingSeed";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    Error(Errc code, std::string detail, int line, int column)
        : std::runtime_error(std::string(errc_name(code)) + " at " + std::to_string(line) + ":"
                             + std::to_string(column) + ": " + detail),
          code_(code), line_(line), column_(column) {}

    Errc code() const { return code_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    Errc code_;
    int line_ = 0;
    int column_ = 0;
};

}  // namespace uiopt
