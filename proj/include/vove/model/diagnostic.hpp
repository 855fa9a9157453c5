#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vove
{

struct source_pos
{
    int line = 1;
    int column = 1;
};

enum class diag_kind
{
    syntax_error,
    unknown_identifier,
    type_mismatch,
    duplicate_name,
    init_violates_type,
    unbound_parameter,
    guard_not_satisfied,
    semantics_error
};

const char* to_string( diag_kind kind );

struct diagnostic
{
    diag_kind kind = diag_kind::syntax_error;
    source_pos pos;
    std::string message;

    [[nodiscard]] std::string str() const;
};

// Every front-end and evaluation failure is reported through this type; the
// diagnostics list is never empty.
class model_error : public std::runtime_error
{
    std::vector< diagnostic > _diags;

public:
    explicit model_error( std::vector< diagnostic > diags );
    model_error( diag_kind kind, source_pos pos, const std::string& message )
            : model_error( std::vector< diagnostic >{ { kind, pos, message } } ) {}
    model_error( diag_kind kind, const std::string& message )
            : model_error( kind, source_pos{ 0, 0 }, message ) {}

    [[nodiscard]] const std::vector< diagnostic >& diagnostics() const { return _diags; }
    [[nodiscard]] diag_kind kind() const { return _diags.front().kind; }
};

} // namespace vove
