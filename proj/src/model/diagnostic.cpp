#include "vove/model/diagnostic.hpp"

namespace vove
{

const char* to_string( diag_kind kind )
{
    switch ( kind )
    {
    case diag_kind::syntax_error: return "SyntaxError";
    case diag_kind::unknown_identifier: return "UnknownIdentifier";
    case diag_kind::type_mismatch: return "TypeMismatch";
    case diag_kind::duplicate_name: return "DuplicateName";
    case diag_kind::init_violates_type: return "InitViolatesType";
    case diag_kind::unbound_parameter: return "UnboundParameter";
    case diag_kind::guard_not_satisfied: return "GuardNotSatisfied";
    case diag_kind::semantics_error: return "SemanticsError";
    }
    return "Error";
}

std::string diagnostic::str() const
{
    std::string out = to_string( kind );
    if ( pos.line > 0 )
        out += " at " + std::to_string( pos.line ) + ":" + std::to_string( pos.column );
    return out + ": " + message;
}

namespace
{

std::string join_messages( const std::vector< diagnostic >& diags )
{
    std::string out;
    for ( const auto& d : diags )
    {
        if ( !out.empty() )
            out += "\n";
        out += d.str();
    }
    return out;
}

} // namespace

model_error::model_error( std::vector< diagnostic > diags )
        : std::runtime_error( join_messages( diags ) ), _diags{ std::move( diags ) }
{
    if ( _diags.empty() )
        _diags.push_back( { diag_kind::semantics_error, { 0, 0 }, "unknown error" } );
}

} // namespace vove
