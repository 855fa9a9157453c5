#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vove
{

class vo_error : public std::runtime_error
{
public:
    enum class kind
    {
        syntax,
        unknown_technique,
        arity_mismatch,
        unresolved_context,
        duplicate_id
    };

    vo_error( kind k, const std::string& msg ) : std::runtime_error( msg ), what_kind{ k } {}
    kind what_kind;
};

struct requirement
{
    std::string id;
    std::string kind;  // leading letters of the id, e.g. FUN, SCENARIO, PROB-TIM
    std::string text;
};

// One `ID: prose` per line; blank lines and `#` comments are skipped.
std::vector< requirement > parse_requirements( std::string_view text );
std::vector< requirement > load_requirements( const std::string& file );

} // namespace vove
