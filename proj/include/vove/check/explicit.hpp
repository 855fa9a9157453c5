#pragma once

#include "vove/check/verdict.hpp"

#include <string>

namespace vove
{

struct mc_config
{
    enum class kind
    {
        fin,
        dlf,
        inv,
        goal
    };

    kind k = kind::fin;
    std::string predicate;  // INV and GOAL only

    bool operator==( const mc_config& ) const = default;
};

// Parses "FIN", "DLF", "INV, pred" or "GOAL, pred" (angle brackets optional).
mc_config parse_mc_config( std::string_view text );
std::string to_string( const mc_config& c );

verdict check_explicit( model_context& ctx, const mc_config& c );

// Explores the whole space of the context; returns an ERROR verdict on
// overflow and nothing otherwise.
std::optional< verdict > explore_all( model_context& ctx );

} // namespace vove
