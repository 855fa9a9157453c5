#pragma once

#include "vove/space/session.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vove
{

enum class status
{
    success,
    fail,
    error
};

const char* to_string( status s );

struct verdict
{
    status result = status::error;
    std::string message;
    std::optional< path > trace;              // counterexample or witness
    std::optional< std::size_t > loop_start;  // step index where a lasso's loop begins
    std::vector< path > traces;               // generated test cases
    std::vector< std::string > findings;

    static verdict success( std::string msg = {} ) { return { status::success, std::move( msg ), {}, {}, {}, {} }; }
    static verdict fail( std::string msg ) { return { status::fail, std::move( msg ), {}, {}, {}, {} }; }
    static verdict error( std::string msg ) { return { status::error, std::move( msg ), {}, {}, {}, {} }; }
};

// Shortest path from the root to `node` along the edges recorded in
// `parent_edge` (SIZE_MAX for the root).
path path_to( const state_space& space, const std::vector< std::size_t >& parent_edge, std::size_t node );

// "INITIALISATION -> cars_ry -> ..." on one line.
std::string path_string( const machine& m, const path& p );

} // namespace vove
