#include "vove/check/verdict.hpp"

#include <algorithm>
#include <limits>

namespace vove
{

const char* to_string( status s )
{
    switch ( s )
    {
    case status::success: return "SUCCESS";
    case status::fail: return "FAIL";
    case status::error: return "ERROR";
    }
    return "ERROR";
}

path path_to( const state_space& space, const std::vector< std::size_t >& parent_edge, std::size_t node )
{
    std::vector< std::size_t > edges;
    while ( node != state_space::root )
    {
        const auto e = parent_edge[ node ];
        edges.push_back( e );
        node = space.edge( e ).source;
    }
    std::reverse( edges.begin(), edges.end() );
    path p;
    for ( const auto e : edges )
        p.steps.push_back( { space.edge( e ).label, space.node( space.edge( e ).target ) } );
    return p;
}

std::string path_string( const machine& m, const path& p )
{
    std::string out;
    if ( p.origin )
        out = state_string( m, *p.origin );
    for ( const auto& s : p.steps )
        out += ( out.empty() ? "" : " -> " ) + event_name( m, s.label );
    return out;
}

} // namespace vove
