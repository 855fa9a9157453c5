#include "vove/check/explicit.hpp"

#include "vove/model/diagnostic.hpp"

#include <cctype>
#include <deque>
#include <limits>

namespace vove
{

namespace
{

std::string_view trim( std::string_view s )
{
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.front() ) ) )
        s.remove_prefix( 1 );
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.back() ) ) )
        s.remove_suffix( 1 );
    return s;
}

std::string_view strip_angles( std::string_view s )
{
    s = trim( s );
    for ( const std::string_view open : { "<", "\xE2\x9F\xA8" } )
    {
        const std::string_view close = open == "<" ? ">" : "\xE2\x9F\xA9";
        if ( s.substr( 0, open.size() ) == open && s.size() >= open.size() + close.size()
             && s.substr( s.size() - close.size() ) == close )
            return trim( s.substr( open.size(), s.size() - open.size() - close.size() ) );
    }
    return s;
}

} // namespace

mc_config parse_mc_config( std::string_view text )
{
    text = strip_angles( text );
    const auto comma = text.find( ',' );
    const auto head = trim( text.substr( 0, comma ) );
    const auto rest = comma == std::string_view::npos ? std::string_view{} : trim( text.substr( comma + 1 ) );

    mc_config c;
    if ( head == "FIN" )
        c.k = mc_config::kind::fin;
    else if ( head == "DLF" )
        c.k = mc_config::kind::dlf;
    else if ( head == "INV" )
        c.k = mc_config::kind::inv;
    else if ( head == "GOAL" )
        c.k = mc_config::kind::goal;
    else
        throw std::invalid_argument( "unknown model checking mode '" + std::string( head ) + "'" );

    const bool needs_pred = c.k == mc_config::kind::inv || c.k == mc_config::kind::goal;
    if ( needs_pred && rest.empty() )
        throw std::invalid_argument( std::string( head ) + " needs a predicate" );
    if ( !needs_pred && !rest.empty() )
        throw std::invalid_argument( std::string( head ) + " takes no predicate" );
    c.predicate = std::string( rest );
    return c;
}

std::string to_string( const mc_config& c )
{
    switch ( c.k )
    {
    case mc_config::kind::fin: return "<FIN>";
    case mc_config::kind::dlf: return "<DLF>";
    case mc_config::kind::inv: return "<INV, " + c.predicate + ">";
    case mc_config::kind::goal: return "<GOAL, " + c.predicate + ">";
    }
    return "";
}

std::optional< verdict > explore_all( model_context& ctx )
{
    try
    {
        ctx.space.explore();
    }
    catch ( const limit_exceeded& e )
    {
        return verdict::error( e.what() );
    }
    catch ( const model_error& e )
    {
        return verdict::error( e.what() );
    }
    return std::nullopt;
}

verdict check_explicit( model_context& ctx, const mc_config& c )
{
    const auto& m = *ctx.model;
    auto& space = ctx.space;
    program pred;
    if ( c.k == mc_config::kind::inv || c.k == mc_config::kind::goal )
    {
        try
        {
            pred = m.compile( m.parse_predicate( c.predicate ) );
        }
        catch ( const model_error& e )
        {
            return verdict::error( e.what() );
        }
    }

    constexpr auto none = std::numeric_limits< std::size_t >::max();
    std::vector< std::size_t > parent( space.node_count(), none );
    std::vector< char > seen( space.node_count(), 0 );
    std::deque< std::size_t > queue{ state_space::root };
    seen[ state_space::root ] = 1;

    auto finish = [ & ]( verdict v, std::optional< std::size_t > at )
    {
        if ( at )
            v.trace = path_to( space, parent, *at );
        ctx.observe_space();
        return v;
    };

    try
    {
        while ( !queue.empty() )
        {
            const auto id = queue.front();
            queue.pop_front();
            if ( id != state_space::root )
            {
                const auto& s = space.node( id );
                if ( c.k == mc_config::kind::inv && !pred.test( s.values ) )
                    return finish( verdict::fail( "invariant violated in " + state_string( m, s ) ), id );
                if ( c.k == mc_config::kind::goal && pred.test( s.values ) )
                {
                    auto v = finish( verdict::success( "goal reached in " + state_string( m, s ) ), id );
                    ctx.current_trace = v.trace;
                    return v;
                }
            }
            const auto& out = space.expand( id );
            if ( c.k == mc_config::kind::dlf && id != state_space::root && out.empty() )
                return finish( verdict::fail( "deadlock in " + state_string( m, space.node( id ) ) ), id );
            for ( const auto e : out )
            {
                const auto t = space.edge( e ).target;
                if ( t >= seen.size() )
                {
                    seen.resize( space.node_count(), 0 );
                    parent.resize( space.node_count(), none );
                }
                if ( !seen[ t ] )
                {
                    seen[ t ] = 1;
                    parent[ t ] = e;
                    queue.push_back( t );
                }
            }
        }
    }
    catch ( const limit_exceeded& e )
    {
        return finish( verdict::error( e.what() ), std::nullopt );
    }
    catch ( const model_error& e )
    {
        return finish( verdict::error( e.what() ), std::nullopt );
    }

    if ( c.k == mc_config::kind::goal )
        return finish( verdict::fail( "no reachable state satisfies the goal" ), std::nullopt );
    return finish( verdict::success( std::to_string( space.node_count() ) + " states explored" ), std::nullopt );
}

} // namespace vove
