#include "vove/check/trace.hpp"

#include "vove/model/diagnostic.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace vove
{

namespace
{

std::string trimmed( std::string_view s )
{
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.front() ) ) )
        s.remove_prefix( 1 );
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.back() ) ) )
        s.remove_suffix( 1 );
    return std::string( s );
}

// Position of a standalone `assert` keyword outside parentheses.
std::size_t find_assert( std::string_view line )
{
    int depth = 0;
    for ( std::size_t i = 0; i < line.size(); ++i )
    {
        const char c = line[ i ];
        if ( c == '(' )
            ++depth;
        else if ( c == ')' )
            --depth;
        else if ( depth == 0 && line.substr( i, 6 ) == "assert" && i > 0
                  && std::isspace( static_cast< unsigned char >( line[ i - 1 ] ) )
                  && ( i + 6 == line.size() || std::isspace( static_cast< unsigned char >( line[ i + 6 ] ) ) ) )
            return i;
    }
    return std::string_view::npos;
}

} // namespace

trace make_trace( const machine& m, const std::vector< std::pair< std::string, std::string > >& steps )
{
    trace t;
    for ( const auto& [ label, post ] : steps )
    {
        trace_step s;
        s.label = parse_event( m, label );
        s.post_text = trimmed( post );
        if ( !s.post_text.empty() )
            s.post = m.parse_predicate( s.post_text );
        t.steps.push_back( std::move( s ) );
    }
    return t;
}

trace parse_trace_file( const machine& m, std::string_view text )
{
    std::vector< std::pair< std::string, std::string > > steps;
    std::istringstream in{ std::string( text ) };
    std::string line;
    while ( std::getline( in, line ) )
    {
        if ( const auto hash = line.find( '#' ); hash != std::string::npos )
            line.erase( hash );
        const auto t = trimmed( line );
        if ( t.empty() )
            continue;
        const auto a = find_assert( t );
        if ( a == std::string_view::npos )
            steps.emplace_back( t, "" );
        else
            steps.emplace_back( trimmed( std::string_view( t ).substr( 0, a ) ),
                                trimmed( std::string_view( t ).substr( a + 6 ) ) );
    }
    return make_trace( m, steps );
}

std::string format_trace_file( const machine& m, const path& p, const std::vector< std::string >& posts )
{
    std::string out;
    for ( std::size_t i = 0; i < p.steps.size(); ++i )
    {
        const auto& s = p.steps[ i ];
        const bool implicit = i == 0 && s.label.op == event::initialisation;
        const bool has_post = i < posts.size() && !posts[ i ].empty();
        if ( implicit && !has_post )
            continue;
        out += event_call( m, s.label );
        if ( has_post )
            out += " assert " + posts[ i ];
        out += "\n";
    }
    return out;
}

trace load_trace_file( const machine& m, const std::string& file )
{
    std::ifstream in{ file };
    if ( !in )
        throw std::runtime_error( "cannot open trace file " + file );
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_trace_file( m, ss.str() );
}

verdict replay_trace( model_context& ctx, const trace& t )
{
    const auto& m = *ctx.model;
    auto& space = ctx.space;
    path p;
    std::size_t at = state_space::root;

    try
    {
        auto take = [ & ]( const event& label, const trace_step* step ) -> bool
        {
            const auto& out = space.expand( at );
            std::optional< std::size_t > chosen;
            for ( const auto e : out )
            {
                const auto& tr = space.edge( e );
                if ( !( tr.label == label ) )
                    continue;
                if ( !chosen )
                    chosen = e;
                // Among several initialisations prefer one meeting the postcondition.
                if ( step && step->post && eval_pred( m, step->post, space.node( tr.target ) ) )
                {
                    chosen = e;
                    break;
                }
            }
            if ( !chosen )
                return false;
            at = space.edge( *chosen ).target;
            p.steps.push_back( { label, space.node( at ) } );
            ctx.observe( label );
            ctx.observe( space.node( at ) );
            return true;
        };

        const bool from_root = !t.steps.empty() && t.steps.front().label.op == event::initialisation;
        if ( t.origin )
        {
            const auto id = space.find( *t.origin );
            if ( !id )
                return verdict::error( "trace origin " + state_string( m, *t.origin ) + " is not a known state" );
            at = *id;
            p.origin = t.origin;
            ctx.observe( *t.origin );
        }
        else if ( !from_root && ctx.current_trace && ctx.current_trace->last() )
        {
            p = *ctx.current_trace;
            const auto id = space.find( *p.last() );
            if ( !id )
                return verdict::error( "current trace ends in an unknown state" );
            at = *id;
        }
        else if ( !from_root )
        {
            if ( !take( event{}, nullptr ) )
                return verdict::fail( "the machine has no initial state" );
        }

        for ( std::size_t i = 0; i < t.steps.size(); ++i )
        {
            const auto& step = t.steps[ i ];
            const auto before = at;
            if ( !take( step.label, &step ) )
            {
                ctx.current_trace = p;
                auto v = verdict::fail( "step " + std::to_string( i + 1 ) + ": " + event_name( m, step.label )
                                        + " is not enabled in "
                                        + ( before == state_space::root ? std::string( "the root" )
                                                                        : state_string( m, space.node( before ) ) ) );
                v.trace = p;
                return v;
            }
            if ( step.post && !eval_pred( m, step.post, space.node( at ) ) )
            {
                ctx.current_trace = p;
                auto v = verdict::fail( "step " + std::to_string( i + 1 ) + ": postcondition " + step.post_text
                                        + " does not hold in " + state_string( m, space.node( at ) ) );
                v.trace = p;
                return v;
            }
        }
        space.expand( at );
    }
    catch ( const limit_exceeded& e )
    {
        return verdict::error( e.what() );
    }
    catch ( const model_error& e )
    {
        return verdict::error( e.what() );
    }

    ctx.current_trace = p;
    auto v = verdict::success( std::to_string( t.steps.size() ) + " steps replayed" );
    v.trace = p;
    return v;
}

} // namespace vove
