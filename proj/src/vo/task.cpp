#include "vove/vo/task.hpp"

#include "vove/check/ctl.hpp"
#include "vove/check/ltl.hpp"
#include "vove/sim/simulator.hpp"
#include "vove/sim/statistics.hpp"
#include "vove/space/query.hpp"
#include "vove/util/text.hpp"

#include <array>
#include <cctype>

namespace vove
{

namespace
{

constexpr std::array< std::pair< technique, const char* >, 21 > names = { {
        { technique::tr, "TR" },       { technique::ht, "HT" },     { technique::eop, "EOP" },
        { technique::oc, "OC" },       { technique::mcdc, "MCDC" }, { technique::mc, "MC" },
        { technique::ltl, "LTL" },     { technique::ctl, "CTL" },   { technique::svis, "SVIS" },
        { technique::sprj, "SPRJ" },   { technique::stat, "STAT" }, { technique::sistat, "SISTAT" },
        { technique::ed, "ED" },       { technique::oct, "OCT" },   { technique::rwm, "RWM" },
        { technique::vct, "VCT" },     { technique::mmv, "MMV" },   { technique::vap, "VAP" },
        { technique::po, "PO" },       { technique::smc, "SMC" },   { technique::psmc, "PSMC" },
} };

[[noreturn]] void arity( const std::string& id, const std::string& msg )
{
    throw vo_error( vo_error::kind::arity_mismatch, id + ": " + msg );
}

[[noreturn]] void bad( const std::string& id, const std::string& msg )
{
    throw vo_error( vo_error::kind::syntax, id + ": " + msg );
}

std::size_t parse_count( const std::string& id, const std::string& text )
{
    if ( text.empty() || text.find_first_not_of( "0123456789" ) != std::string::npos )
        bad( id, "expected a run count, got '" + text + "'" );
    return static_cast< std::size_t >( std::stoull( text ) );
}

std::string parse_bound( const std::string& id, const std::string& text )
{
    std::size_t used = 0;
    try
    {
        const double v = std::stod( text, &used );
        if ( used == text.size() && v >= 0 && v <= 1 )
            return text;
    }
    catch ( const std::exception& )
    {
    }
    bad( id, "expected a probability bound, got '" + text + "'" );
}

bool is_count( const std::string& s ) { return !s.empty() && s.find_first_not_of( "0123456789" ) == std::string::npos; }

std::string list_body( const std::string& id, const std::string& text )
{
    const auto t = trim( text );
    if ( t.size() < 2 || t.front() != '[' || t.back() != ']' )
        bad( id, "expected a [..] list" );
    return trim( std::string_view( t ).substr( 1, t.size() - 2 ) );
}

// Items `op(args) <post>` separated by commas; postconditions may contain commas.
std::vector< std::pair< std::string, std::string > > parse_steps( const std::string& id, const std::string& body )
{
    std::vector< std::pair< std::string, std::string > > out;
    std::size_t i = 0;
    const auto n = body.size();
    auto skip_space = [ & ]
    {
        while ( i < n && std::isspace( static_cast< unsigned char >( body[ i ] ) ) )
            ++i;
    };
    skip_space();
    while ( i < n )
    {
        const auto start = i;
        int depth = 0;
        while ( i < n && ( depth > 0 || ( body[ i ] != '<' && body[ i ] != ',' ) ) )
        {
            if ( body[ i ] == '(' )
                ++depth;
            else if ( body[ i ] == ')' )
                --depth;
            ++i;
        }
        auto label = trim( std::string_view( body ).substr( start, i - start ) );
        if ( label.empty() )
            bad( id, "empty trace step" );
        std::string post;
        if ( i < n && body[ i ] == '<' )
        {
            const auto open = i + 1;
            std::size_t close = std::string::npos;
            for ( std::size_t j = open; j < n; ++j )
            {
                if ( body[ j ] != '>' )
                    continue;
                auto k = j + 1;
                while ( k < n && std::isspace( static_cast< unsigned char >( body[ k ] ) ) )
                    ++k;
                if ( k == n || body[ k ] == ',' )
                {
                    close = j;
                    break;
                }
            }
            if ( close == std::string::npos )
                bad( id, "unterminated postcondition after '" + label + "'" );
            post = trim( std::string_view( body ).substr( open, close - open ) );
            i = close + 1;
            skip_space();
        }
        out.emplace_back( std::move( label ), std::move( post ) );
        if ( i < n )
        {
            if ( body[ i ] != ',' )
                bad( id, "expected ',' between trace steps" );
            ++i;
            skip_space();
            if ( i == n )
                bad( id, "trailing ',' in trace" );
        }
    }
    return out;
}

std::string canonical_query( const std::string& id, const std::string& text )
{
    try
    {
        return to_string( parse_query( text ) );
    }
    catch ( const query_error& e )
    {
        bad( id, e.what() );
    }
}

task_params parse_params( const std::string& id, technique tech, const std::string& raw )
{
    const auto text = trim( raw );
    const bool needs = !( tech == technique::po || tech == technique::smc || tech == technique::psmc );
    if ( needs && text.empty() )
        arity( id, std::string( to_string( tech ) ) + " needs parameters" );

    switch ( tech )
    {
    case technique::mc:
        try
        {
            return mc_task{ parse_mc_config( ascii_angles( text ) ) };
        }
        catch ( const std::invalid_argument& e )
        {
            arity( id, e.what() );
        }
    case technique::ltl:
    case technique::ctl:
    {
        const auto parts = split_top_level( text );
        if ( parts.size() != 2 )
            arity( id, "expected 'formula, SUCCESS|FAIL'" );
        temporal_task t;
        if ( parts[ 1 ] == "SUCCESS" )
            t.expect_holds = true;
        else if ( parts[ 1 ] == "FAIL" )
            t.expect_holds = false;
        else
            bad( id, "expected SUCCESS or FAIL, got '" + parts[ 1 ] + "'" );
        try
        {
            t.formula = tech == technique::ltl ? to_string( parse_ltl( parts[ 0 ] ) ) : to_string( parse_ctl( parts[ 0 ] ) );
        }
        catch ( const formula_error& e )
        {
            bad( id, e.what() );
        }
        return t;
    }
    case technique::tr:
    {
        replay_task t;
        if ( text.front() == '@' )
        {
            t.file = trim( std::string_view( text ).substr( 1 ) );
            if ( t.file.empty() )
                arity( id, "missing trace file" );
        }
        else
            t.steps = parse_steps( id, list_body( id, text ) );
        return t;
    }
    case technique::oc:
    {
        coverage_task t;
        const auto body = list_body( id, text );
        if ( !body.empty() )
            for ( const auto& op : split_top_level( body ) )
            {
                if ( op.empty() )
                    bad( id, "empty operation name" );
                t.operations.push_back( op );
            }
        return t;
    }
    case technique::mcdc:
        return mcdc_task{ static_cast< int >( parse_count( id, text ) ) };
    case technique::vap:
        if ( text == "INV" )
            return vacuity_task{ vacuity_scope::invariant };
        if ( text == "GRD" )
            return vacuity_task{ vacuity_scope::guards };
        bad( id, "VAP expects INV or GRD" );
    case technique::ht:
    case technique::eop:
    {
        auto parts = split_top_level( ascii_angles( text ) );
        statistical_task t;
        if ( parts.size() == 3 && is_count( parts[ 0 ] ) )
        {
            t.runs = parse_count( id, parts[ 0 ] );
            parts.erase( parts.begin() );
        }
        if ( parts.size() != 2 )
            arity( id, "expected '[runs,] (hypothesis), bound'" );
        try
        {
            t.hypothesis = to_string( hypothesis::parse( parts[ 0 ] ) );
        }
        catch ( const std::invalid_argument& e )
        {
            bad( id, e.what() );
        }
        t.bound = parse_bound( id, parts[ 1 ] );
        return t;
    }
    case technique::sistat:
    {
        auto parts = split_top_level( ascii_angles( text ) );
        sistat_task t;
        if ( parts.size() == 4 && is_count( parts[ 0 ] ) )
        {
            t.runs = parse_count( id, parts[ 0 ] );
            parts.erase( parts.begin() );
        }
        if ( parts.size() != 3 )
            arity( id, "expected '[runs,] <start>, <end>, formula'" );
        try
        {
            t.start = to_string( condition::parse( parts[ 0 ] ) );
            t.end = to_string( condition::parse( parts[ 1 ] ) );
        }
        catch ( const std::invalid_argument& e )
        {
            bad( id, e.what() );
        }
        t.formula = canonical_query( id, parts[ 2 ] );
        return t;
    }
    case technique::sprj:
    {
        const auto parts = split_top_level( text );
        if ( parts.size() < 2 )
            arity( id, "expected 'expression, formula'" );
        const auto comma = text.find( ',', parts[ 0 ].size() );
        return projection_task{ parts[ 0 ], canonical_query( id, trim( std::string_view( text ).substr( comma + 1 ) ) ) };
    }
    case technique::svis:
    case technique::stat:
    case technique::ed:
    case technique::oct:
    case technique::rwm:
    case technique::vct:
    case technique::mmv:
        return inspection_task{ canonical_query( id, text ) };
    case technique::po:
    case technique::smc:
    case technique::psmc:
        return unsupported_task{ text };
    }
    bad( id, "unhandled technique" );
}

std::string join( const std::vector< std::string >& items, const char* sep )
{
    std::string out;
    for ( std::size_t i = 0; i < items.size(); ++i )
        out += ( i ? sep : "" ) + items[ i ];
    return out;
}

} // namespace

const char* to_string( technique t )
{
    for ( const auto& [ k, n ] : names )
        if ( k == t )
            return n;
    return "?";
}

std::optional< technique > parse_technique( std::string_view name )
{
    for ( const auto& [ k, n ] : names )
        if ( name == n )
            return k;
    return std::nullopt;
}

bool is_supported( technique t ) { return t != technique::po && t != technique::smc && t != technique::psmc; }

vt_decl parse_vt( std::string_view line, const std::set< std::string >* artifacts )
{
    const auto t = trim( line );
    const auto slash1 = t.find( '/' );
    const auto colon = t.find( ':' );
    if ( slash1 == std::string::npos || colon == std::string::npos || colon < slash1 )
        throw vo_error( vo_error::kind::syntax, "expected 'ID/context/TECHNIQUE: parameters', got '" + t + "'" );
    const auto slash2 = t.find( '/', slash1 + 1 );
    if ( slash2 == std::string::npos || slash2 > colon )
        throw vo_error( vo_error::kind::syntax, "expected 'ID/context/TECHNIQUE: parameters', got '" + t + "'" );

    vt_decl vt;
    vt.id = trim( std::string_view( t ).substr( 0, slash1 ) );
    if ( vt.id.empty() )
        throw vo_error( vo_error::kind::syntax, "missing task id in '" + t + "'" );
    for ( auto& c : split_top_level( std::string_view( t ).substr( slash1 + 1, slash2 - slash1 - 1 ) ) )
    {
        if ( c.empty() )
            throw vo_error( vo_error::kind::syntax, vt.id + ": empty context name" );
        if ( artifacts && !artifacts->count( c ) )
            throw vo_error( vo_error::kind::unresolved_context, vt.id + ": unknown artifact '" + c + "'" );
        vt.context.push_back( std::move( c ) );
    }
    const auto tech_name = trim( std::string_view( t ).substr( slash2 + 1, colon - slash2 - 1 ) );
    const auto tech = parse_technique( tech_name );
    if ( !tech )
        throw vo_error( vo_error::kind::unknown_technique, vt.id + ": unknown technique '" + tech_name + "'" );
    vt.tech = *tech;
    const bool simulation = vt.tech == technique::ht || vt.tech == technique::eop || vt.tech == technique::sistat;
    if ( vt.context.size() != ( simulation ? 2u : 1u ) && is_supported( vt.tech ) )
        throw vo_error( vo_error::kind::arity_mismatch,
                        vt.id + ": " + tech_name + ( simulation ? " needs a model and a simulation" : " needs one model" ) );
    vt.params = parse_params( vt.id, vt.tech, std::string( std::string_view( t ).substr( colon + 1 ) ) );
    return vt;
}

std::string params_string( const vt_decl& vt )
{
    return std::visit(
            [ & ]( const auto& p ) -> std::string
            {
                using P = std::decay_t< decltype( p ) >;
                if constexpr ( std::is_same_v< P, mc_task > )
                    return to_string( p.config );
                else if constexpr ( std::is_same_v< P, temporal_task > )
                    return p.formula + ", " + ( p.expect_holds ? "SUCCESS" : "FAIL" );
                else if constexpr ( std::is_same_v< P, replay_task > )
                {
                    if ( !p.file.empty() )
                        return "@" + p.file;
                    std::vector< std::string > items;
                    for ( const auto& [ label, post ] : p.steps )
                        items.push_back( post.empty() ? label : label + " <" + post + ">" );
                    return "[" + join( items, ", " ) + "]";
                }
                else if constexpr ( std::is_same_v< P, coverage_task > )
                    return "[" + join( p.operations, ", " ) + "]";
                else if constexpr ( std::is_same_v< P, mcdc_task > )
                    return std::to_string( p.level );
                else if constexpr ( std::is_same_v< P, vacuity_task > )
                    return p.scope == vacuity_scope::invariant ? "INV" : "GRD";
                else if constexpr ( std::is_same_v< P, statistical_task > )
                    return ( p.runs ? std::to_string( *p.runs ) + ", " : "" ) + p.hypothesis + ", " + p.bound;
                else if constexpr ( std::is_same_v< P, sistat_task > )
                    return ( p.runs ? std::to_string( *p.runs ) + ", " : "" ) + p.start + ", " + p.end + ", " + p.formula;
                else if constexpr ( std::is_same_v< P, inspection_task > )
                    return p.formula;
                else if constexpr ( std::is_same_v< P, projection_task > )
                    return p.expression + ", " + p.formula;
                else
                    return p.raw;
            },
            vt.params );
}

std::string to_string( const vt_decl& vt )
{
    return vt.id + "/" + join( vt.context, ", " ) + "/" + to_string( vt.tech ) + ": " + params_string( vt );
}

} // namespace vove
