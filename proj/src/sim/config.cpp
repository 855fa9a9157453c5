#include "vove/sim/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace vove
{

namespace
{

using json = nlohmann::ordered_json;

[[noreturn]] void syntax( const std::string& msg ) { throw sim_error( sim_error::kind::syntax, msg ); }

std::string expect_string( const json& v, const std::string& what )
{
    if ( !v.is_string() )
        syntax( what + " must be a string" );
    return v.get< std::string >();
}

} // namespace

decimal decimal::parse( std::string_view text )
{
    decimal d;
    bool dot = false;
    bool any = false;
    for ( const char c : text )
    {
        if ( c == '.' && !dot )
        {
            dot = true;
            continue;
        }
        if ( c < '0' || c > '9' )
            syntax( "bad probability '" + std::string( text ) + "'" );
        any = true;
        if ( dot )
            ++d.scale;
        if ( d.digits > ( UINT64_MAX - 9 ) / 10 || d.scale > 18 )
            syntax( "probability '" + std::string( text ) + "' has too many digits" );
        d.digits = d.digits * 10 + static_cast< std::uint64_t >( c - '0' );
    }
    if ( !any )
        syntax( "empty probability" );
    return d;
}

std::string decimal::str() const
{
    auto s = std::to_string( digits );
    if ( scale == 0 )
        return s;
    if ( s.size() <= static_cast< std::size_t >( scale ) )
        s.insert( 0, static_cast< std::size_t >( scale ) + 1 - s.size(), '0' );
    s.insert( s.size() - static_cast< std::size_t >( scale ), "." );
    return s;
}

double decimal::value() const { return static_cast< double >( digits ) / std::pow( 10.0, scale ); }

const activation* sim_config::find( std::string_view id ) const
{
    for ( const auto& a : activations )
        if ( a.id == id )
            return &a;
    return nullptr;
}

sim_config parse_sim_config( std::string_view json_text )
{
    json doc;
    try
    {
        doc = json::parse( json_text );
    }
    catch ( const json::parse_error& e )
    {
        syntax( e.what() );
    }
    if ( !doc.is_object() )
        syntax( "configuration must be an object" );
    for ( const auto& [ key, _ ] : doc.items() )
        if ( key != "activations" )
            syntax( "unknown key '" + key + "'" );
    if ( !doc.contains( "activations" ) || !doc[ "activations" ].is_array() )
        syntax( "missing activations array" );

    sim_config cfg;
    std::set< std::string > ids;
    for ( const auto& item : doc[ "activations" ] )
    {
        if ( !item.is_object() )
            syntax( "activation must be an object" );
        activation a;
        for ( const auto& [ key, value ] : item.items() )
        {
            if ( key == "id" )
                a.id = expect_string( value, "id" );
            else if ( key == "execute" )
                a.execute = expect_string( value, "execute" );
            else if ( key == "after" )
            {
                if ( !value.is_number_integer() || value.get< std::int64_t >() < 0 )
                    syntax( "after must be a non-negative integer" );
                a.after = value.get< std::int64_t >();
            }
            else if ( key == "activating" )
            {
                if ( value.is_string() )
                    a.activating.push_back( value.get< std::string >() );
                else if ( value.is_array() )
                    for ( const auto& v : value )
                        a.activating.push_back( expect_string( v, "activating entry" ) );
                else
                    syntax( "activating must be a string or a list" );
            }
            else if ( key == "chooseActivation" )
            {
                if ( !value.is_object() )
                    syntax( "chooseActivation must be an object" );
                a.choice = true;
                for ( const auto& [ target, p ] : value.items() )
                {
                    if ( p.is_string() )
                        a.choose.emplace_back( target, decimal::parse( p.get< std::string >() ) );
                    else if ( p.is_number() )
                        a.choose.emplace_back( target, decimal::parse( p.dump() ) );
                    else
                        syntax( "probability for '" + target + "' must be a decimal" );
                }
            }
            else
                syntax( "unknown key '" + key + "' in activation" );
        }
        if ( a.id.empty() )
            syntax( "activation without id" );
        if ( !ids.insert( a.id ).second )
            syntax( "duplicate activation id '" + a.id + "'" );
        if ( a.choice && ( !a.execute.empty() || !a.activating.empty() || item.contains( "after" ) ) )
            syntax( "choice activation '" + a.id + "' mixes in direct keys" );
        if ( !a.choice && a.execute.empty() )
            syntax( "activation '" + a.id + "' has neither execute nor chooseActivation" );
        if ( a.choice && a.choose.empty() )
            syntax( "choice activation '" + a.id + "' has no targets" );
        cfg.activations.push_back( std::move( a ) );
    }

    bool has_init = false;
    for ( const auto& a : cfg.activations )
    {
        has_init = has_init || a.id == initialise_machine;
        for ( const auto& t : a.activating )
            if ( !ids.count( t ) )
                throw sim_error( sim_error::kind::unknown_activation, "unknown activation '" + t + "' in '" + a.id + "'" );
        if ( !a.choice )
            continue;
        int scale = 0;
        for ( const auto& [ t, p ] : a.choose )
        {
            if ( !ids.count( t ) )
                throw sim_error( sim_error::kind::unknown_activation, "unknown activation '" + t + "' in '" + a.id + "'" );
            scale = std::max( scale, p.scale );
        }
        long double sum = 0;
        for ( const auto& [ t, p ] : a.choose )
            sum += static_cast< long double >( p.digits ) * std::pow( 10.0L, scale - p.scale );
        const long double one = std::pow( 10.0L, scale );
        if ( std::fabs( sum - one ) > 1e-9L * one )
            throw sim_error( sim_error::kind::bad_probability_sum, "probabilities of '" + a.id + "' do not sum to 1" );
    }
    if ( !has_init )
        throw sim_error( sim_error::kind::unknown_activation, "missing activation '$initialise_machine'" );
    return cfg;
}

sim_config load_sim_config( const std::string& file )
{
    std::ifstream in{ file };
    if ( !in )
        throw std::runtime_error( "cannot open simulation config " + file );
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sim_config( ss.str() );
}

std::string to_json( const sim_config& c )
{
    json acts = json::array();
    for ( const auto& a : c.activations )
    {
        json o;
        o[ "id" ] = a.id;
        if ( a.choice )
        {
            json ch = json::object();
            for ( const auto& [ t, p ] : a.choose )
                ch[ t ] = p.str();
            o[ "chooseActivation" ] = ch;
        }
        else
        {
            o[ "execute" ] = a.execute;
            if ( a.after )
                o[ "after" ] = a.after;
            if ( a.activating.size() == 1 )
                o[ "activating" ] = a.activating[ 0 ];
            else if ( !a.activating.empty() )
                o[ "activating" ] = a.activating;
        }
        acts.push_back( o );
    }
    return json{ { "activations", acts } }.dump();
}

} // namespace vove
