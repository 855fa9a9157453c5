#include "vove/vo/requirements.hpp"

#include "vove/util/text.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace vove
{

std::vector< requirement > parse_requirements( std::string_view text )
{
    std::vector< requirement > out;
    std::set< std::string > seen;
    std::istringstream in{ std::string( text ) };
    std::string line;
    std::size_t number = 0;
    while ( std::getline( in, line ) )
    {
        ++number;
        const auto t = trim( line );
        if ( t.empty() || t.front() == '#' )
            continue;
        const auto colon = t.find( ':' );
        if ( colon == std::string::npos || colon == 0 )
            throw vo_error( vo_error::kind::syntax, "line " + std::to_string( number ) + ": expected 'ID: text'" );
        requirement r;
        r.id = trim( std::string_view( t ).substr( 0, colon ) );
        r.text = trim( std::string_view( t ).substr( colon + 1 ) );
        for ( const char c : r.id )
            if ( std::isspace( static_cast< unsigned char >( c ) ) )
                throw vo_error( vo_error::kind::syntax, "line " + std::to_string( number ) + ": bad id '" + r.id + "'" );
        auto end = r.id.find_last_not_of( "0123456789." );
        r.kind = end == std::string::npos ? r.id : r.id.substr( 0, end + 1 );
        if ( !seen.insert( r.id ).second )
            throw vo_error( vo_error::kind::duplicate_id, "duplicate requirement '" + r.id + "'" );
        out.push_back( std::move( r ) );
    }
    return out;
}

std::vector< requirement > load_requirements( const std::string& file )
{
    std::ifstream in{ file };
    if ( !in )
        throw std::runtime_error( "cannot open requirements file " + file );
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_requirements( ss.str() );
}

} // namespace vove
