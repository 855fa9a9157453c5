#include "vove/util/text.hpp"

#include <cctype>

namespace vove
{

namespace
{

bool upper_word_follows( std::string_view s, std::size_t i )
{
    while ( i < s.size() && s[ i ] == ' ' )
        ++i;
    const auto start = i;
    while ( i < s.size() && ( std::isupper( static_cast< unsigned char >( s[ i ] ) ) || s[ i ] == '_' ) )
        ++i;
    if ( i - start < 2 )
        return false;
    while ( i < s.size() && s[ i ] == ' ' )
        ++i;
    return i == s.size() || s[ i ] == ',' || s[ i ] == '>';
}

bool closes_group( std::string_view s, std::size_t i )
{
    ++i;
    while ( i < s.size() && std::isspace( static_cast< unsigned char >( s[ i ] ) ) )
        ++i;
    return i == s.size() || s[ i ] == ',' || s[ i ] == ')' || s[ i ] == '>';
}

} // namespace

std::string trim( std::string_view s )
{
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.front() ) ) )
        s.remove_prefix( 1 );
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.back() ) ) )
        s.remove_suffix( 1 );
    return std::string( s );
}

std::string ascii_angles( std::string_view s )
{
    std::string out;
    out.reserve( s.size() );
    for ( std::size_t i = 0; i < s.size(); ++i )
    {
        const auto rest = s.substr( i );
        if ( rest.substr( 0, 3 ) == "\xE2\x9F\xA8" )
        {
            out += '<';
            i += 2;
        }
        else if ( rest.substr( 0, 3 ) == "\xE2\x9F\xA9" )
        {
            out += '>';
            i += 2;
        }
        else
            out += s[ i ];
    }
    return out;
}

std::vector< std::string > split_top_level( std::string_view s, char sep )
{
    std::vector< std::string > out;
    std::vector< char > stack;
    std::size_t start = 0;
    for ( std::size_t i = 0; i < s.size(); ++i )
    {
        const char c = s[ i ];
        if ( c == '(' || c == '[' || c == '{' )
            stack.push_back( c );
        else if ( c == '<' && upper_word_follows( s, i + 1 ) )
            stack.push_back( c );
        else if ( !stack.empty()
                  && ( ( c == ')' && stack.back() == '(' ) || ( c == ']' && stack.back() == '[' )
                       || ( c == '}' && stack.back() == '{' )
                       || ( c == '>' && stack.back() == '<' && closes_group( s, i ) ) ) )
            stack.pop_back();
        else if ( c == sep && stack.empty() )
        {
            out.push_back( trim( s.substr( start, i - start ) ) );
            start = i + 1;
        }
    }
    out.push_back( trim( s.substr( start ) ) );
    return out;
}

std::optional< std::pair< std::string, std::string > > angle_group( std::string_view s )
{
    const auto t = trim( ascii_angles( s ) );
    if ( t.size() < 2 || t.front() != '<' || t.back() != '>' )
        return std::nullopt;
    const std::string_view body = std::string_view( t ).substr( 1, t.size() - 2 );
    const auto comma = body.find( ',' );
    if ( comma == std::string_view::npos )
        return std::pair{ trim( body ), std::string{} };
    return std::pair{ trim( body.substr( 0, comma ) ), trim( body.substr( comma + 1 ) ) };
}

std::string strip_parens( std::string_view s )
{
    auto t = trim( s );
    if ( t.size() < 2 || t.front() != '(' || t.back() != ')' )
        return t;
    int depth = 0;
    for ( std::size_t i = 0; i < t.size(); ++i )
    {
        if ( t[ i ] == '(' )
            ++depth;
        else if ( t[ i ] == ')' && --depth == 0 && i + 1 != t.size() )
            return t;
    }
    return trim( std::string_view( t ).substr( 1, t.size() - 2 ) );
}

} // namespace vove
