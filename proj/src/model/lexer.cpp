#include "vove/model/lexer.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace vove
{

namespace
{

struct spelling
{
    std::string_view from;
    std::string_view to;
};

// Longest spellings first; the scan takes the first match.
constexpr std::array< spelling, 48 > symbols{ {
    { "<=>", "<=>" }, { "|->", "|->" }, { "⟹", "=>" }, { "⇒", "=>" }, { "→", "=>" },
    { "⇔", "<=>" }, { "∧", "&" }, { "∨", "or" }, { "¬", "not" }, { "≠", "/=" },
    { "≤", "<=" }, { "≥", ">=" }, { "∈", ":" }, { "∉", "/:" }, { "↦", "|->" },
    { "∪", "\\/" }, { "∩", "/\\" }, { "⊆", "<:" }, { "⁻¹", "~" }, { "∼", "~" },
    { "⟨", "<<" }, { "⟩", ">>" }, { "=>", "=>" }, { "<=", "<=" }, { ">=", ">=" },
    { "/=", "/=" }, { "!=", "/=" }, { ":=", ":=" }, { "||", "||" }, { "..", ".." },
    { "\\/", "\\/" }, { "/\\", "/\\" }, { "<:", "<:" }, { "/:", "/:" }, { "==", "=" },
    { "=", "=" }, { "<", "<" }, { ">", ">" }, { "&", "&" }, { "!", "not" },
    { "+", "+" }, { "-", "-" }, { "*", "*" }, { "/", "/" }, { ":", ":" },
    { "~", "~" }, { "|", "|" }, { ";", ";" },
} };

constexpr std::string_view single_punct = "(){}[],";

bool ident_start( char c ) { return std::isalpha( static_cast< unsigned char >( c ) ) || c == '_'; }
bool ident_char( char c ) { return std::isalnum( static_cast< unsigned char >( c ) ) || c == '_'; }
bool digit( char c ) { return std::isdigit( static_cast< unsigned char >( c ) ) != 0; }

} // namespace

std::vector< token > tokenize( std::string_view src, source_pos origin )
{
    std::vector< token > out;
    int line = origin.line;
    int col = origin.column;
    std::size_t i = 0;

    auto advance = [ & ]( std::size_t n )
    {
        for ( std::size_t k = 0; k < n; ++k )
        {
            // Count code points, not bytes, for the column.
            const auto c = static_cast< unsigned char >( src[ i ] );
            if ( c == '\n' )
            {
                ++line;
                col = 1;
            }
            else if ( ( c & 0xC0 ) != 0x80 )
                ++col;
            ++i;
        }
    };

    while ( i < src.size() )
    {
        const char c = src[ i ];
        if ( std::isspace( static_cast< unsigned char >( c ) ) )
        {
            advance( 1 );
            continue;
        }
        if ( c == '/' && i + 1 < src.size() && src[ i + 1 ] == '*' )
        {
            const auto close = src.find( "*/", i + 2 );
            if ( close == std::string_view::npos )
                throw model_error( diag_kind::syntax_error, { line, col }, "unterminated comment" );
            advance( close + 2 - i );
            continue;
        }
        if ( c == '/' && i + 1 < src.size() && src[ i + 1 ] == '/' )
        {
            while ( i < src.size() && src[ i ] != '\n' )
                advance( 1 );
            continue;
        }

        const source_pos pos{ line, col };
        const std::size_t start = i;

        if ( ident_start( c ) )
        {
            while ( i < src.size() && ident_char( src[ i ] ) )
                advance( 1 );
            out.push_back( { token_kind::identifier, std::string( src.substr( start, i - start ) ), pos } );
            continue;
        }
        if ( digit( c ) )
        {
            while ( i < src.size() && digit( src[ i ] ) )
                advance( 1 );
            auto kind = token_kind::integer;
            if ( i + 1 < src.size() && src[ i ] == '.' && digit( src[ i + 1 ] ) )
            {
                kind = token_kind::decimal;
                advance( 1 );
                while ( i < src.size() && digit( src[ i ] ) )
                    advance( 1 );
            }
            out.push_back( { kind, std::string( src.substr( start, i - start ) ), pos } );
            continue;
        }
        if ( c == '"' )
        {
            advance( 1 );
            std::string text;
            while ( i < src.size() && src[ i ] != '"' )
            {
                if ( src[ i ] == '\n' )
                    break;
                text.push_back( src[ i ] );
                advance( 1 );
            }
            if ( i >= src.size() || src[ i ] != '"' )
                throw model_error( diag_kind::syntax_error, pos, "unterminated string literal" );
            advance( 1 );
            out.push_back( { token_kind::string, std::move( text ), pos } );
            continue;
        }
        if ( single_punct.find( c ) != std::string_view::npos )
        {
            advance( 1 );
            out.push_back( { token_kind::symbol, std::string( 1, c ), pos } );
            continue;
        }

        bool matched = false;
        for ( const auto& s : symbols )
        {
            if ( src.substr( i, s.from.size() ) == s.from )
            {
                advance( s.from.size() );
                out.push_back( { token_kind::symbol, std::string( s.to ), pos } );
                matched = true;
                break;
            }
        }
        if ( !matched )
        {
            std::size_t len = 1;
            while ( i + len < src.size() && ( static_cast< unsigned char >( src[ i + len ] ) & 0xC0 ) == 0x80 )
                ++len;
            throw model_error( diag_kind::syntax_error, pos,
                               "unexpected character '" + std::string( src.substr( i, len ) ) + "'" );
        }
    }
    out.push_back( { token_kind::end, "", { line, col } } );
    return out;
}

const token& token_stream::expect( std::string_view sym )
{
    if ( !peek().is( sym ) )
        fail( "expected '" + std::string( sym ) + "'" );
    return next();
}

std::string token_stream::expect_identifier()
{
    if ( peek().kind != token_kind::identifier )
        fail( "expected identifier" );
    return next().text;
}

void token_stream::fail( const std::string& message ) const
{
    const auto& t = peek();
    const std::string found = t.kind == token_kind::end ? "end of input" : "'" + t.text + "'";
    throw model_error( diag_kind::syntax_error, t.pos, message + ", found " + found );
}

} // namespace vove
