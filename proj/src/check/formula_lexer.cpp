#include "formula_lexer.hpp"

#include <cctype>

namespace vove::detail
{

std::vector< ftoken > lex_formula( std::string_view text )
{
    static const std::pair< std::string_view, std::string_view > symbols[] = {
        { "<=>", "<=>" },
        { "=>", "=>" },
        { "!", "!" },
        { "&", "&" },
        { "|", "|" },
        { "\xC2\xAC", "!" },          // ¬
        { "\xE2\x88\xA7", "&" },      // ∧
        { "\xE2\x88\xA8", "|" },      // ∨
        { "\xE2\x87\x92", "=>" },     // ⇒
        { "\xE2\x9F\xB9", "=>" },     // ⟹
        { "\xE2\x87\x94", "<=>" },    // ⇔
        { "\xE2\x9F\xBA", "<=>" },    // ⟺
    };

    std::vector< ftoken > out;
    std::size_t i = 0;
    auto fail = [ & ]( const std::string& msg )
    { throw formula_error( msg + " at offset " + std::to_string( i ) + " in '" + std::string( text ) + "'" ); };

    while ( i < text.size() )
    {
        const char c = text[ i ];
        if ( std::isspace( static_cast< unsigned char >( c ) ) )
        {
            ++i;
            continue;
        }
        const auto start = i;
        if ( c == '{' )
        {
            int depth = 1;
            std::size_t j = i + 1;
            while ( j < text.size() && depth > 0 )
            {
                if ( text[ j ] == '{' )
                    ++depth;
                else if ( text[ j ] == '}' )
                    --depth;
                ++j;
            }
            if ( depth != 0 )
                fail( "unterminated predicate" );
            out.push_back( { ftoken::kind::pred, std::string( text.substr( i + 1, j - i - 2 ) ), start } );
            i = j;
            continue;
        }
        if ( c == '(' || c == ')' || c == '[' || c == ']' )
        {
            const auto k = c == '(' ? ftoken::kind::open
                         : c == ')' ? ftoken::kind::close
                         : c == '[' ? ftoken::kind::lbrack
                                    : ftoken::kind::rbrack;
            out.push_back( { k, std::string( 1, c ), start } );
            ++i;
            continue;
        }
        if ( std::isalpha( static_cast< unsigned char >( c ) ) || c == '_' )
        {
            std::size_t j = i;
            while ( j < text.size() && ( std::isalnum( static_cast< unsigned char >( text[ j ] ) ) || text[ j ] == '_' ) )
                ++j;
            std::string w( text.substr( i, j - i ) );
            i = j;
            if ( w == "not" )
                out.push_back( { ftoken::kind::op, "!", start } );
            else if ( w == "and" )
                out.push_back( { ftoken::kind::op, "&", start } );
            else if ( w == "or" )
                out.push_back( { ftoken::kind::op, "|", start } );
            else
                out.push_back( { ftoken::kind::word, std::move( w ), start } );
            continue;
        }
        bool matched = false;
        for ( const auto& [ spelling, norm ] : symbols )
        {
            if ( text.substr( i, spelling.size() ) == spelling )
            {
                out.push_back( { ftoken::kind::op, std::string( norm ), start } );
                i += spelling.size();
                matched = true;
                break;
            }
        }
        if ( !matched )
            fail( "unexpected character" );
    }
    out.push_back( { ftoken::kind::end, {}, text.size() } );
    return out;
}

} // namespace vove::detail
