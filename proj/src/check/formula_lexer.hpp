#pragma once

#include "vove/check/ltl.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace vove::detail
{

// Tokens of temporal formulas. Predicates keep their braces stripped and
// their text verbatim; connectives are folded to ! & | => <=>.
struct ftoken
{
    enum class kind
    {
        pred,
        word,
        op,
        open,
        close,
        lbrack,
        rbrack,
        end
    };

    kind k = kind::end;
    std::string text;
    std::size_t offset = 0;
};

std::vector< ftoken > lex_formula( std::string_view text );

class ftoken_stream
{
    std::vector< ftoken > _toks;
    std::size_t _at = 0;
    std::string _source;

public:
    explicit ftoken_stream( std::string_view text ) : _toks{ lex_formula( text ) }, _source{ text } {}

    [[nodiscard]] const ftoken& peek() const { return _toks[ _at ]; }
    const ftoken& next()
    {
        const auto& t = _toks[ _at ];
        if ( _at + 1 < _toks.size() )
            ++_at;
        return t;
    }
    bool accept( ftoken::kind k, std::string_view text = {} )
    {
        if ( peek().k == k && ( text.empty() || peek().text == text ) )
        {
            next();
            return true;
        }
        return false;
    }
    void expect( ftoken::kind k, const char* what )
    {
        if ( !accept( k ) )
            fail( std::string( "expected " ) + what );
    }
    [[noreturn]] void fail( const std::string& message ) const
    {
        throw formula_error( message + " at offset " + std::to_string( peek().offset ) + " in '" + _source + "'" );
    }
};

} // namespace vove::detail
