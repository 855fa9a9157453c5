#pragma once

#include "vove/model/diagnostic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace vove
{

enum class token_kind
{
    identifier,
    integer,
    decimal,
    string,
    symbol,
    end
};

// Unicode operators are folded onto one ASCII spelling while lexing, so
// parsers only ever compare against the ASCII form:
//   ∧ &   ∨ or   ¬ not   ⇒ ⟹ =>   ⇔ <=>   ≠ != /=   ≤ <=   ≥ >=   ∈ :
//   ∉ /:   ↦ |->   ∪ \/   ∩ /\   ⊆ <:   ⁻¹ ∼ ~   ⟨ <<   ⟩ >>
struct token
{
    token_kind kind = token_kind::end;
    std::string text;
    source_pos pos;

    [[nodiscard]] bool is( std::string_view sym ) const
    {
        return ( kind == token_kind::symbol || kind == token_kind::identifier ) && text == sym;
    }
};

std::vector< token > tokenize( std::string_view source, source_pos origin = { 1, 1 } );

class token_stream
{
    std::vector< token > _tokens;
    std::size_t _at = 0;

public:
    explicit token_stream( std::vector< token > tokens ) : _tokens{ std::move( tokens ) } {}

    [[nodiscard]] const token& peek( std::size_t ahead = 0 ) const
    {
        const auto i = std::min( _at + ahead, _tokens.size() - 1 );
        return _tokens[ i ];
    }

    const token& next()
    {
        const auto& t = _tokens[ _at ];
        if ( _at + 1 < _tokens.size() )
            ++_at;
        return t;
    }

    bool accept( std::string_view sym )
    {
        if ( peek().is( sym ) )
        {
            next();
            return true;
        }
        return false;
    }

    const token& expect( std::string_view sym );
    std::string expect_identifier();

    [[nodiscard]] bool at_end() const { return peek().kind == token_kind::end; }
    [[nodiscard]] std::size_t position() const { return _at; }
    void rewind( std::size_t at ) { _at = at; }

    [[noreturn]] void fail( const std::string& message ) const;
};

} // namespace vove
