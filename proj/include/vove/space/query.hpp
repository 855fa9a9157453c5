#pragma once

#include <compare>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vove
{

// Values of the inspection formula language: numbers, atoms, pairs, finite
// sets and booleans. Relations are sets of pairs; (a, b, c) is ((a, b), c).
class qvalue
{
public:
    enum class kind
    {
        boolean,
        number,
        text,
        pair,
        set
    };

    qvalue() = default;
    static qvalue boolean( bool b );
    static qvalue number( double d );
    static qvalue text( std::string s );
    static qvalue pair( qvalue a, qvalue b );
    static qvalue set( std::vector< qvalue > items );
    static qvalue interval( double lo, double hi );

    [[nodiscard]] kind type() const { return _kind; }
    [[nodiscard]] bool as_bool() const { return _num != 0; }
    [[nodiscard]] double as_number() const { return _num; }
    [[nodiscard]] const std::string& as_text() const { return _text; }
    [[nodiscard]] const std::vector< qvalue >& items() const { return _items; }
    [[nodiscard]] const qvalue& first() const { return _items[ 0 ]; }
    [[nodiscard]] const qvalue& second() const { return _items[ 1 ]; }
    [[nodiscard]] bool is_interval() const { return _interval; }

    [[nodiscard]] bool contains( const qvalue& x ) const;
    [[nodiscard]] std::string str() const;

    std::strong_ordering operator<=>( const qvalue& other ) const;
    bool operator==( const qvalue& other ) const { return ( *this <=> other ) == std::strong_ordering::equal; }

private:
    kind _kind = kind::boolean;
    double _num = 0;
    std::string _text;
    std::vector< qvalue > _items;
    bool _interval = false;
};

class query_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

using query_env = std::map< std::string, qvalue >;

struct query_node;
using query = std::shared_ptr< const query_node >;

query parse_query( std::string_view text );
std::string to_string( const query& q );
qvalue eval_query( const query& q, const query_env& env );
// Convenience: parse, evaluate, require a boolean.
bool check_query( std::string_view text, const query_env& env );

// Names the formula refers to that look like artifact bindings (R_x, S_x, ...).
std::vector< std::string > query_bindings( const query& q );

} // namespace vove
