#pragma once

#include "vove/model/diagnostic.hpp"
#include "vove/model/lexer.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vove
{

using value_t = std::int32_t;

enum class expr_kind
{
    bool_lit,
    int_lit,
    name,       // unresolved identifier
    variable,   // value = variable index
    parameter,  // value = parameter index
    element,    // value = element index, set = owning set
    set_name,   // set = set index
    set_lit,
    range,
    not_,
    and_,
    or_,
    implies,
    equiv,
    eq,
    neq,
    lt,
    le,
    gt,
    ge,
    member,
    not_member,
    add,
    sub,
    neg
};

struct type
{
    enum class tag
    {
        unknown,
        boolean,
        integer,
        element,
        element_set,
        integer_set
    };

    tag t = tag::unknown;
    int set = -1;

    bool operator==( const type& ) const = default;

    static type boolean() { return { tag::boolean, -1 }; }
    static type integer() { return { tag::integer, -1 }; }
    static type element( int set ) { return { tag::element, set }; }
    static type element_set( int set ) { return { tag::element_set, set }; }
    static type integer_set() { return { tag::integer_set, -1 }; }
};

struct expr_node;
using expr = std::shared_ptr< const expr_node >;

struct expr_node
{
    expr_kind kind = expr_kind::bool_lit;
    std::vector< expr > args;
    std::int64_t value = 0;
    int set = -1;
    std::string name;
    source_pos pos;
    type ty;
};

expr make_expr( expr_kind kind, std::vector< expr > args = {}, std::int64_t value = 0, std::string name = {},
                source_pos pos = {} );
expr make_bool( bool b );
expr make_and( std::vector< expr > conjuncts );

bool is_connective( expr_kind kind );
bool structurally_equal( const expr& a, const expr& b );

// Flattens nested top-level `&` into a list.
std::vector< expr > conjuncts( const expr& e );

// Precedence climbing over
//   <=>  <  =>  <  or  <  &  <  not  <  comparison / membership  <  ..  <  + -  <  unary -
expr parse_expression( token_stream& ts );
expr parse_expression( std::string_view text );

std::string to_string( const expr& e );

// Symbol environment used to resolve identifiers.
class symbol_table
{
public:
    virtual ~symbol_table() = default;
    virtual std::optional< int > find_variable( std::string_view name ) const = 0;
    virtual type variable_type( int index ) const = 0;
    virtual std::optional< std::pair< int, int > > find_element( std::string_view name ) const = 0;
    virtual std::optional< int > find_set( std::string_view name ) const = 0;
    virtual std::string element_name( int set, int index ) const = 0;
    virtual std::string variable_name( int index ) const = 0;
    virtual std::size_t set_size( int set ) const = 0;
};

struct param_decl
{
    std::string name;
    type ty;
};

// Resolves identifiers and type-checks; returns a new tree with types set.
expr resolve( const expr& e, const symbol_table& symbols, const std::vector< param_decl >& params = {} );
expr resolve_predicate( const expr& e, const symbol_table& symbols, const std::vector< param_decl >& params = {} );

} // namespace vove
