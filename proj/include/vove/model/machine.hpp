#pragma once

#include "vove/model/expr.hpp"
#include "vove/model/program.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vove
{

struct enum_set
{
    std::string name;
    std::vector< std::string > elements;
};

struct variable_decl
{
    std::string name;
    type ty;
    value_t lo = 0;
    value_t hi = 0;
};

struct assignment
{
    int target = -1;
    expr rhs;
    program code;
};

struct parameter
{
    std::string name;
    int set = -1;
};

struct operation
{
    std::string name;
    std::vector< parameter > params;
    expr guard;
    std::vector< assignment > effects;
    program guard_code;
    source_pos pos;
};

// One alternative of the initialisation; a deterministic init has one block.
using init_block = std::vector< assignment >;

class machine : public symbol_table
{
public:
    std::string name;
    bool refinement = false;
    std::string refines;
    std::vector< enum_set > sets;
    std::vector< variable_decl > variables;
    expr invariant;
    program invariant_code;
    std::vector< init_block > initialisation;
    std::vector< operation > operations;

    std::optional< int > find_variable( std::string_view n ) const override;
    type variable_type( int index ) const override { return variables.at( static_cast< std::size_t >( index ) ).ty; }
    std::optional< std::pair< int, int > > find_element( std::string_view n ) const override;
    std::optional< int > find_set( std::string_view n ) const override;
    std::string element_name( int set, int index ) const override;
    std::string variable_name( int index ) const override { return variables.at( static_cast< std::size_t >( index ) ).name; }
    std::size_t set_size( int set ) const override { return sets.at( static_cast< std::size_t >( set ) ).elements.size(); }

    std::optional< int > find_operation( std::string_view n ) const;

    // Display form of a value of variable `var`.
    std::string value_name( int var, value_t v ) const;
    std::string value_name( const type& t, value_t v ) const;

    // Number of values in the declared domain of a variable.
    std::size_t domain_size( int var ) const;

    std::vector< param_decl > param_decls( const operation& op ) const;

    // Parses and resolves a predicate in the context of this machine, with the
    // parameters of `op` in scope when given.
    expr parse_predicate( std::string_view text, const operation* op = nullptr ) const;
    program compile( const expr& resolved ) const { return program::compile( resolved, *this ); }
};

machine parse_machine( std::string_view text );
machine load_machine( const std::string& path );
std::string print_machine( const machine& m );
bool structurally_equal( const machine& a, const machine& b );

// `conj` pins a variable or parameter to its whole declared domain and so
// carries no information beyond the type.
bool is_typing_conjunct( const machine& m, const expr& conj, const operation* op = nullptr );

} // namespace vove
