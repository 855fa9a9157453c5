#pragma once

#include "vove/model/expr.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace vove
{

class symbol_table;

// Flat postfix form of a resolved expression. Booleans are 0/1, enum
// elements their index within the set.
class program
{
public:
    enum class opcode : std::uint8_t
    {
        push,
        load_var,
        load_param,
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
        add,
        sub,
        neg,
        in_mask,        // a: mask index
        in_const_range, // [a, b]
        in_table,       // table[a .. a+b)
        in_dyn_range,   // pops hi, lo, x
        in_dyn_list     // pops b items, then x
    };

    struct instr
    {
        opcode op = opcode::push;
        std::int32_t a = 0;
        std::int32_t b = 0;
    };

    program() = default;
    static program compile( const expr& resolved, const symbol_table& symbols );

    [[nodiscard]] value_t eval( std::span< const value_t > vars, std::span< const value_t > params = {} ) const;
    [[nodiscard]] bool test( std::span< const value_t > vars, std::span< const value_t > params = {} ) const
    {
        return eval( vars, params ) != 0;
    }

    [[nodiscard]] bool reads_variables() const;
    [[nodiscard]] bool empty() const { return _code.empty(); }

private:
    std::vector< instr > _code;
    std::vector< std::uint64_t > _masks;
    std::vector< value_t > _table;
    std::size_t _depth = 0;

    void emit( const expr& e, const symbol_table& symbols, std::size_t& depth );
    void push_op( opcode op, std::int32_t a, std::int32_t b, int delta, std::size_t& depth );
};

} // namespace vove
