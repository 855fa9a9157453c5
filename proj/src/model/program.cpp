#include "vove/model/program.hpp"

#include <algorithm>

namespace vove
{

namespace
{

bool constant_value( const expr& e, value_t& out )
{
    switch ( e->kind )
    {
    case expr_kind::int_lit:
    case expr_kind::element:
    case expr_kind::bool_lit: out = static_cast< value_t >( e->value ); return true;
    case expr_kind::neg:
        if ( constant_value( e->args[ 0 ], out ) )
        {
            out = -out;
            return true;
        }
        return false;
    default: return false;
    }
}

} // namespace

void program::push_op( opcode op, std::int32_t a, std::int32_t b, int delta, std::size_t& depth )
{
    _code.push_back( { op, a, b } );
    depth = static_cast< std::size_t >( static_cast< long >( depth ) + delta );
    _depth = std::max( _depth, depth );
}

void program::emit( const expr& e, const symbol_table& symbols, std::size_t& depth )
{
    auto binary = [ & ]( opcode op )
    {
        emit( e->args[ 0 ], symbols, depth );
        emit( e->args[ 1 ], symbols, depth );
        push_op( op, 0, 0, -1, depth );
    };

    switch ( e->kind )
    {
    case expr_kind::bool_lit:
    case expr_kind::int_lit:
    case expr_kind::element: push_op( opcode::push, static_cast< std::int32_t >( e->value ), 0, 1, depth ); return;
    case expr_kind::variable: push_op( opcode::load_var, static_cast< std::int32_t >( e->value ), 0, 1, depth ); return;
    case expr_kind::parameter:
        push_op( opcode::load_param, static_cast< std::int32_t >( e->value ), 0, 1, depth );
        return;
    case expr_kind::not_:
        emit( e->args[ 0 ], symbols, depth );
        push_op( opcode::not_, 0, 0, 0, depth );
        return;
    case expr_kind::neg:
        emit( e->args[ 0 ], symbols, depth );
        push_op( opcode::neg, 0, 0, 0, depth );
        return;
    case expr_kind::and_: binary( opcode::and_ ); return;
    case expr_kind::or_: binary( opcode::or_ ); return;
    case expr_kind::implies: binary( opcode::implies ); return;
    case expr_kind::equiv: binary( opcode::equiv ); return;
    case expr_kind::eq: binary( opcode::eq ); return;
    case expr_kind::neq: binary( opcode::neq ); return;
    case expr_kind::lt: binary( opcode::lt ); return;
    case expr_kind::le: binary( opcode::le ); return;
    case expr_kind::gt: binary( opcode::gt ); return;
    case expr_kind::ge: binary( opcode::ge ); return;
    case expr_kind::add: binary( opcode::add ); return;
    case expr_kind::sub: binary( opcode::sub ); return;
    case expr_kind::member:
    case expr_kind::not_member:
    {
        emit( e->args[ 0 ], symbols, depth );
        const auto& rhs = e->args[ 1 ];
        if ( rhs->kind == expr_kind::set_name )
        {
            const auto n = static_cast< std::int32_t >( symbols.set_size( rhs->set ) );
            push_op( opcode::in_const_range, 0, n - 1, 0, depth );
        }
        else if ( rhs->kind == expr_kind::range )
        {
            value_t lo = 0;
            value_t hi = 0;
            if ( constant_value( rhs->args[ 0 ], lo ) && constant_value( rhs->args[ 1 ], hi ) )
                push_op( opcode::in_const_range, lo, hi, 0, depth );
            else
            {
                emit( rhs->args[ 0 ], symbols, depth );
                emit( rhs->args[ 1 ], symbols, depth );
                push_op( opcode::in_dyn_range, 0, 0, -2, depth );
            }
        }
        else if ( rhs->kind == expr_kind::set_lit )
        {
            std::vector< value_t > values;
            bool all_const = true;
            for ( const auto& item : rhs->args )
            {
                value_t v = 0;
                if ( !constant_value( item, v ) )
                {
                    all_const = false;
                    break;
                }
                values.push_back( v );
            }
            if ( all_const )
            {
                const bool small = std::all_of( values.begin(), values.end(),
                                                []( value_t v ) { return v >= 0 && v < 64; } );
                if ( small )
                {
                    std::uint64_t mask = 0;
                    for ( auto v : values )
                        mask |= std::uint64_t{ 1 } << v;
                    _masks.push_back( mask );
                    push_op( opcode::in_mask, static_cast< std::int32_t >( _masks.size() - 1 ), 0, 0, depth );
                }
                else
                {
                    const auto at = static_cast< std::int32_t >( _table.size() );
                    _table.insert( _table.end(), values.begin(), values.end() );
                    push_op( opcode::in_table, at, static_cast< std::int32_t >( values.size() ), 0, depth );
                }
            }
            else
            {
                for ( const auto& item : rhs->args )
                    emit( item, symbols, depth );
                const auto n = static_cast< std::int32_t >( rhs->args.size() );
                push_op( opcode::in_dyn_list, 0, n, -n, depth );
            }
        }
        else
            throw model_error( diag_kind::type_mismatch, rhs->pos, "unsupported membership right-hand side" );
        if ( e->kind == expr_kind::not_member )
            push_op( opcode::not_, 0, 0, 0, depth );
        return;
    }
    case expr_kind::name:
        throw model_error( diag_kind::unknown_identifier, e->pos, "unresolved identifier '" + e->name + "'" );
    case expr_kind::set_name:
    case expr_kind::set_lit:
    case expr_kind::range:
        throw model_error( diag_kind::type_mismatch, e->pos, "set expression used as a value" );
    }
}

program program::compile( const expr& resolved, const symbol_table& symbols )
{
    program p;
    std::size_t depth = 0;
    p.emit( resolved, symbols, depth );
    return p;
}

bool program::reads_variables() const
{
    return std::any_of( _code.begin(), _code.end(), []( const instr& i ) { return i.op == opcode::load_var; } );
}

value_t program::eval( std::span< const value_t > vars, std::span< const value_t > params ) const
{
    value_t small[ 32 ];
    std::vector< value_t > big;
    value_t* st = small;
    if ( _depth > 32 )
    {
        big.resize( _depth );
        st = big.data();
    }
    std::size_t sp = 0;

    for ( const auto& in : _code )
    {
        switch ( in.op )
        {
        case opcode::push: st[ sp++ ] = in.a; break;
        case opcode::load_var: st[ sp++ ] = vars[ static_cast< std::size_t >( in.a ) ]; break;
        case opcode::load_param:
            if ( static_cast< std::size_t >( in.a ) >= params.size() )
                throw model_error( diag_kind::unbound_parameter,
                                   "parameter #" + std::to_string( in.a ) + " has no binding" );
            st[ sp++ ] = params[ static_cast< std::size_t >( in.a ) ];
            break;
        case opcode::not_: st[ sp - 1 ] = st[ sp - 1 ] == 0; break;
        case opcode::neg: st[ sp - 1 ] = -st[ sp - 1 ]; break;
        case opcode::and_:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] != 0 && st[ sp ] != 0;
            break;
        case opcode::or_:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] != 0 || st[ sp ] != 0;
            break;
        case opcode::implies:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] == 0 || st[ sp ] != 0;
            break;
        case opcode::equiv:
            --sp;
            st[ sp - 1 ] = ( st[ sp - 1 ] != 0 ) == ( st[ sp ] != 0 );
            break;
        case opcode::eq:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] == st[ sp ];
            break;
        case opcode::neq:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] != st[ sp ];
            break;
        case opcode::lt:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] < st[ sp ];
            break;
        case opcode::le:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] <= st[ sp ];
            break;
        case opcode::gt:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] > st[ sp ];
            break;
        case opcode::ge:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] >= st[ sp ];
            break;
        case opcode::add:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] + st[ sp ];
            break;
        case opcode::sub:
            --sp;
            st[ sp - 1 ] = st[ sp - 1 ] - st[ sp ];
            break;
        case opcode::in_mask:
        {
            const auto x = st[ sp - 1 ];
            st[ sp - 1 ] = x >= 0 && x < 64 && ( ( _masks[ static_cast< std::size_t >( in.a ) ] >> x ) & 1U );
            break;
        }
        case opcode::in_const_range:
        {
            const auto x = st[ sp - 1 ];
            st[ sp - 1 ] = x >= in.a && x <= in.b;
            break;
        }
        case opcode::in_table:
        {
            const auto x = st[ sp - 1 ];
            const auto* first = _table.data() + in.a;
            st[ sp - 1 ] = std::find( first, first + in.b, x ) != first + in.b;
            break;
        }
        case opcode::in_dyn_range:
        {
            sp -= 2;
            const auto x = st[ sp - 1 ];
            st[ sp - 1 ] = x >= st[ sp ] && x <= st[ sp + 1 ];
            break;
        }
        case opcode::in_dyn_list:
        {
            sp -= static_cast< std::size_t >( in.b );
            const auto x = st[ sp - 1 ];
            st[ sp - 1 ] = std::find( st + sp, st + sp + in.b, x ) != st + sp + in.b;
            break;
        }
        }
    }
    return sp ? st[ 0 ] : 0;
}

} // namespace vove
