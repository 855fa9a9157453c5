#include "vove/model/semantics.hpp"

#include <algorithm>

namespace vove
{

bool eval_pred( const program& p, const state& s, std::span< const value_t > bindings )
{
    return p.test( s.values, bindings );
}

bool eval_pred( const machine& m, const expr& resolved, const state& s, std::span< const value_t > bindings )
{
    return m.compile( resolved ).test( s.values, bindings );
}

namespace
{

void check_bounds( const machine& m, const state& s, diag_kind kind, const std::string& context )
{
    for ( std::size_t i = 0; i < m.variables.size(); ++i )
    {
        const auto& d = m.variables[ i ];
        if ( s.values[ i ] < d.lo || s.values[ i ] > d.hi )
            throw model_error( kind, context + " sets " + d.name + " to " + std::to_string( s.values[ i ] )
                                             + ", outside " + std::to_string( d.lo ) + ".." + std::to_string( d.hi ) );
    }
}

} // namespace

void check_bounds( const machine& m, const state& s, const std::string& context )
{
    check_bounds( m, s, diag_kind::type_mismatch, context );
}

std::vector< state > initial_states( const machine& m )
{
    std::vector< state > out;
    const state blank{ std::vector< value_t >( m.variables.size(), 0 ) };
    for ( const auto& block : m.initialisation )
    {
        state s = blank;
        for ( const auto& a : block )
            s.values[ static_cast< std::size_t >( a.target ) ] = a.code.eval( blank.values );
        check_bounds( m, s, diag_kind::init_violates_type, "INITIALISATION" );
        if ( std::find( out.begin(), out.end(), s ) == out.end() )
            out.push_back( std::move( s ) );
    }
    return out;
}

std::vector< event > enabled_events( const machine& m, const state& s )
{
    std::vector< event > out;
    for ( std::size_t i = 0; i < m.operations.size(); ++i )
    {
        const auto& op = m.operations[ i ];
        if ( op.params.empty() )
        {
            if ( op.guard_code.test( s.values ) )
                out.push_back( { static_cast< int >( i ), {} } );
            continue;
        }
        std::vector< value_t > args( op.params.size(), 0 );
        while ( true )
        {
            if ( op.guard_code.test( s.values, args ) )
                out.push_back( { static_cast< int >( i ), args } );
            std::size_t k = args.size();
            while ( k > 0 )
            {
                --k;
                if ( static_cast< std::size_t >( ++args[ k ] ) < m.set_size( op.params[ k ].set ) )
                    break;
                args[ k ] = 0;
                if ( k == 0 )
                {
                    k = args.size() + 1;
                    break;
                }
            }
            if ( k > args.size() )
                break;
        }
    }
    return out;
}

bool is_enabled( const machine& m, const state& s, int op )
{
    const auto& o = m.operations.at( static_cast< std::size_t >( op ) );
    if ( o.params.empty() )
        return o.guard_code.test( s.values );
    for ( const auto& e : enabled_events( m, s ) )
        if ( e.op == op )
            return true;
    return false;
}

void apply_unchecked( const machine& m, const state& s, const event& e, state& out )
{
    if ( &out != &s )
        out.values = s.values;
    if ( e.op < 0 )
        return;
    const auto& op = m.operations[ static_cast< std::size_t >( e.op ) ];
    if ( op.effects.size() == 1 )
    {
        const auto& a = op.effects.front();
        out.values[ static_cast< std::size_t >( a.target ) ] = a.code.eval( s.values, e.args );
        return;
    }
    value_t tmp[ 16 ];
    std::vector< value_t > big;
    value_t* vals = tmp;
    if ( op.effects.size() > 16 )
    {
        big.resize( op.effects.size() );
        vals = big.data();
    }
    for ( std::size_t i = 0; i < op.effects.size(); ++i )
        vals[ i ] = op.effects[ i ].code.eval( s.values, e.args );
    for ( std::size_t i = 0; i < op.effects.size(); ++i )
        out.values[ static_cast< std::size_t >( op.effects[ i ].target ) ] = vals[ i ];
}

state apply_event( const machine& m, const state& s, const event& e )
{
    if ( e.op < 0 || static_cast< std::size_t >( e.op ) >= m.operations.size() )
        throw model_error( diag_kind::semantics_error, "no such operation" );
    const auto& op = m.operations[ static_cast< std::size_t >( e.op ) ];
    if ( e.args.size() != op.params.size() )
        throw model_error( diag_kind::unbound_parameter, "operation " + op.name + " expects "
                                                                 + std::to_string( op.params.size() ) + " argument(s)" );
    if ( !op.guard_code.test( s.values, e.args ) )
        throw model_error( diag_kind::guard_not_satisfied,
                           "guard of " + event_name( m, e ) + " does not hold in " + state_string( m, s ) );
    state out;
    apply_unchecked( m, s, e, out );
    check_bounds( m, out, diag_kind::type_mismatch, event_name( m, e ) );
    return out;
}

std::string op_name( const machine& m, int op )
{
    if ( op == event::initialisation )
        return "INITIALISATION";
    if ( op == event::stutter )
        return "(stutter)";
    return m.operations.at( static_cast< std::size_t >( op ) ).name;
}

std::string event_name( const machine& m, const event& e )
{
    std::string out = op_name( m, e.op );
    if ( e.op < 0 || e.args.empty() )
        return out;
    const auto& op = m.operations[ static_cast< std::size_t >( e.op ) ];
    out += "(";
    for ( std::size_t i = 0; i < e.args.size(); ++i )
        out += ( i ? "," : "" ) + m.element_name( op.params[ i ].set, e.args[ i ] );
    return out + ")";
}

std::string event_call( const machine& m, const event& e )
{
    std::string out = op_name( m, e.op );
    if ( e.op < 0 || e.args.empty() )
        return out;
    const auto& op = m.operations[ static_cast< std::size_t >( e.op ) ];
    out += "(";
    for ( std::size_t i = 0; i < e.args.size(); ++i )
        out += ( i ? "," : "" ) + op.params[ i ].name + "=" + m.element_name( op.params[ i ].set, e.args[ i ] );
    return out + ")";
}

std::string state_string( const machine& m, const state& s )
{
    std::string out = "(";
    for ( std::size_t i = 0; i < s.values.size() && i < m.variables.size(); ++i )
        out += ( i ? ", " : "" ) + m.variables[ i ].name + "=" + m.value_name( static_cast< int >( i ), s.values[ i ] );
    return out + ")";
}

event parse_event( const machine& m, std::string_view text )
{
    token_stream ts{ tokenize( text ) };
    const auto name = ts.expect_identifier();
    event e;
    if ( name == "INITIALISATION" )
    {
        if ( !ts.at_end() )
            ts.fail( "unexpected input after INITIALISATION" );
        return e;
    }
    const auto op = m.find_operation( name );
    if ( !op )
        throw model_error( diag_kind::unknown_identifier, "unknown operation '" + name + "'" );
    e.op = *op;
    const auto& decl = m.operations[ static_cast< std::size_t >( *op ) ];
    std::vector< bool > bound( decl.params.size(), false );
    e.args.assign( decl.params.size(), 0 );
    if ( ts.accept( "(" ) && !ts.accept( ")" ) )
    {
        std::size_t position = 0;
        do
        {
            auto word = ts.expect_identifier();
            std::size_t slot = position;
            if ( ts.accept( "=" ) )
            {
                const auto it = std::find_if( decl.params.begin(), decl.params.end(),
                                              [ & ]( const parameter& p ) { return p.name == word; } );
                if ( it == decl.params.end() )
                    throw model_error( diag_kind::unknown_identifier,
                                       "operation " + name + " has no parameter '" + word + "'" );
                slot = static_cast< std::size_t >( it - decl.params.begin() );
                word = ts.expect_identifier();
            }
            if ( slot >= decl.params.size() )
                throw model_error( diag_kind::unbound_parameter, "too many arguments for " + name );
            const auto el = m.find_element( word );
            if ( !el || el->first != decl.params[ slot ].set )
                throw model_error( diag_kind::type_mismatch,
                                   "'" + word + "' is not a value of parameter " + decl.params[ slot ].name );
            e.args[ slot ] = el->second;
            bound[ slot ] = true;
            ++position;
        } while ( ts.accept( "," ) );
        ts.expect( ")" );
    }
    if ( !ts.at_end() )
        ts.fail( "unexpected input after event" );
    for ( std::size_t i = 0; i < bound.size(); ++i )
        if ( !bound[ i ] )
            throw model_error( diag_kind::unbound_parameter,
                               "parameter " + decl.params[ i ].name + " of " + name + " is not bound" );
    return e;
}

} // namespace vove
