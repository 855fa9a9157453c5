#include "vove/space/analysis.hpp"

#include "vove/model/expr.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace vove
{

std::vector< std::pair< std::string, std::size_t > > space_statistics::rows() const
{
    std::vector< std::pair< std::string, std::size_t > > out = {
        { "Number of States", states },
        { "Number of Transitions", transitions },
        { "Deadlocked States", deadlocks },
    };
    for ( const auto& [ op, n ] : per_operation )
        out.emplace_back( "Transitions of " + op, n );
    return out;
}

space_statistics statistics( const state_space& space )
{
    const auto& m = space.model();
    space_statistics st;
    st.states = space.node_count();
    st.transitions = space.edge_count();
    for ( std::size_t i = 1; i < space.node_count(); ++i )
        if ( space.expanded( i ) && space.out_edges( i ).empty() )
            ++st.deadlocks;

    std::vector< std::size_t > counts( m.operations.size() + 1, 0 );
    for ( std::size_t e = 0; e < space.edge_count(); ++e )
        ++counts[ static_cast< std::size_t >( space.edge( e ).label.op + 1 ) ];
    st.per_operation.emplace_back( "INITIALISATION", counts[ 0 ] );
    for ( std::size_t i = 0; i < m.operations.size(); ++i )
        st.per_operation.emplace_back( m.operations[ i ].name, counts[ i + 1 ] );
    return st;
}

namespace
{

std::string csv_field( const std::string& s )
{
    if ( s.find_first_of( ",\"\n" ) == std::string::npos )
        return s;
    std::string out = "\"";
    for ( char c : s )
    {
        if ( c == '"' )
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string dot_escape( const std::string& s )
{
    std::string out;
    for ( char c : s )
    {
        if ( c == '"' || c == '\\' )
            out += '\\';
        out += c;
    }
    return out;
}

void collect_reads( const expr& e, std::set< int >& out )
{
    if ( !e )
        return;
    if ( e->kind == expr_kind::variable )
        out.insert( static_cast< int >( e->value ) );
    for ( const auto& a : e->args )
        collect_reads( a, out );
}

// Formula atoms: integers become numbers and TRUE/FALSE booleans so that
// literals written in a formula compare equal to projected values.
qvalue atom( const std::string& s )
{
    if ( s == "TRUE" || s == "FALSE" )
        return qvalue::boolean( s == "TRUE" );
    long long v = 0;
    const auto* end = s.data() + s.size();
    if ( !s.empty() && std::from_chars( s.data(), end, v ).ptr == end )
        return qvalue::number( static_cast< double >( v ) );
    return qvalue::text( s );
}

qvalue value_atom( const machine& m, const type& t, value_t v )
{
    if ( t.t == type::tag::boolean )
        return qvalue::boolean( v != 0 );
    if ( t.t == type::tag::element )
        return qvalue::text( m.value_name( t, v ) );
    return qvalue::number( v );
}

} // namespace

std::string statistics_csv( const space_statistics& stats )
{
    std::string out = "key,value\n";
    for ( const auto& [ k, v ] : stats.rows() )
        out += csv_field( k ) + "," + std::to_string( v ) + "\n";
    return out;
}

projected_graph project( const state_space& space, std::string_view expression )
{
    if ( !space.complete() )
        throw incomplete_space( "projection needs an explored state space" );
    const auto& m = space.model();
    const auto e = resolve( parse_expression( expression ), m );
    const auto code = m.compile( e );

    std::vector< std::string > value( space.node_count() );
    std::set< std::string > nodes;
    for ( std::size_t i = 1; i < space.node_count(); ++i )
    {
        value[ i ] = m.value_name( e->ty, code.eval( space.node( i ).values, {} ) );
        nodes.insert( value[ i ] );
    }

    std::set< projected_edge > edges;
    for ( std::size_t k = 0; k < space.edge_count(); ++k )
    {
        const auto& t = space.edge( k );
        edges.insert( { t.source == state_space::root ? std::string{} : value[ t.source ], event_name( m, t.label ),
                        value[ t.target ] } );
    }

    projected_graph g;
    g.expression = std::string( expression );
    g.nodes.assign( nodes.begin(), nodes.end() );
    g.edges.assign( edges.begin(), edges.end() );
    return g;
}

std::vector< std::pair< std::string, std::string > > enabling_relation( const state_space& space )
{
    if ( !space.complete() )
        throw incomplete_space( "enabling relation needs an explored state space" );
    const auto& m = space.model();
    std::set< std::pair< int, int > > rel;
    for ( std::size_t k = 0; k < space.edge_count(); ++k )
    {
        const auto& t = space.edge( k );
        if ( t.label.op < 0 )
            continue;
        for ( const auto e : space.out_edges( t.target ) )
            rel.emplace( t.label.op, space.edge( e ).label.op );
    }
    std::vector< std::pair< std::string, std::string > > out;
    for ( const auto& [ a, b ] : rel )
        out.emplace_back( op_name( m, a ), op_name( m, b ) );
    std::sort( out.begin(), out.end() );
    return out;
}

std::vector< rw_entry > read_write_matrix( const machine& m )
{
    std::set< rw_entry > out;
    for ( const auto& op : m.operations )
    {
        std::set< int > reads;
        collect_reads( op.guard, reads );
        for ( const auto& a : op.effects )
        {
            collect_reads( a.rhs, reads );
            out.insert( { true, op.name, m.variables[ static_cast< std::size_t >( a.target ) ].name } );
        }
        for ( const auto v : reads )
            out.insert( { false, op.name, m.variables[ static_cast< std::size_t >( v ) ].name } );
    }
    return { out.begin(), out.end() };
}

std::vector< std::pair< std::string, std::size_t > > variable_coverage( const model_context& ctx )
{
    std::vector< std::pair< std::string, std::size_t > > out;
    for ( std::size_t i = 0; i < ctx.model->variables.size(); ++i )
        out.emplace_back( ctx.model->variables[ i ].name, ctx.value_sets[ i ].size() );
    return out;
}

std::vector< std::pair< std::string, bool > > operation_coverage( const model_context& ctx )
{
    std::vector< std::pair< std::string, bool > > out;
    for ( std::size_t i = 0; i < ctx.model->operations.size(); ++i )
        out.emplace_back( ctx.model->operations[ i ].name, ctx.visit_counts[ i ] > 0 );
    return out;
}

std::vector< std::pair< std::string, std::pair< value_t, value_t > > > min_max( const model_context& ctx )
{
    std::vector< std::pair< std::string, std::pair< value_t, value_t > > > out;
    for ( std::size_t i = 0; i < ctx.model->variables.size(); ++i )
    {
        const auto& v = ctx.model->variables[ i ];
        const auto& seen = ctx.value_sets[ i ];
        if ( v.ty.t == type::tag::element || seen.empty() )
            continue;
        out.emplace_back( v.name, std::make_pair( *seen.begin(), *seen.rbegin() ) );
    }
    return out;
}

std::string to_dot( const state_space& space )
{
    const auto& m = space.model();
    const auto order = space.canonical_order();
    std::vector< std::size_t > rank( space.node_count(), 0 );
    for ( std::size_t i = 0; i < order.size(); ++i )
        rank[ order[ i ] ] = i;

    std::ostringstream out;
    out << "digraph \"" << dot_escape( m.name ) << "\" {\n";
    out << "  n0 [label=\"root\", shape=point];\n";
    for ( std::size_t i = 1; i < order.size(); ++i )
    {
        const auto id = order[ i ];
        out << "  n" << i << " [label=\"" << dot_escape( state_string( m, space.node( id ) ) ) << "\"";
        if ( !space.expanded( id ) )
            out << ", style=dashed";
        out << "];\n";
    }
    for ( const auto id : order )
        for ( const auto e : space.out_edges( id ) )
        {
            const auto& t = space.edge( e );
            out << "  n" << rank[ t.source ] << " -> n" << rank[ t.target ] << " [label=\""
                << dot_escape( event_name( m, t.label ) ) << "\"];\n";
        }
    out << "}\n";
    return out.str();
}

std::string to_dot( const projected_graph& g )
{
    std::map< std::string, std::size_t > id;
    std::ostringstream out;
    out << "digraph \"" << dot_escape( g.expression ) << "\" {\n";
    out << "  n0 [label=\"root\", shape=point];\n";
    for ( const auto& n : g.nodes )
    {
        const auto k = id.size() + 1;
        id[ n ] = k;
        out << "  n" << k << " [label=\"" << dot_escape( n ) << "\"];\n";
    }
    for ( const auto& e : g.edges )
    {
        const auto src = e.source.empty() ? 0 : id.at( e.source );
        out << "  n" << src << " -> n" << id.at( e.target ) << " [label=\"" << dot_escape( e.label ) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

query_env inspection_bindings( const model_context& ctx )
{
    const auto& m = *ctx.model;
    const auto& space = ctx.space;
    query_env env;

    const auto st = statistics( space );
    std::vector< qvalue > stat;
    for ( const auto& [ k, v ] : st.rows() )
        stat.push_back( qvalue::pair( qvalue::text( k ), qvalue::number( static_cast< double >( v ) ) ) );
    stat.push_back( qvalue::pair( qvalue::text( "States" ), qvalue::number( static_cast< double >( st.states ) ) ) );
    stat.push_back(
            qvalue::pair( qvalue::text( "Transitions" ), qvalue::number( static_cast< double >( st.transitions ) ) ) );
    stat.push_back(
            qvalue::pair( qvalue::text( "Deadlocked" ), qvalue::number( static_cast< double >( st.deadlocks ) ) ) );
    env[ "R_spstat" ] = qvalue::set( stat );
    env[ "R_stat" ] = qvalue::set( std::move( stat ) );

    auto node_name = [ & ]( std::size_t id )
    { return id == state_space::root ? qvalue::text( "root" ) : qvalue::text( state_string( m, space.node( id ) ) ); };
    std::vector< qvalue > nodes;
    for ( std::size_t i = 0; i < space.node_count(); ++i )
        nodes.push_back( node_name( i ) );
    std::vector< qvalue > edges;
    for ( std::size_t k = 0; k < space.edge_count(); ++k )
    {
        const auto& t = space.edge( k );
        edges.push_back( qvalue::pair( qvalue::pair( node_name( t.source ), qvalue::text( event_name( m, t.label ) ) ),
                                       node_name( t.target ) ) );
    }
    env[ "Z_svis" ] = qvalue::set( std::move( nodes ) );
    env[ "T_svis" ] = qvalue::set( std::move( edges ) );

    std::vector< qvalue > rwm;
    for ( const auto& r : read_write_matrix( m ) )
        rwm.push_back( qvalue::pair( qvalue::text( r.write ? "WRITE" : "READ" ),
                                     qvalue::pair( qvalue::text( r.op ), qvalue::text( r.var ) ) ) );
    env[ "R_rwm" ] = qvalue::set( std::move( rwm ) );

    std::vector< qvalue > vct;
    for ( const auto& [ v, n ] : variable_coverage( ctx ) )
        vct.push_back( qvalue::pair( qvalue::text( v ), qvalue::number( static_cast< double >( n ) ) ) );
    env[ "R_vct" ] = qvalue::set( std::move( vct ) );

    std::vector< qvalue > oct;
    for ( const auto& [ op, covered ] : operation_coverage( ctx ) )
        oct.push_back( qvalue::pair( qvalue::text( op ), qvalue::text( covered ? "COVERED" : "UNCOVERED" ) ) );
    env[ "R_oct" ] = qvalue::set( std::move( oct ) );

    std::vector< qvalue > mmv;
    for ( const auto& [ v, mm ] : min_max( ctx ) )
    {
        const auto& ty = m.variables[ static_cast< std::size_t >( *m.find_variable( v ) ) ].ty;
        mmv.push_back( qvalue::pair( qvalue::text( v ),
                                     qvalue::pair( value_atom( m, ty, mm.first ), value_atom( m, ty, mm.second ) ) ) );
    }
    env[ "R_mmv" ] = qvalue::set( std::move( mmv ) );

    if ( space.complete() )
    {
        std::vector< qvalue > ed;
        for ( const auto& [ a, b ] : enabling_relation( space ) )
            ed.push_back( qvalue::pair( qvalue::text( a ), qvalue::text( b ) ) );
        env[ "R_ed" ] = qvalue::set( std::move( ed ) );
    }
    return env;
}

void bind_projection( query_env& env, const projected_graph& g, const std::string& name )
{
    std::vector< qvalue > nodes;
    for ( const auto& n : g.nodes )
        nodes.push_back( atom( n ) );
    std::vector< qvalue > edges;
    for ( const auto& e : g.edges )
    {
        if ( e.source.empty() )
            edges.push_back( qvalue::pair( qvalue::text( "INITIALISATION" ), atom( e.target ) ) );
        else
            edges.push_back(
                    qvalue::pair( qvalue::pair( atom( e.source ), qvalue::text( e.label ) ), atom( e.target ) ) );
    }
    const auto s = qvalue::set( std::move( nodes ) );
    const auto t = qvalue::set( std::move( edges ) );
    env[ "S_" + name ] = s;
    env[ "T_" + name ] = t;
    env[ "S_proj" ] = s;
    env[ "T_proj" ] = t;
}

} // namespace vove
