#include "test_util.hpp"

#include <vove/space/analysis.hpp>
#include <vove/space/query.hpp>
#include <vove/space/session.hpp>
#include <vove/space/state_space.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

using namespace vove;
using testing_util::shared;

namespace
{

state_space explored( const machine& m )
{
    state_space s{ shared( m ) };
    s.explore();
    return s;
}

using edge_key = std::tuple< std::vector< value_t >, event, std::vector< value_t > >;

std::set< edge_key > edge_set( const state_space& s )
{
    std::set< edge_key > out;
    for ( std::size_t e = 0; e < s.edge_count(); ++e )
    {
        const auto& t = s.edge( e );
        out.emplace( t.source == state_space::root ? std::vector< value_t >{ -1 } : s.node( t.source ).values, t.label,
                     s.node( t.target ).values );
    }
    return out;
}

std::size_t stat( const space_statistics& st, const std::string& key )
{
    for ( const auto& [ k, v ] : st.rows() )
        if ( k == key )
            return v;
    ADD_FAILURE() << "no statistic " << key;
    return 0;
}

// Replays a label sequence from the root, expanding each visited node.
void replay( model_context& ctx, const std::vector< std::string >& labels )
{
    auto& space = ctx.space;
    std::size_t at = state_space::root;
    for ( const auto& l : labels )
    {
        const auto ev = parse_event( *ctx.model, l );
        bool moved = false;
        for ( const auto e : space.expand( at ) )
        {
            if ( space.edge( e ).label == ev )
            {
                at = space.edge( e ).target;
                moved = true;
                break;
            }
        }
        ASSERT_TRUE( moved ) << l;
        ctx.observe( ev );
        ctx.observe( space.node( at ) );
    }
    space.expand( at );
}

const std::vector< std::string > tr1 = { "INITIALISATION", "cars_ry", "cars_g", "cars_y", "cars_r" };
const std::vector< std::string > tr2 = { "INITIALISATION", "peds_g", "peds_r" };

} // namespace

TEST( StateSpace, TrafficLightStatistics )
{
    const auto s = explored( testing_util::traffic_light() );
    const auto st = statistics( s );
    EXPECT_EQ( st.states, 6u );
    EXPECT_EQ( st.transitions, 7u );
    EXPECT_EQ( st.deadlocks, 0u );
    EXPECT_EQ( stat( st, "Number of States" ), 6u );
    EXPECT_EQ( stat( st, "Number of Transitions" ), 7u );
    EXPECT_EQ( stat( st, "Transitions of INITIALISATION" ), 1u );
    for ( const auto* op : { "cars_ry", "cars_g", "cars_y", "cars_r", "peds_g", "peds_r" } )
        EXPECT_EQ( stat( st, std::string( "Transitions of " ) + op ), 1u ) << op;
    EXPECT_TRUE( s.complete() );
}

TEST( StateSpace, RootOnly )
{
    state_space s{ shared( testing_util::traffic_light() ) };
    const auto st = statistics( s );
    EXPECT_EQ( st.states, 1u );
    EXPECT_EQ( st.transitions, 0u );
    EXPECT_FALSE( s.complete() );
    const auto dot = to_dot( s );
    EXPECT_EQ( std::count( dot.begin(), dot.end(), '[' ), 1 );
}

TEST( StateSpace, RefinementMatchesOracle )
{
    const auto s = explored( testing_util::traffic_light_ref() );
    const auto st = statistics( s );
    EXPECT_EQ( st.states, 36u );
    EXPECT_EQ( st.transitions, 67u );
    EXPECT_EQ( st.deadlocks, 0u );
    EXPECT_EQ( stat( st, "Transitions of Send_cmd" ), 30u );
    EXPECT_EQ( stat( st, "Transitions of Reject_cmd" ), 30u );
    EXPECT_EQ( stat( st, "Transitions of peds_g" ), 1u );
}

TEST( StateSpace, PerOperationCountsSumToTransitions )
{
    for ( const auto* m : { &testing_util::traffic_light(), &testing_util::traffic_light_ref() } )
    {
        const auto st = statistics( explored( *m ) );
        std::size_t sum = 0;
        for ( const auto& [ op, n ] : st.per_operation )
            sum += n;
        EXPECT_EQ( sum, st.transitions );
    }
}

TEST( StateSpace, LimitIsEnforcedBeforeMutation )
{
    state_space s{ shared( testing_util::traffic_light_ref() ), 10 };
    EXPECT_THROW( s.explore(), limit_exceeded );
    EXPECT_LE( s.node_count(), 10u );
    s.set_max_states( 100 );
    s.explore();
    EXPECT_EQ( s.node_count(), 36u );
}

TEST( StateSpace, ShuffledExpansionOrderGivesSameSpace )
{
    const auto& m = testing_util::traffic_light_ref();
    const auto reference = explored( m );
    std::mt19937 rng{ 7 };
    for ( int round = 0; round < 10; ++round )
    {
        state_space s{ shared( m ) };
        while ( !s.complete() )
        {
            auto todo = s.frontier();
            std::shuffle( todo.begin(), todo.end(), rng );
            s.expand( todo.front() );
        }
        EXPECT_EQ( s.node_count(), reference.node_count() );
        EXPECT_EQ( edge_set( s ), edge_set( reference ) );
        EXPECT_EQ( to_dot( s ), to_dot( reference ) );
    }
}

TEST( StateSpace, AbsorbUnitesKnowledge )
{
    const auto m = shared( testing_util::traffic_light() );
    model_context a{ "TL", m, 1000 };
    model_context b{ "TL", m, 1000 };
    replay( a, tr1 );
    replay( b, tr2 );
    a.merge_from( b );
    EXPECT_EQ( a.space.node_count(), 6u );
    EXPECT_EQ( a.space.edge_count(), 7u );
    EXPECT_EQ( edge_set( a.space ), edge_set( explored( *m ) ) );
}

TEST( Projection, RefinementOnQueuedCommand )
{
    const auto g = project( explored( testing_util::traffic_light_ref() ), "queuedCmd" );
    EXPECT_EQ( g.nodes.size(), 7u );
    EXPECT_EQ( g.edges.size(), 19u );
    const projected_edge send{ "cmd_none", "Send_cmd(cmd_cars_r)", "cmd_cars_r" };
    EXPECT_TRUE( std::find( g.edges.begin(), g.edges.end(), send ) != g.edges.end() );
    const projected_edge init{ "", "INITIALISATION", "cmd_none" };
    EXPECT_TRUE( std::find( g.edges.begin(), g.edges.end(), init ) != g.edges.end() );
}

TEST( Projection, TrafficLightOnPeds )
{
    const auto g = project( explored( testing_util::traffic_light() ), "tl_peds" );
    EXPECT_EQ( g.nodes, ( std::vector< std::string >{ "green", "red" } ) );
    const std::vector< projected_edge > expected = {
        { "", "INITIALISATION", "red" },  { "green", "peds_r", "red" }, { "red", "cars_g", "red" },
        { "red", "cars_r", "red" },       { "red", "cars_ry", "red" },  { "red", "cars_y", "red" },
        { "red", "peds_g", "green" },
    };
    EXPECT_EQ( g.edges, expected );
}

TEST( Projection, ConstantExpressionHasOneNode )
{
    const auto g = project( explored( testing_util::traffic_light() ), "1 + 1" );
    EXPECT_EQ( g.nodes, ( std::vector< std::string >{ "2" } ) );
}

TEST( Projection, IsAQuotient )
{
    const auto s = explored( testing_util::traffic_light_ref() );
    const auto g = project( s, "queuedCmd" );
    const auto& m = s.model();
    std::set< projected_edge > images;
    for ( std::size_t e = 0; e < s.edge_count(); ++e )
    {
        const auto& t = s.edge( e );
        const auto var = *m.find_variable( "queuedCmd" );
        const auto val = [ & ]( std::size_t id )
        {
            return id == state_space::root ? std::string{}
                                           : m.value_name( var, s.node( id ).values[ static_cast< std::size_t >( var ) ] );
        };
        images.insert( { val( t.source ), event_name( m, t.label ), val( t.target ) } );
    }
    EXPECT_EQ( std::vector< projected_edge >( images.begin(), images.end() ), g.edges );
}

TEST( Projection, NeedsCompleteSpace )
{
    state_space s{ shared( testing_util::traffic_light() ) };
    EXPECT_THROW( project( s, "tl_cars" ), incomplete_space );
    EXPECT_THROW( enabling_relation( s ), incomplete_space );
}

TEST( EnablingRelation, TrafficLight )
{
    const std::vector< std::pair< std::string, std::string > > expected = {
        { "cars_g", "cars_y" },  { "cars_r", "cars_ry" }, { "cars_r", "peds_g" }, { "cars_ry", "cars_g" },
        { "cars_y", "cars_r" },  { "peds_g", "peds_r" },  { "peds_r", "cars_ry" }, { "peds_r", "peds_g" },
    };
    EXPECT_EQ( enabling_relation( explored( testing_util::traffic_light() ) ), expected );
}

TEST( EnablingRelation, RefinementHasFourteenPairs )
{
    const auto rel = enabling_relation( explored( testing_util::traffic_light_ref() ) );
    EXPECT_EQ( rel.size(), 14u );
    EXPECT_TRUE( std::find( rel.begin(), rel.end(), std::make_pair( std::string( "Reject_cmd" ), std::string( "Send_cmd" ) ) )
                 != rel.end() );
}

TEST( EnablingRelation, SelfLoop )
{
    const auto m = parse_machine( "MACHINE M VARIABLES x INVARIANT x : 0..1 INITIALISATION x := 0\n"
                                  "OPERATIONS tick = BEGIN x := x END END" );
    const std::vector< std::pair< std::string, std::string > > expected = { { "tick", "tick" } };
    EXPECT_EQ( enabling_relation( explored( m ) ), expected );
}

TEST( ReadWriteMatrix, TrafficLightWrites )
{
    const auto env = inspection_bindings( model_context{ "TL", shared( testing_util::traffic_light() ), 100 } );
    EXPECT_TRUE( check_query( "R_rwm[{WRITE}]~[{tl_cars}] = {cars_ry, cars_g, cars_y, cars_r}", env ) );
    EXPECT_TRUE( check_query( "R_rwm[{WRITE}]~[{tl_peds}] = {peds_g, peds_r}", env ) );
    EXPECT_TRUE( check_query( "(peds_g |-> tl_cars) : R_rwm[{READ}]", env ) );
}

TEST( ReadWriteMatrix, EmptyOperationHasNoEntries )
{
    const auto m = parse_machine( "MACHINE M VARIABLES x INVARIANT x : 0..1 INITIALISATION x := 0\n"
                                  "OPERATIONS nop = SELECT TRUE = TRUE THEN skip END END" );
    EXPECT_TRUE( read_write_matrix( m ).empty() );
}

TEST( ReadWriteMatrix, IndependentOfExploration )
{
    const auto& m = testing_util::traffic_light();
    const auto before = read_write_matrix( m );
    explored( m );
    EXPECT_EQ( before, read_write_matrix( m ) );
}

TEST( Coverage, AfterBothTraces )
{
    model_context ctx{ "TL", shared( testing_util::traffic_light() ), 100 };
    replay( ctx, tr1 );
    replay( ctx, tr2 );
    const auto env = inspection_bindings( ctx );
    EXPECT_TRUE( check_query( "R_vct(tl_cars) = 4 & R_vct(tl_peds) = 2", env ) );
    EXPECT_TRUE( check_query( "R_oct = {(cars_ry, COVERED), (cars_g, COVERED), (cars_y, COVERED), (cars_r, COVERED),"
                              " (peds_g, COVERED), (peds_r, COVERED)}",
                              env ) );
    EXPECT_TRUE( check_query( "R_spstat(\"Number of States\") = 6 & R_spstat(\"Number of Transitions\") = 7", env ) );
    EXPECT_TRUE( check_query( "card(Z_svis) = 6 & card(T_svis) = 7", env ) );
}

TEST( Coverage, AfterFirstTraceOnly )
{
    model_context ctx{ "TL", shared( testing_util::traffic_light() ), 100 };
    replay( ctx, tr1 );
    const auto vct = variable_coverage( ctx );
    EXPECT_EQ( vct[ 0 ], std::make_pair( std::string( "tl_cars" ), std::size_t{ 4 } ) );
    EXPECT_EQ( vct[ 1 ], std::make_pair( std::string( "tl_peds" ), std::size_t{ 1 } ) );
    const auto oct = operation_coverage( ctx );
    for ( const auto& [ op, covered ] : oct )
        EXPECT_EQ( covered, op.rfind( "cars", 0 ) == 0 ) << op;
    const auto st = statistics( ctx.space );
    EXPECT_EQ( st.states, 6u );
    EXPECT_EQ( st.transitions, 6u );
}

TEST( Coverage, FreshSession )
{
    model_context ctx{ "TL", shared( testing_util::traffic_light() ), 100 };
    for ( const auto& [ v, n ] : variable_coverage( ctx ) )
        EXPECT_EQ( n, 0u ) << v;
    for ( const auto& [ op, covered ] : operation_coverage( ctx ) )
        EXPECT_FALSE( covered ) << op;
}

TEST( MinMax, Lift )
{
    const auto m = shared( testing_util::lift() );
    model_context ctx{ "Lift", m, 1000 };
    replay( ctx, { "INITIALISATION" } );
    auto mm = min_max( ctx );
    ASSERT_EQ( mm.size(), 1u );
    EXPECT_EQ( mm[ 0 ].second, std::make_pair( 0, 0 ) );

    replay( ctx, { "INITIALISATION", "up", "up", "up" } );
    EXPECT_TRUE( check_query( "min(R_mmv(level)) = 0 & max(R_mmv(level)) = 3", inspection_bindings( ctx ) ) );

    ctx.space.explore();
    ctx.observe_space();
    mm = min_max( ctx );
    EXPECT_EQ( mm[ 0 ].second, std::make_pair( 0, 100 ) );
    EXPECT_EQ( statistics( ctx.space ).states, 102u );
}

TEST( Inspection, ProjectionBindings )
{
    const auto g = project( explored( testing_util::traffic_light_ref() ), "queuedCmd" );
    query_env env;
    bind_projection( env, g, "queuedCmd" );
    EXPECT_TRUE( check_query(
            "S_queuedCmd = {cmd_none, cmd_cars_ry, cmd_cars_g, cmd_cars_y, cmd_cars_r, cmd_peds_g, cmd_peds_r} & "
            "T_queuedCmd = {(INITIALISATION, cmd_none)} \\/ {"
            "cmd_none |-> Send_cmd(cmd_cars_ry) |-> cmd_cars_ry, cmd_none |-> Send_cmd(cmd_cars_g) |-> cmd_cars_g,"
            "cmd_none |-> Send_cmd(cmd_cars_y) |-> cmd_cars_y, cmd_none |-> Send_cmd(cmd_cars_r) |-> cmd_cars_r,"
            "cmd_none |-> Send_cmd(cmd_peds_g) |-> cmd_peds_g, cmd_none |-> Send_cmd(cmd_peds_r) |-> cmd_peds_r,"
            "cmd_cars_ry |-> cars_ry |-> cmd_none, cmd_cars_g |-> cars_g |-> cmd_none,"
            "cmd_cars_y |-> cars_y |-> cmd_none, cmd_cars_r |-> cars_r |-> cmd_none,"
            "cmd_peds_g |-> peds_g |-> cmd_none, cmd_peds_r |-> peds_r |-> cmd_none,"
            "cmd_cars_ry |-> Reject_cmd |-> cmd_none, cmd_cars_g |-> Reject_cmd |-> cmd_none,"
            "cmd_cars_y |-> Reject_cmd |-> cmd_none, cmd_cars_r |-> Reject_cmd |-> cmd_none,"
            "cmd_peds_g |-> Reject_cmd |-> cmd_none, cmd_peds_r |-> Reject_cmd |-> cmd_none}",
            env ) );
}

TEST( Inspection, EnablingRelationBinding )
{
    model_context ctx{ "TL", shared( testing_util::traffic_light() ), 100 };
    EXPECT_EQ( inspection_bindings( ctx ).count( "R_ed" ), 0u );
    ctx.space.explore();
    EXPECT_TRUE( check_query( "{(cars_ry, cars_g), (cars_g, cars_y), (cars_y, cars_r), (cars_r, cars_ry),"
                              " (cars_r, peds_g), (peds_g, peds_r), (peds_r, peds_g), (peds_r, cars_ry)} = R_ed",
                              inspection_bindings( ctx ) ) );
}

TEST( Query, Basics )
{
    const query_env env;
    EXPECT_TRUE( check_query( "1 + 2 * 3 = 7", env ) );
    EXPECT_TRUE( check_query( "7 / 2 : [3.4, 3.6]", env ) );
    EXPECT_TRUE( check_query( "{1, 2} \\/ {2, 3} = {3, 2, 1}", env ) );
    EXPECT_TRUE( check_query( "{1, 2} /\\ {2, 3} = {2}", env ) );
    EXPECT_TRUE( check_query( "{1} <: {1, 2} & not({3} <: {1, 2})", env ) );
    EXPECT_TRUE( check_query( "card({}) = 0 & card({a, a, b}) = 2", env ) );
    EXPECT_TRUE( check_query( "(a, b, c) = (a |-> b |-> c)", env ) );
    EXPECT_TRUE( check_query( "dom({(a, 1), (b, 2)}) = {a, b} & ran({(a, 1), (b, 2)}) = {1, 2}", env ) );
    EXPECT_TRUE( check_query( "{(a, 1), (b, 2)}~[{2}] = {b}", env ) );
    EXPECT_TRUE( check_query( "min({4, 2, 9}) = 2 & max((0, 3)) = 3", env ) );
    EXPECT_TRUE( check_query( "1 = 1 => 2 = 2", env ) );
    EXPECT_TRUE( check_query( "(1 = 2) <=> (2 = 3)", env ) );
    EXPECT_TRUE( check_query( "1 = 2 or 2 /= 3", env ) );
    EXPECT_TRUE( check_query( "-3 < 0 & 3 >= 3 & 2 <= 3 & 4 > 3", env ) );
    EXPECT_TRUE( check_query( "5 /: {1, 2}", env ) );
    EXPECT_TRUE( check_query( "1 = 1 ∧ {1} ⊆ {1} ∧ (a ↦ b) ∈ {a ↦ b}", env ) );
}

TEST( Query, Errors )
{
    const query_env env;
    EXPECT_THROW( check_query( "1 / 0 = 1", env ), query_error );
    EXPECT_THROW( check_query( "{(a, 1), (a, 2)}(a) = 1", env ), query_error );
    EXPECT_THROW( check_query( "{(a, 1)}(b) = 1", env ), query_error );
    EXPECT_THROW( check_query( "R_vct(x) = 1", env ), query_error );
    EXPECT_THROW( check_query( "1 + ", env ), query_error );
    EXPECT_THROW( check_query( "1 + 1", env ), query_error );
    EXPECT_THROW( check_query( "card(1) = 1", env ), query_error );
}

TEST( Query, PrintParseRoundTrip )
{
    const query_env env{ { "R_x", qvalue::set( { qvalue::pair( qvalue::text( "a" ), qvalue::number( 1 ) ) } ) } };
    for ( const auto* text : { "R_x(a) = 1 & card(R_x) : [1, 2]", "R_x~[{1}] \\/ {b} = {a, b}", "not(1 = 2) or -(2) < 3" } )
    {
        const auto q = parse_query( text );
        const auto again = parse_query( to_string( q ) );
        EXPECT_EQ( to_string( q ), to_string( again ) );
        EXPECT_EQ( eval_query( q, env ), eval_query( again, env ) );
        EXPECT_TRUE( eval_query( q, env ).as_bool() ) << text;
    }
    EXPECT_EQ( query_bindings( parse_query( "R_x(a) = card(Z_svis) & b = c" ) ),
               ( std::vector< std::string >{ "R_x", "Z_svis" } ) );
}
