#include "test_util.hpp"

#include <vove/sim/config.hpp>
#include <vove/sim/simulator.hpp>
#include <vove/sim/statistics.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace vove;

namespace
{

std::string corpus_config()
{
    std::ifstream in{ testing_util::corpus( "traffic_light_sim.json" ) };
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const simulator& tl_sim()
{
    static const simulator s{ testing_util::shared( testing_util::traffic_light() ), parse_sim_config( corpus_config() ) };
    return s;
}

sim_error::kind error_kind( const std::string& text )
{
    try
    {
        parse_sim_config( text );
    }
    catch ( const sim_error& e )
    {
        return e.what_kind;
    }
    ADD_FAILURE() << "accepted: " << text;
    return sim_error::kind::syntax;
}

const condition both_red = condition::parse( "<PRED, tl_cars = red & tl_peds = red>" );

} // namespace

TEST( SimConfig, ParsesTrafficLightActivations )
{
    const auto c = parse_sim_config( corpus_config() );
    ASSERT_EQ( c.activations.size(), 8u );
    int choices = 0;
    for ( const auto& a : c.activations )
        choices += a.choice;
    EXPECT_EQ( choices, 1 );
    const auto* ch = c.find( "choose" );
    ASSERT_NE( ch, nullptr );
    ASSERT_EQ( ch->choose.size(), 2u );
    EXPECT_EQ( ch->choose[ 0 ].first, "cars_ry" );
    EXPECT_EQ( ch->choose[ 0 ].second.str(), "0.5" );
    EXPECT_EQ( c.find( "cars_g" )->after, 500 );
    EXPECT_EQ( c.find( "cars_g" )->activating, std::vector< std::string >{ "cars_y" } );
    EXPECT_EQ( parse_sim_config( to_json( c ) ).activations.size(), 8u );
    EXPECT_EQ( to_json( parse_sim_config( to_json( c ) ) ), to_json( c ) );
}

TEST( SimConfig, TrivialAndInvalid )
{
    const auto c = parse_sim_config( R"({"activations":[{"id":"$initialise_machine","execute":"$initialise_machine"}]})" );
    EXPECT_EQ( c.activations.size(), 1u );
    EXPECT_EQ( error_kind( R"({"activations":[{"id":"$initialise_machine","execute":"$initialise_machine","activating":"c"},
        {"id":"c","chooseActivation":{"a":"0.6","b":"0.6"}},{"id":"a","execute":"x"},{"id":"b","execute":"y"}]})" ),
               sim_error::kind::bad_probability_sum );
    EXPECT_EQ( error_kind( R"({"activations":[{"id":"$initialise_machine","execute":"$initialise_machine","activating":"nope"}]})" ),
               sim_error::kind::unknown_activation );
    EXPECT_EQ( error_kind( R"({"activations":[{"id":"a","execute":"x"}]})" ), sim_error::kind::unknown_activation );
    EXPECT_EQ( error_kind( R"({"activations":[{"id":"$initialise_machine","execute":"$initialise_machine","priority":1}]})" ),
               sim_error::kind::syntax );
    EXPECT_EQ( error_kind( R"({"activations":[], "extra":1})" ), sim_error::kind::syntax );
    EXPECT_EQ( error_kind( R"({"activations":[)" ), sim_error::kind::syntax );
    EXPECT_EQ( error_kind( R"({"activations":[{"id":"$initialise_machine","execute":"$initialise_machine"},
        {"id":"$initialise_machine","execute":"$initialise_machine"}]})" ),
               sim_error::kind::syntax );
    // Exact decimals: three thirds that sum to 0.999 are rejected, 0.25 + 0.75 is not.
    EXPECT_EQ( error_kind( R"({"activations":[{"id":"$initialise_machine","execute":"$initialise_machine","activating":"c"},
        {"id":"c","chooseActivation":{"a":"0.333","b":"0.333","d":"0.333"}},{"id":"a","execute":"x"},{"id":"b","execute":"x"},
        {"id":"d","execute":"x"}]})" ),
               sim_error::kind::bad_probability_sum );
    EXPECT_NO_THROW( parse_sim_config( R"({"activations":[{"id":"$initialise_machine","execute":"$initialise_machine","activating":"c"},
        {"id":"c","chooseActivation":{"a":"0.25","b":"0.75"}},{"id":"a","execute":"x"},{"id":"b","execute":"y"}]})" ) );
    EXPECT_THROW( ( simulator{ testing_util::shared( testing_util::traffic_light() ),
                               parse_sim_config( R"({"activations":[{"id":"$initialise_machine","execute":"$initialise_machine","activating":"a"},
                                   {"id":"a","execute":"fly"}]})" ) } ),
                  sim_error );
}

TEST( Simulate, CarsBranchTiming )
{
    const auto& sim = tl_sim();
    const auto& m = sim.model();
    bool found = false;
    for ( std::uint64_t seed = 0; seed < 64 && !found; ++seed )
    {
        const auto t = sim.simulate( seed, condition::parse( "<STEPS, 4>" ) );
        ASSERT_EQ( t.events.size(), 5u );
        EXPECT_EQ( t.events[ 0 ].label.op, event::initialisation );
        EXPECT_EQ( t.events[ 0 ].time, 0 );
        if ( event_name( m, t.events[ 1 ].label ) != "cars_ry" )
            continue;
        found = true;
        std::vector< std::pair< std::int64_t, std::string > > got;
        for ( std::size_t i = 1; i < t.events.size(); ++i )
            got.emplace_back( t.events[ i ].time, event_name( m, t.events[ i ].label ) );
        EXPECT_EQ( got, ( std::vector< std::pair< std::int64_t, std::string > >{
                                { 5000, "cars_ry" }, { 5500, "cars_g" }, { 10500, "cars_y" }, { 11000, "cars_r" } } ) );
    }
    EXPECT_TRUE( found );
}

TEST( Simulate, StopConditions )
{
    const auto& sim = tl_sim();
    const auto zero = sim.simulate( 1, condition::parse( "<STEPS, 0>" ) );
    ASSERT_EQ( zero.events.size(), 1u );
    EXPECT_EQ( zero.events[ 0 ].label.op, event::initialisation );
    EXPECT_FALSE( zero.stalled );

    const auto timed = sim.simulate( 7, condition::parse( "⟨TIME, 30000⟩" ) );
    ASSERT_FALSE( timed.events.empty() );
    for ( std::size_t i = 1; i < timed.events.size(); ++i )
        EXPECT_LE( timed.events[ i - 1 ].time, timed.events[ i ].time );
    EXPECT_LE( timed.events.back().time, 30000 );
    EXPECT_GT( timed.events.back().time, 30000 - 5000 );
}

TEST( Simulate, BlockedActivationStalls )
{
    // peds_r is never enabled from the initial state, so its chain dies.
    const simulator sim{ testing_util::shared( testing_util::traffic_light() ),
                         parse_sim_config( R"({"activations":[
            {"id":"$initialise_machine","execute":"$initialise_machine","activating":"peds_r"},
            {"id":"peds_r","execute":"peds_r","after":10,"activating":"peds_r"}]})" ) };
    const auto t = sim.simulate( 3, condition::parse( "<STEPS, 5>" ) );
    EXPECT_TRUE( t.stalled );
    EXPECT_EQ( t.events.size(), 1u );
}

TEST( MonteCarlo, DeterministicAndWellFormed )
{
    const auto& sim = tl_sim();
    const auto& m = sim.model();
    const auto end = condition::parse( "<STEPS, 100>" );
    const auto a = sim.monte_carlo( 200, both_red, end, 42 );
    const auto b = sim.monte_carlo( 200, both_red, end, 42 );
    const auto c = sim.monte_carlo( 200, both_red, end, 43 );
    EXPECT_EQ( digest( a ), digest( b ) );
    EXPECT_EQ( runs_csv( m, a ), runs_csv( m, b ) );
    EXPECT_NE( digest( a ), digest( c ) );
    ASSERT_EQ( a.runs.size(), 200u );

    for ( const auto& r : a.runs )
    {
        EXPECT_TRUE( r.started );
        EXPECT_FALSE( r.stalled );
        ASSERT_EQ( r.event_count, 100u );
        int ry = 0;
        int g = 0;
        for ( std::size_t i = 0; i < r.event_count; ++i )
        {
            const auto& e = a.events[ r.first_event + i ];
            const auto pre = a.state_at( r.first_state + i );
            EXPECT_TRUE( m.operations[ static_cast< std::size_t >( e.op ) ].guard_code.test( pre ) );
            state s{ { pre.begin(), pre.end() } };
            const auto post = a.state_at( r.first_state + i + 1 );
            EXPECT_EQ( apply_event( m, s, e ).values, std::vector< value_t >( post.begin(), post.end() ) );
            ry += event_name( m, e ) == "cars_ry";
            g += event_name( m, e ) == "cars_g";
        }
        const bool open = event_name( m, a.events[ r.first_event + r.event_count - 1 ] ) == "cars_ry";
        EXPECT_EQ( g, ry - ( open ? 1 : 0 ) );
    }
    const auto stats = simulation_statistics( m, a );
    for ( const auto& op : m.operations )
        EXPECT_LE( stats.at( { "executed", op.name } ), stats.at( { "enabled", op.name } ) );
}

TEST( MonteCarlo, EmptyRunSet )
{
    const auto& sim = tl_sim();
    const auto rs = sim.monte_carlo( 0, both_red, condition::parse( "<TIME, 30000>" ), 1 );
    EXPECT_TRUE( rs.runs.empty() );
    EXPECT_EQ( runs_csv( sim.model(), rs ), "run,time,op\n" );
    for ( const auto& [ key, n ] : simulation_statistics( sim.model(), rs ) )
        EXPECT_EQ( n, 0u ) << key.first << " " << key.second;
    EXPECT_EQ( hypothesis_test( 0, 0, tail::left, 0.8, 0.01 ).result, status::error );
}

TEST( MonteCarlo, EventuallyGreenNearSevenEighths )
{
    const auto& sim = tl_sim();
    const auto rs = sim.monte_carlo( 10000, both_red, condition::parse( "<TIME, 30000>" ), 2024 );
    const double cars = static_cast< double >( count_eventually( sim.model(), rs, "tl_cars = green" ) ) / 10000;
    const double peds = static_cast< double >( count_eventually( sim.model(), rs, "tl_peds = green" ) ) / 10000;
    // 3 sigma of a Bernoulli(7/8) mean at n = 10000 is about 0.0099.
    EXPECT_NEAR( cars, 0.875, 0.0099 );
    EXPECT_NEAR( peds, 0.875, 0.0099 );
}

TEST( MonteCarlo, PedestrianRatioNearHalf )
{
    const auto& sim = tl_sim();
    const auto rs = sim.monte_carlo( 10000, condition::parse( "<PRED, 1=1>" ), condition::parse( "<STEPS, 100>" ), 7 );
    const auto stats = simulation_statistics( sim.model(), rs );
    const double ratio = static_cast< double >( stats.at( { "executed", "peds_g" } ) )
                         / static_cast< double >( stats.at( { "enabled", "peds_g" } ) );
    EXPECT_GE( ratio, 0.49 );
    EXPECT_LE( ratio, 0.51 );
}

TEST( Binomial, MatchesExactOracle )
{
    struct row
    {
        std::int64_t k, n;
        double p, expected;
    };
    const std::vector< row > rows = {
        { 875, 1000, 0.8, 0.99999999985710442 },   { 780, 1000, 0.8, 0.062841495281614021 },
        { 776, 1000, 0.8, 0.03291001794677452 },   { 775, 1000, 0.8, 0.027650083731484823 },
        { 5, 10, 0.5, 0.623046875 },               { 0, 10, 0.3, 0.028247524900000001 },
        { 10, 10, 0.3, 1 },                        { 7990, 10000, 0.8, 0.40522093640061507 },
        { 7900, 10000, 0.8, 0.0066645222387674025 }, { 4950, 10000, 0.5, 0.16108709989765599 },
        { 3, 20, 0.25, 0.22515604766431352 },      { 0, 1, 0.5, 0.5 },
    };
    for ( const auto& r : rows )
        EXPECT_NEAR( binomial_cdf( r.k, r.n, r.p ), r.expected, 1e-12 ) << r.k << " " << r.n;
    EXPECT_NEAR( binomial_sf( 781, 1000, 0.8 ), 1 - 0.062841495281614021, 1e-12 );
    EXPECT_DOUBLE_EQ( binomial_cdf( -1, 10, 0.5 ), 0 );
    EXPECT_DOUBLE_EQ( binomial_sf( 0, 10, 0.5 ), 1 );
}

TEST( Hypothesis, RejectionThreshold )
{
    // Largest k with CDF(k; 1000, 0.8) < 0.01 is 769.
    EXPECT_EQ( hypothesis_test( 769, 1000, tail::left, 0.8, 0.01 ).result, status::fail );
    EXPECT_EQ( hypothesis_test( 770, 1000, tail::left, 0.8, 0.01 ).result, status::success );
    EXPECT_EQ( hypothesis_test( 1000, 1000, tail::left, 0.999, 0.01 ).result, status::success );
    bool seen = false;
    for ( std::size_t k = 0; k <= 1000; ++k )
    {
        const bool ok = hypothesis_test( k, 1000, tail::left, 0.8, 0.01 ).result == status::success;
        EXPECT_TRUE( !seen || ok ) << k;
        seen = seen || ok;
    }
    EXPECT_EQ( hypothesis_test( 820, 1000, tail::right, 0.8, 0.01 ).result, status::success );
    EXPECT_EQ( hypothesis_test( 900, 1000, tail::right, 0.8, 0.01 ).result, status::fail );
    EXPECT_EQ( hypothesis_test( 500, 1000, tail::two, 0.5, 0.05 ).result, status::success );
    EXPECT_EQ( hypothesis_test( 560, 1000, tail::two, 0.5, 0.05 ).result, status::fail );
}

TEST( Hypothesis, Estimation )
{
    EXPECT_EQ( estimate_probability( 1, 1, tail::left, 1.0, 0.0 ).result, status::success );
    EXPECT_EQ( estimate_probability( 79, 100, tail::left, 0.8, 0.01 ).result, status::success );
    EXPECT_EQ( estimate_probability( 78, 100, tail::left, 0.8, 0.01 ).result, status::fail );
    EXPECT_EQ( estimate_probability( 81, 100, tail::two, 0.8, 0.01 ).result, status::success );
    EXPECT_EQ( estimate_probability( 82, 100, tail::two, 0.8, 0.01 ).result, status::fail );
    EXPECT_EQ( estimate_probability( 82, 100, tail::right, 0.8, 0.01 ).result, status::fail );
}

TEST( Hypothesis, ParsesAndRuns )
{
    const auto h = hypothesis::parse(
            "(⟨PRED, tl_cars = red ∧ tl_peds = red⟩, ⟨TIME, 30000⟩, ⟨EVENTUALLY, tl_cars = green⟩, LEFT_TAILED, 0.8)" );
    EXPECT_EQ( h.end.amount, 30000 );
    EXPECT_EQ( h.property, "tl_cars = green" );
    EXPECT_EQ( to_string( h ),
               "(<PRED, tl_cars = red ∧ tl_peds = red>, <TIME, 30000>, <EVENTUALLY, tl_cars = green>, LEFT_TAILED, 0.8)" );
    EXPECT_EQ( to_string( hypothesis::parse( to_string( h ) ) ), to_string( h ) );
    EXPECT_EQ( run_hypothesis_test( tl_sim(), h, 1000, 0.01, 99 ).result, status::success );
    EXPECT_EQ( run_estimation( tl_sim(), h, 1000, 0.01, 99 ).result, status::success );
    EXPECT_THROW( hypothesis::parse( "(<PRED, 1=1>, <TIME, 3>, <EVENTUALLY, x>, SIDEWAYS, 0.8)" ), std::invalid_argument );
    EXPECT_THROW( hypothesis::parse( "(<PRED, 1=1>, <TIME, 3>, <EVENTUALLY, x>, LEFT_TAILED)" ), std::invalid_argument );
    const auto bad = hypothesis::parse( "(<PRED, nope = 1>, <TIME, 3>, <EVENTUALLY, 1=1>, LEFT_TAILED, 0.5)" );
    EXPECT_EQ( run_hypothesis_test( tl_sim(), bad, 10, 0.01, 1 ).result, status::error );
}
