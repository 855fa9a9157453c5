#include "test_util.hpp"

#include <vove/sim/config.hpp>
#include <vove/space/animator.hpp>
#include <vove/vo/report.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vove;
using testing_util::corpus;
using testing_util::shared;

namespace
{

std::string read_file( const std::string& path )
{
    std::ifstream in{ path };
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string replace_once( std::string text, const std::string& from, const std::string& to )
{
    const auto at = text.find( from );
    EXPECT_NE( at, std::string::npos ) << from;
    if ( at != std::string::npos )
        text.replace( at, from.size(), to );
    return text;
}

const std::set< std::string > tl_artifacts{ "TrafficLight", "TrafficLight_Ref", "TrafficLight_Sim", "Toy", "Lift" };

// The traffic-light project, optionally with a different machine text.
vo_project traffic_project( const std::string& machine_text = {} )
{
    auto cfg = load_project_config( corpus( "traffic_light.json" ) );
    auto p = load_project( cfg );
    if ( !machine_text.empty() )
        p.models[ "TrafficLight" ] = std::make_shared< const machine >( parse_machine( machine_text ) );
    return p;
}

vo_project inline_project( const std::string& vo_text, const std::string& req_text = {},
                           check_mode mode = check_mode::strict )
{
    vo_project p;
    p.config.mode = mode;
    p.config.seed = 11;
    p.models[ "TrafficLight" ] = shared( testing_util::traffic_light() );
    p.models[ "TrafficLight_Ref" ] = shared( testing_util::traffic_light_ref() );
    p.models[ "Toy" ] = std::make_shared< const machine >( load_machine( corpus( "toy.mch" ) ) );
    p.sims.emplace( "TrafficLight_Sim", load_sim_config( corpus( "traffic_light_sim.json" ) ) );
    p.requirements = parse_requirements( req_text );
    const auto names = p.artifacts();
    p.obligations = parse_vo_file( vo_text, &names );
    return p;
}

std::map< std::string, status > verdicts( const std::vector< vo_result >& rs )
{
    std::map< std::string, status > out;
    for ( const auto& r : rs )
        out[ r.id ] = r.result;
    return out;
}

const vo_result& find_result( const std::vector< vo_result >& rs, const std::string& id )
{
    for ( const auto& r : rs )
        if ( r.id == id )
            return r;
    throw std::runtime_error( "no result " + id );
}

bool contains( const std::vector< std::string >& v, const std::string& s )
{
    return std::find( v.begin(), v.end(), s ) != v.end();
}

} // namespace

// ---------------------------------------------------------------------------
// Task declarations

TEST( TaskParse, InvariantCheck )
{
    const auto vt = parse_vt( "MC1/TrafficLight/MC: ⟨INV, tl_cars = red or tl_peds = red⟩" );
    EXPECT_EQ( vt.id, "MC1" );
    EXPECT_EQ( vt.context, std::vector< std::string >{ "TrafficLight" } );
    EXPECT_EQ( vt.tech, technique::mc );
    const auto& mc = std::get< mc_task >( vt.params );
    EXPECT_EQ( mc.config.k, mc_config::kind::inv );
    EXPECT_EQ( mc.config.predicate, "tl_cars = red or tl_peds = red" );
}

TEST( TaskParse, MissingParametersIsArityMismatch )
{
    try
    {
        parse_vt( "X1/TrafficLight/MC:" );
        FAIL();
    }
    catch ( const vo_error& e )
    {
        EXPECT_EQ( e.what_kind, vo_error::kind::arity_mismatch );
    }
    EXPECT_THROW( parse_vt( "X2/TrafficLight/LTL: G {tl_cars = red}" ), vo_error );
    EXPECT_THROW( parse_vt( "X3/TrafficLight/HT: (<PRED, 1=1>, <TIME, 5>, <EVENTUALLY, 1=1>, LEFT_TAILED, 0.8), 0.01" ),
                  vo_error );
}

TEST( TaskParse, TwoArtifactContext )
{
    const auto vt = parse_vt( "HT1/TrafficLight, TrafficLight_Sim/HT: (⟨PRED, tl_cars = red ∧ tl_peds = red⟩, "
                              "⟨TIME, 30000⟩, ⟨EVENTUALLY, tl_cars = green⟩, LEFT_TAILED, 0.8), 0.01" );
    EXPECT_EQ( vt.context, ( std::vector< std::string >{ "TrafficLight", "TrafficLight_Sim" } ) );
    const auto& ht = std::get< statistical_task >( vt.params );
    EXPECT_FALSE( ht.runs );
    EXPECT_EQ( ht.bound, "0.01" );
}

TEST( TaskParse, Errors )
{
    auto kind_of = []( const std::string& line, const std::set< std::string >* names = nullptr )
    {
        try
        {
            parse_vt( line, names );
        }
        catch ( const vo_error& e )
        {
            return e.what_kind;
        }
        ADD_FAILURE() << line;
        return vo_error::kind::syntax;
    };
    EXPECT_EQ( kind_of( "A1/TrafficLight/XYZ: 1" ), vo_error::kind::unknown_technique );
    EXPECT_EQ( kind_of( "A2/Nowhere/MC: <FIN>", &tl_artifacts ), vo_error::kind::unresolved_context );
    EXPECT_EQ( kind_of( "A3/TrafficLight/VAP: BOTH" ), vo_error::kind::syntax );
    EXPECT_EQ( kind_of( "A4/TrafficLight/MCDC: two" ), vo_error::kind::syntax );
    EXPECT_EQ( kind_of( "A5/TrafficLight/LTL: G {x, MAYBE" ), vo_error::kind::arity_mismatch );
    EXPECT_EQ( kind_of( "A6/TrafficLight/STAT: R_spstat(" ), vo_error::kind::syntax );
    EXPECT_EQ( kind_of( "A7/TrafficLight/TR: [cars_ry <tl_cars = redyellow" ), vo_error::kind::syntax );
    EXPECT_EQ( kind_of( "no slashes here" ), vo_error::kind::syntax );
}

TEST( TaskParse, TraceSteps )
{
    const auto vt = parse_vt( "T/Toy/TR: [INITIALISATION <x = 0>, step, step <x = 2 & (x > 1 or x < 0)>, finish <x>3>]" );
    const auto& tr = std::get< replay_task >( vt.params );
    ASSERT_EQ( tr.steps.size(), 4u );
    EXPECT_EQ( tr.steps[ 1 ], std::make_pair( std::string( "step" ), std::string() ) );
    EXPECT_EQ( tr.steps[ 2 ].second, "x = 2 & (x > 1 or x < 0)" );
    EXPECT_EQ( tr.steps[ 3 ].second, "x>3" );
    EXPECT_EQ( std::get< replay_task >( parse_vt( "T/Toy/TR: @runs/a.trace" ).params ).file, "runs/a.trace" );
    EXPECT_TRUE( std::get< replay_task >( parse_vt( "T/Toy/TR: []" ).params ).steps.empty() );
}

TEST( TaskParse, OutOfScopeTechniquesAreTagged )
{
    for ( const auto* line : { "PO1/TrafficLight/PO: tl_cars ∈ colors, tl_peds = red,",
                               "SMC1/TrafficLight/SMC: ⟨INV, tl_cars = red or tl_peds = red⟩",
                               "PSMC1/TrafficLight_PRISM/PSMC: P>0.9999[true], SUCCESS" } )
    {
        const auto vt = parse_vt( line );
        EXPECT_FALSE( is_supported( vt.tech ) ) << line;
        EXPECT_TRUE( std::holds_alternative< unsupported_task >( vt.params ) );
    }
}

TEST( TaskParse, CorpusRoundTrip )
{
    const auto file = parse_vo_file( read_file( corpus( "traffic_light.vo" ) ), &tl_artifacts );
    EXPECT_EQ( file.tasks.size(), 34u );
    std::vector< std::string > extra = {
        // Variants from the catalogue: default run counts, tight spacing, the other SISTAT operation.
        "OC1/TrafficLight/OC:[cars_r, cars_ry, cars_g, cars_r, peds_g, peds_r]",
        "MCDC1/TrafficLight/MCDC:2",
        "EOP1/TrafficLight, TrafficLight_Sim/EOP: (⟨PRED, tl_cars = red ∧ tl_peds = red⟩, ⟨TIME, 30000⟩, "
        "⟨EVENTUALLY, tl_cars = green⟩, LEFT_TAILED, 0.8), 0.01",
        "SISTAT1/TrafficLight,  TrafficLight_Sim/SISTAT: ⟨PRED, 1=1⟩, ⟨STEPS, 100⟩, "
        "R_sistat(enabled ↦ cars_ry)/R_sistat(executed ↦ cars_ry) ∈ [0.49, 0.51]",
        "MMV-LIFT/Lift/MMV: min(R_mmv(level)) = 0 ∧ max(R_mmv(level)) = 3",
        "TR-LIFT/Lift/TR: [INITIALISATION <level = 0>, up <level = 1>]",
        "CTL9/TrafficLight/CTL: AG(EF{tl_cars = red}) ∧ EX{tl_cars = red}, FAIL",
        "MC5/TrafficLight/MC: DLF",
        "MC6/TrafficLight/MC: <GOAL, tl_cars = green>",
        "VAP1/TrafficLight/VAP: INV",
        "PO1/TrafficLight/PO: tl_cars ∈ colors, tl_peds = red,",
    };
    std::vector< vt_decl > all = file.tasks;
    for ( const auto& line : extra )
        all.push_back( parse_vt( line ) );
    for ( const auto& vt : all )
    {
        const auto printed = to_string( vt );
        const auto again = parse_vt( printed );
        EXPECT_EQ( again, vt ) << printed;
        EXPECT_EQ( to_string( again ), printed );
    }
}

// ---------------------------------------------------------------------------
// Obligation expressions

TEST( ObligationParse, NestedSequences )
{
    const auto vo = parse_vo( "VO19: ((TR1 ∧ TR2); STAT1) ∧ (MC4;STAT1)" );
    EXPECT_EQ( vo.id, "VO19" );
    const auto& e = vo.expr;
    ASSERT_EQ( e->op, vo_node::kind::conjunction );
    EXPECT_EQ( e->left->op, vo_node::kind::sequence );
    EXPECT_EQ( e->left->left->op, vo_node::kind::conjunction );
    EXPECT_EQ( e->right->op, vo_node::kind::sequence );
    EXPECT_EQ( leaves( e ), ( std::vector< std::string >{ "TR1", "TR2", "STAT1", "MC4", "STAT1" } ) );
    EXPECT_EQ( to_string( e ), "(TR1 & TR2); STAT1 & MC4; STAT1" );
}

TEST( ObligationParse, LeavesAndAnnotations )
{
    const auto single = parse_vo( "VOx: T1" );
    EXPECT_EQ( single.expr->op, vo_node::kind::leaf );
    EXPECT_EQ( single.expr->task, "T1" );
    EXPECT_TRUE( single.validates.empty() );

    const auto dotted = parse_vo( "VO5 [validates FUN5, FUN6]: LTL5.1 ∧ LTL5.2" );
    EXPECT_EQ( leaves( dotted.expr ), ( std::vector< std::string >{ "LTL5.1", "LTL5.2" } ) );
    EXPECT_EQ( dotted.validates, ( std::vector< std::string >{ "FUN5", "FUN6" } ) );
    EXPECT_EQ( to_string( dotted ), "VO5 [validates FUN5,FUN6]: LTL5.1 & LTL5.2" );
    EXPECT_EQ( leaves( parse_vo( "VO-LIFT: TR-LIFT; MMV-LIFT" ).expr ),
               ( std::vector< std::string >{ "TR-LIFT", "MMV-LIFT" } ) );
}

TEST( ObligationParse, PrecedenceAndAssociativity )
{
    auto canon = []( const char* text ) { return to_string( parse_vo_expr( text ) ); };
    EXPECT_EQ( canon( "!A ; B & C | D => E <=> F" ), "!A; B & C | D => E <=> F" );
    EXPECT_TRUE( same_tree( parse_vo_expr( "!A ; B & C | D => E <=> F" ),
                            parse_vo_expr( "((((((!A); B) & C) | D) => E) <=> F)" ) ) );
    EXPECT_TRUE( same_tree( parse_vo_expr( "A => B => C" ), parse_vo_expr( "(A => B) => C" ) ) );
    EXPECT_EQ( canon( "A => (B => C)" ), "A => (B => C)" );
    EXPECT_EQ( canon( "A; (B; C)" ), "A; (B; C)" );
    EXPECT_EQ( canon( "!(A & B)" ), "!(A & B)" );
    EXPECT_EQ( canon( "¬¬A" ), "!!A" );
    EXPECT_TRUE( same_tree( parse_vo_expr( "A ∧ B ∨ ¬C ⇒ D ⇔ E" ), parse_vo_expr( "A & B | !C => D <=> E" ) ) );
    for ( const auto* text : { "A &", "(A", "A B", "", "A & & B", "A)" } )
        EXPECT_THROW( parse_vo_expr( text ), vo_error ) << text;
}

TEST( ObligationParse, PrintParseRoundTrip )
{
    const auto file = parse_vo_file( read_file( corpus( "traffic_light.vo" ) ), &tl_artifacts );
    EXPECT_EQ( file.obligations.size(), 30u );
    for ( const auto& vo : file.obligations )
    {
        const auto again = parse_vo( to_string( vo ) );
        EXPECT_EQ( again.id, vo.id );
        EXPECT_EQ( again.validates, vo.validates );
        EXPECT_TRUE( same_tree( again.expr, vo.expr ) ) << to_string( vo );
    }
}

TEST( ObligationParse, FileErrors )
{
    EXPECT_THROW( parse_vo_file( "A/TrafficLight/MC: <FIN>\nA/TrafficLight/MC: <DLF>\n" ), vo_error );
    try
    {
        parse_vo_file( "# c\n\nA/TrafficLight/MC: <FIN>\nVO1: A &\n" );
        FAIL();
    }
    catch ( const vo_error& e )
    {
        EXPECT_NE( std::string( e.what() ).find( "line 4" ), std::string::npos ) << e.what();
    }
    const auto empty = parse_vo_file( "" );
    EXPECT_TRUE( empty.tasks.empty() && empty.obligations.empty() );
}

// ---------------------------------------------------------------------------
// Requirements

TEST( Requirements, Parse )
{
    const auto reqs = parse_requirements( "# header\nFUN1: Both lights start red.\n\nPROB-TIM1: Timely.\nSTRUC5: x\n" );
    ASSERT_EQ( reqs.size(), 3u );
    EXPECT_EQ( reqs[ 0 ].id, "FUN1" );
    EXPECT_EQ( reqs[ 0 ].kind, "FUN" );
    EXPECT_EQ( reqs[ 0 ].text, "Both lights start red." );
    EXPECT_EQ( reqs[ 1 ].kind, "PROB-TIM" );
    EXPECT_TRUE( parse_requirements( "" ).empty() );
    EXPECT_THROW( parse_requirements( "A1: x\nA1: y\n" ), vo_error );
    EXPECT_THROW( parse_requirements( "no colon\n" ), vo_error );
    EXPECT_EQ( load_requirements( corpus( "traffic_light.req" ) ).size(), 29u );
}

// ---------------------------------------------------------------------------
// Semantic check

namespace
{

const char* tasks_text = "LTL1/TrafficLight/LTL: {tl_cars = red ∧ tl_peds = red}, SUCCESS\n"
                         "TR1/TrafficLight/TR: [INITIALISATION, cars_ry, cars_g, cars_y, cars_r]\n"
                         "TR2/TrafficLight/TR: [INITIALISATION, peds_g, peds_r]\n"
                         "VCT1/TrafficLight/VCT: R_vct(tl_cars) = 4 ∧ R_vct(tl_peds) = 2\n"
                         "MC4/TrafficLight/MC: <FIN>\n"
                         "ED1/TrafficLight/ED: card(R_ed) = 8\n"
                         "SPRJ1/TrafficLight_Ref/SPRJ: queuedCmd, card(S_queuedCmd) = 7\n"
                         "PO1/TrafficLight/PO: tl_cars ∈ colors\n"
                         "PO2/TrafficLight/PO: tl_peds = red\n"
                         "LTLF/TrafficLight/LTL: G{tl_cars = red}, FAIL\n"
                         "STAT1/TrafficLight/STAT: R_spstat(\"Number of States\") >= 1\n";

std::vector< diagnostic_entry > check( const std::string& vos, check_mode mode = check_mode::strict )
{
    const auto p = inline_project( std::string( tasks_text ) + vos, "FUN1: x\nCOV1: y\n", mode );
    return semantic_check( p.obligations, p.requirements, mode );
}

std::vector< diagnostic_entry > errors_for( const std::vector< diagnostic_entry >& ds, const std::string& vo )
{
    std::vector< diagnostic_entry > out;
    for ( const auto& d : ds )
        if ( d.obligation == vo && d.level == diagnostic_entry::severity::error )
            out.push_back( d );
    return out;
}

} // namespace

TEST( SemanticCheck, InspectionNeedsStates )
{
    const auto ds = check( "VObad: VCT1\nVO17 [validates COV1]: (TR1 ∧ TR2); VCT1\nVOneg: ¬TR1; VCT1\n"
                           "VOor: TR1 | VCT1\nVOfail: LTLF; STAT1\nVOok: LTL1; STAT1\n" );
    ASSERT_EQ( errors_for( ds, "VObad" ).size(), 1u );
    EXPECT_EQ( errors_for( ds, "VObad" )[ 0 ].task, "VCT1" );
    EXPECT_TRUE( errors_for( ds, "VO17" ).empty() );
    EXPECT_TRUE( errors_for( ds, "VOneg" ).empty() );
    EXPECT_EQ( errors_for( ds, "VOor" ).size(), 1u );
    EXPECT_TRUE( errors_for( ds, "VOfail" ).empty() );
    EXPECT_EQ( errors_for( ds, "VOok" ).size(), 1u );
}

TEST( SemanticCheck, CompleteExplorationDependsOnMode )
{
    const std::string vos = "VOed: MC4; ED1\nVOcold: ED1\nVOprj: MC4; SPRJ1\n";
    const auto strict = check( vos, check_mode::strict );
    EXPECT_TRUE( errors_for( strict, "VOed" ).empty() );
    EXPECT_EQ( errors_for( strict, "VOcold" ).size(), 1u );
    // Exploring one model says nothing about another.
    EXPECT_EQ( errors_for( strict, "VOprj" ).size(), 1u );
    const auto lenient = check( vos, check_mode::lenient );
    EXPECT_TRUE( errors_for( lenient, "VOcold" ).empty() );
    EXPECT_TRUE( errors_for( lenient, "VOprj" ).empty() );
}

TEST( SemanticCheck, FileLevelFindings )
{
    const auto ds = check( "VO27: PO1 ∧ PO2\nVOu [validates NOPE]: LTL1\nVOu: LTL1\nVOx: MISSING\n" );
    EXPECT_EQ( errors_for( ds, "VO27" ).size(), 2u );
    EXPECT_GE( errors_for( ds, "VOu" ).size(), 2u );  // unknown requirement, duplicate id
    ASSERT_EQ( errors_for( ds, "VOx" ).size(), 1u );
    EXPECT_NE( errors_for( ds, "VOx" )[ 0 ].message.find( "MISSING" ), std::string::npos );
    std::set< std::string > unused;
    for ( const auto& d : ds )
        if ( d.level == diagnostic_entry::severity::warning )
            unused.insert( d.task );
    EXPECT_EQ( unused, ( std::set< std::string >{ "TR1", "TR2", "VCT1", "MC4", "ED1", "SPRJ1", "LTLF", "STAT1" } ) );
}

TEST( SemanticCheck, ErrorObligationsAreNotRun )
{
    auto p = inline_project( std::string( tasks_text ) + "VObad: VCT1\nVO27: PO1\n", "FUN1: x\n" );
    evaluator ev{ p, options_for( p ) };
    const auto rs = ev.evaluate_all();
    for ( const auto& r : rs )
    {
        EXPECT_EQ( r.result, status::error );
        EXPECT_TRUE( r.runs.empty() );
        EXPECT_FALSE( r.tree.evaluated );
    }
    EXPECT_EQ( find_result( rs, "VObad" ).blame.tasks, std::vector< std::string >{ "VCT1" } );
}

// ---------------------------------------------------------------------------
// Evaluation

namespace
{

// T succeeds, F fails, E errors at run time.
const char* outcome_tasks = "T/TrafficLight/LTL: {tl_cars = red}, SUCCESS\n"
                            "F/TrafficLight/MC: <GOAL, tl_cars = green ∧ tl_peds = green>\n"
                            "E/TrafficLight/RWM: R_undefined = 1\n";

status eval_expr( evaluator& ev, const std::string& expr )
{
    return ev.evaluate( parse_vo( "Q: " + expr ) ).result;
}

} // namespace

TEST( Evaluate, LeafOutcomes )
{
    auto p = inline_project( outcome_tasks );
    evaluator ev{ p, options_for( p ) };
    EXPECT_EQ( eval_expr( ev, "T" ), status::success );
    EXPECT_EQ( eval_expr( ev, "F" ), status::fail );
    EXPECT_EQ( eval_expr( ev, "E" ), status::error );
    EXPECT_EQ( eval_expr( ev, "!F" ), status::success );
    EXPECT_EQ( eval_expr( ev, "!E" ), status::error );
    EXPECT_EQ( eval_expr( ev, "E | T" ), status::error );
    EXPECT_EQ( eval_expr( ev, "F & E" ), status::error );
    EXPECT_EQ( eval_expr( ev, "F; E" ), status::fail );
    EXPECT_EQ( eval_expr( ev, "T; E" ), status::error );
}

TEST( Evaluate, OperatorLaws )
{
    auto p = inline_project( outcome_tasks );
    evaluator ev{ p, options_for( p ) };
    const std::vector< std::string > xs = { "T", "F", "E" };
    for ( const auto& a : xs )
    {
        EXPECT_EQ( eval_expr( ev, "!!" + a ), eval_expr( ev, a ) ) << a;
        for ( const auto& b : xs )
        {
            const auto pair = a + "," + b;
            EXPECT_EQ( eval_expr( ev, a + " & " + b ), eval_expr( ev, b + " & " + a ) ) << pair;
            EXPECT_EQ( eval_expr( ev, a + " | " + b ), eval_expr( ev, b + " | " + a ) ) << pair;
            EXPECT_EQ( eval_expr( ev, a + " => " + b ), eval_expr( ev, "!" + a + " | " + b ) ) << pair;
            EXPECT_EQ( eval_expr( ev, a + " <=> " + b ),
                       eval_expr( ev, "(" + a + " => " + b + ") & (" + b + " => " + a + ")" ) )
                    << pair;
        }
    }
}

TEST( Evaluate, SequenceIsNotCommutative )
{
    auto p = inline_project( read_file( corpus( "toy.vo" ) ), read_file( corpus( "toy.req" ) ) );
    evaluator ev{ p, options_for( p ) };
    EXPECT_EQ( eval_expr( ev, "MC-GOAL; TR-FINISH" ), status::success );
    EXPECT_EQ( eval_expr( ev, "TR-FINISH; MC-GOAL" ), status::fail );
    // Conjunction branches start from clones: the goal search does not position the replay.
    EXPECT_EQ( eval_expr( ev, "MC-GOAL & TR-FINISH" ), status::fail );
    EXPECT_EQ( eval_expr( ev, "(MC-GOAL & T0); TR-FINISH" ), status::error );  // unknown leaf
}

TEST( Evaluate, SequenceShortCircuits )
{
    auto p = inline_project( read_file( corpus( "toy.vo" ) ), read_file( corpus( "toy.req" ) ) );
    evaluator ev{ p, options_for( p ) };
    const auto r = ev.evaluate( parse_vo( "Q: TR-FINISH; MC-GOAL" ) );
    EXPECT_EQ( r.result, status::fail );
    ASSERT_EQ( r.runs.size(), 1u );
    ASSERT_EQ( r.tree.children.size(), 2u );
    EXPECT_TRUE( r.tree.children[ 0 ].evaluated );
    EXPECT_FALSE( r.tree.children[ 1 ].evaluated );
}

TEST( Evaluate, SessionIsolationAcrossObligations )
{
    const auto text = read_file( corpus( "toy.vo" ) );
    const auto req = read_file( corpus( "toy.req" ) );
    auto p = inline_project( text, req );
    evaluator forward{ p, options_for( p ) };
    const auto a = verdicts( forward.evaluate_all() );

    auto q = inline_project( text, req );
    std::reverse( q.obligations.obligations.begin(), q.obligations.obligations.end() );
    evaluator backward{ q, options_for( q ) };
    EXPECT_EQ( verdicts( backward.evaluate_all() ), a );

    // A lone replay after the goal obligation still starts cold.
    evaluator ev{ p, options_for( p ) };
    ev.evaluate( p.obligations.obligations[ 0 ] );
    EXPECT_EQ( eval_expr( ev, "TR-FINISH" ), status::fail );
}

TEST( Evaluate, MemoSharesVerdictsPerLineage )
{
    auto p = traffic_project();
    evaluator ev{ p, options_for( p ) };
    const auto rs = ev.evaluate_all();
    const auto& vo17 = find_result( rs, "VO17" );
    ASSERT_EQ( vo17.runs.size(), 3u );
    EXPECT_TRUE( vo17.runs[ 0 ].cached );  // TR1 already ran for VO12
    EXPECT_TRUE( vo17.runs[ 1 ].cached );
    EXPECT_FALSE( vo17.runs[ 2 ].cached );
    EXPECT_EQ( vo17.runs[ 2 ].lineage, "root;(TR1 & TR2)" );
    const auto& vo19 = find_result( rs, "VO19" );
    std::vector< std::string > stat_lineages;
    for ( const auto& run : vo19.runs )
        if ( run.task == "STAT1" )
            stat_lineages.push_back( run.lineage );
    EXPECT_EQ( stat_lineages, ( std::vector< std::string >{ "root;(TR1 & TR2)", "root;MC4" } ) );
}

TEST( Evaluate, TrafficLightCorpus )
{
    auto p = traffic_project();
    evaluator ev{ p, options_for( p ) };
    EXPECT_TRUE( ev.diagnostics().empty() );
    const auto rs = ev.evaluate_all();
    ASSERT_EQ( rs.size(), 30u );
    for ( const auto& r : rs )
    {
        EXPECT_EQ( r.result, status::success ) << r.id << ": " << r.message;
        EXPECT_TRUE( r.blame.empty() );
    }
    const auto& vo5 = find_result( rs, "VO5" );
    EXPECT_NE( vo5.runs[ 0 ].outcome.message.find( "fails as expected" ), std::string::npos );
}

TEST( Evaluate, LiftProject )
{
    const auto p = load_project( load_project_config( corpus( "lift.json" ) ) );
    const auto rs = run_project( p, "lift" ).results;
    ASSERT_EQ( rs.size(), 2u );
    EXPECT_EQ( find_result( rs, "VO-LIFT" ).result, status::success );
    EXPECT_EQ( find_result( rs, "VO-LIFT" ).runs[ 1 ].lineage, "root;TR-LIFT" );

    // Without the replay the level range is just {0}.
    auto q = inline_project( "" );
    q.models[ "Lift" ] = shared( testing_util::lift() );
    q.obligations = parse_vo_file( read_file( corpus( "lift.vo" ) ) + "VO-COLD: MC-L; MMV-LIFT\n"
                                   "MC-L/Lift/MC: <GOAL, level = 1>\n" );
    evaluator ev{ q, options_for( q ) };
    EXPECT_EQ( ev.evaluate( q.obligations.obligations.back() ).result, status::fail );
}

// ---------------------------------------------------------------------------
// Blame

TEST( Blame, FailedInitialStatePointsAtTaskRequirementAndModel )
{
    const auto text = replace_once( read_file( corpus( "traffic_light.mch" ) ), "tl_cars := red", "tl_cars := yellow" );
    auto p = traffic_project( text );
    evaluator ev{ p, options_for( p ) };
    const auto r = ev.evaluate( p.obligations.obligations[ 0 ] );
    EXPECT_EQ( r.result, status::fail );
    EXPECT_EQ( r.blame.tasks, std::vector< std::string >{ "LTL1" } );
    EXPECT_EQ( r.blame.requirements, std::vector< std::string >{ "FUN1" } );
    EXPECT_EQ( r.blame.artifacts, std::vector< std::string >{ "TrafficLight" } );
}

TEST( Blame, OnlyTheFailingConjunct )
{
    // cars_ry no longer waits for the pedestrian light.
    const auto text = replace_once( read_file( corpus( "traffic_light.mch" ) ),
                                    "cars_ry = SELECT tl_cars = red & tl_peds = red", "cars_ry = SELECT tl_cars = red" );
    auto p = traffic_project( text );
    evaluator ev{ p, options_for( p ) };
    const auto rs = ev.evaluate_all();
    const auto& vo5 = find_result( rs, "VO5" );
    EXPECT_EQ( vo5.result, status::fail );
    EXPECT_EQ( vo5.blame.tasks, std::vector< std::string >{ "LTL5.2" } );
    EXPECT_EQ( vo5.blame.requirements, std::vector< std::string >{ "FUN5" } );
    EXPECT_EQ( vo5.blame.artifacts, std::vector< std::string >{ "TrafficLight" } );

    // Verdicts predicted by tests/oracles/mutation_oracle.py (mode ry).
    const std::set< std::string > failing = { "VO2", "VO3", "VO4", "VO5", "VO7", "VO8", "VO11", "VO19", "VO23", "VO28" };
    for ( const auto& r : rs )
        EXPECT_EQ( r.result, failing.count( r.id ) ? status::fail : status::success ) << r.id;
}

TEST( Blame, PassingObligationHasNone )
{
    auto p = inline_project( outcome_tasks );
    evaluator ev{ p, options_for( p ) };
    EXPECT_TRUE( ev.evaluate( parse_vo( "Q: T & !F" ) ).blame.empty() );
}

TEST( Blame, WalksFailingPaths )
{
    auto p = inline_project( outcome_tasks );
    evaluator ev{ p, options_for( p ) };
    auto tasks = [ & ]( const std::string& e ) { return ev.evaluate( parse_vo( "Q: " + e ) ).blame.tasks; };
    using v = std::vector< std::string >;
    EXPECT_EQ( tasks( "T; F" ), v{ "F" } );
    EXPECT_EQ( tasks( "F; T" ), v{ "F" } );
    EXPECT_EQ( tasks( "T & F" ), v{ "F" } );
    EXPECT_EQ( tasks( "F | F" ), v{ "F" } );
    EXPECT_EQ( tasks( "T => F" ), ( v{ "T", "F" } ) );
    EXPECT_EQ( tasks( "!T" ), v{ "T" } );
    EXPECT_EQ( tasks( "T <=> F" ), ( v{ "T", "F" } ) );
    EXPECT_EQ( tasks( "F & E" ), v{ "E" } );
}

TEST( Blame, GuardMutationOnPedestrianGreen )
{
    const auto text = replace_once( read_file( corpus( "traffic_light.mch" ) ),
                                    "peds_g = SELECT tl_peds = red & tl_cars = red", "peds_g = SELECT false" );
    auto p = traffic_project( text );
    evaluator ev{ p, options_for( p ) };
    const auto rs = ev.evaluate_all();
    // Verdicts predicted by tests/oracles/mutation_oracle.py (mode mutated).
    const std::set< std::string > failing = { "VO7",  "VO13", "VO15", "VO16", "VO17", "VO18", "VO19",
                                              "VO22", "VO23", "VO24", "VO25", "VO28", "VO30", "VO31" };
    for ( const auto& r : rs )
    {
        const auto expected = r.id == "VO33" ? status::error : failing.count( r.id ) ? status::fail : status::success;
        EXPECT_EQ( r.result, expected ) << r.id << ": " << r.message;
    }
    for ( const auto* id : { "VO13", "VO18", "VO19" } )
    {
        const auto& b = find_result( rs, id ).blame;
        EXPECT_TRUE( contains( b.tasks, "TR2" ) ) << id;
        EXPECT_TRUE( contains( b.requirements, "SCENARIO2" ) ) << id;
        EXPECT_TRUE( contains( b.artifacts, "TrafficLight" ) ) << id;
    }
    EXPECT_FALSE( contains( find_result( rs, "VO18" ).blame.tasks, "TR1" ) );
}

// ---------------------------------------------------------------------------
// Reports

TEST( Report, JsonIsStable )
{
    const auto p = traffic_project();
    const auto a = format_json( run_project( p, "traffic_light" ), p );
    const auto b = format_json( run_project( p, "traffic_light" ), p );
    EXPECT_EQ( a, b );
    EXPECT_NE( a.find( "\"schema\": 1" ), std::string::npos );
    EXPECT_EQ( a.find( "elapsed" ), std::string::npos );
    EXPECT_EQ( a.find( "_ms" ), std::string::npos );
}

TEST( Report, SeedChangesOnlyStochasticEvidence )
{
    auto p = traffic_project();
    const auto a = run_project( p, "x" );
    p.config.seed += 1;
    const auto b = run_project( p, "x" );
    EXPECT_EQ( verdicts( a.results ), verdicts( b.results ) );
    EXPECT_NE( find_result( a.results, "VO15" ).runs[ 0 ].outcome.message,
               find_result( b.results, "VO15" ).runs[ 0 ].outcome.message );
    EXPECT_EQ( find_result( a.results, "VO1" ).runs[ 0 ].outcome.message,
               find_result( b.results, "VO1" ).runs[ 0 ].outcome.message );
}

TEST( Report, TextTable )
{
    const auto p = traffic_project();
    const auto text = format_text( run_project( p, "traffic_light" ) );
    EXPECT_NE( text.find( "30/30 obligations succeeded" ), std::string::npos );
    EXPECT_NE( text.find( "VO33" ), std::string::npos );
    EXPECT_NE( text.find( " ms" ), std::string::npos );
}

TEST( Project, ConfigValidation )
{
    const auto cfg = parse_project_config( R"({"models": {"M": "m.mch"}, "vo": "a.vo", "seed": 3})", "base" );
    EXPECT_EQ( cfg.models.at( "M" ), "base/m.mch" );
    EXPECT_EQ( cfg.obligations, "base/a.vo" );
    EXPECT_EQ( cfg.mode, check_mode::strict );
    EXPECT_EQ( cfg.max_states, 100000u );
    EXPECT_EQ( cfg.sim_runs, 1000u );
    EXPECT_THROW( parse_project_config( R"({"max_states": 0})" ), std::invalid_argument );
    EXPECT_THROW( parse_project_config( R"({"mode": "loose"})" ), std::invalid_argument );
    EXPECT_THROW( parse_project_config( R"({"extra": 1})" ), std::invalid_argument );
    EXPECT_THROW( parse_project_config( "[" ), std::invalid_argument );
}

TEST( Project, TaskSeedsDependOnMasterAndTask )
{
    EXPECT_EQ( task_seed( 1, "HT1" ), task_seed( 1, "HT1" ) );
    EXPECT_NE( task_seed( 1, "HT1" ), task_seed( 2, "HT1" ) );
    EXPECT_NE( task_seed( 1, "HT1" ), task_seed( 1, "HT2" ) );
}

// ---------------------------------------------------------------------------
// Animator

TEST( Animator, MenuBackAndSavedScenario )
{
    animator a{ shared( testing_util::traffic_light() ) };
    EXPECT_FALSE( a.back() );
    ASSERT_EQ( a.enabled().size(), 1u );
    ASSERT_TRUE( a.fire( 1 ) );
    std::vector< std::string > menu;
    for ( const auto& t : a.enabled() )
        menu.push_back( event_name( a.model(), t.label ) );
    std::sort( menu.begin(), menu.end() );
    EXPECT_EQ( menu, ( std::vector< std::string >{ "cars_ry", "peds_g" } ) );
    EXPECT_FALSE( a.fire( 3 ) );
    EXPECT_FALSE( a.assert_here( "tl_cars = green" ) );
    EXPECT_TRUE( a.assert_here( "tl_cars = red & tl_peds = red" ) );

    auto fire_named = [ & ]( const std::string& name )
    {
        const auto options = a.enabled();
        for ( std::size_t i = 0; i < options.size(); ++i )
            if ( event_name( a.model(), options[ i ].label ) == name )
                return a.fire( i + 1 );
        return false;
    };
    ASSERT_TRUE( fire_named( "peds_g" ) );
    ASSERT_TRUE( a.back() );
    for ( const auto* op : { "cars_ry", "cars_g", "cars_y", "cars_r" } )
        ASSERT_TRUE( fire_named( op ) ) << op;
    EXPECT_TRUE( a.assert_here( "tl_cars = red" ) );

    const auto dir = std::filesystem::temp_directory_path() / "vove_animator_test";
    std::filesystem::create_directories( dir );
    {
        std::ofstream out{ dir / "scenario1.trace" };
        out << a.trace_file();
    }
    EXPECT_EQ( a.trace_file(), "INITIALISATION assert tl_cars = red & tl_peds = red\ncars_ry\ncars_g\ncars_y\n"
                               "cars_r assert tl_cars = red\n" );

    auto p = inline_project( "TR1/TrafficLight/TR: @scenario1.trace\nVO12: TR1\n" );
    auto opts = options_for( p );
    opts.base_dir = dir.string();
    evaluator ev{ p, opts };
    EXPECT_EQ( ev.evaluate( p.obligations.obligations[ 0 ] ).result, status::success );
    std::filesystem::remove_all( dir );
}

TEST( Animator, Repl )
{
    animator a{ shared( testing_util::traffic_light() ) };
    std::istringstream in{ "back\nfire 1\nfire 9\nbogus\n2\nassert tl_peds = green\nquit\nfire 1\n" };
    std::ostringstream out;
    run_animator( a, in, out );
    const auto text = out.str();
    EXPECT_NE( text.find( "already at the start" ), std::string::npos );
    EXPECT_NE( text.find( "no event number '9'" ), std::string::npos );
    EXPECT_NE( text.find( "unknown command 'bogus'" ), std::string::npos );
    EXPECT_EQ( a.history().steps.size(), 2u );
    EXPECT_NE( a.trace_file().find( "assert tl_peds = green" ), std::string::npos );
}
