#include "vove/model/diagnostic.hpp"
#include "vove/sim/simulator.hpp"
#include "vove/space/analysis.hpp"
#include "vove/space/animator.hpp"
#include "vove/vo/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace
{

namespace fs = std::filesystem;
using namespace vove;

void write_file( const fs::path& p, const std::string& text )
{
    if ( p.has_parent_path() )
        fs::create_directories( p.parent_path() );
    std::ofstream out{ p, std::ios::binary };
    if ( !out )
        throw std::runtime_error( "cannot write " + p.string() );
    out << text;
}

// --seed beats VOVE_SEED, which beats the configured seed.
std::uint64_t pick_seed( const std::optional< std::uint64_t >& flag, std::uint64_t configured )
{
    if ( flag )
        return *flag;
    if ( const char* env = std::getenv( "VOVE_SEED" ); env && *env )
    {
        std::size_t used = 0;
        const auto v = std::stoull( env, &used );
        if ( env[ used ] != '\0' )
            throw std::invalid_argument( std::string( "VOVE_SEED is not a number: " ) + env );
        return v;
    }
    return configured;
}

struct project_flags
{
    std::string file;
    std::optional< std::uint64_t > seed;
    std::optional< std::size_t > runs;
    std::optional< std::size_t > limit;
    bool strict = false;
    bool lenient = false;
    std::string out;
    std::string format = "text";
};

void add_project_flags( CLI::App* cmd, project_flags& f )
{
    cmd->add_option( "project", f.file, "project file (JSON)" )->required()->check( CLI::ExistingFile );
    cmd->add_option( "--seed", f.seed, "master seed" );
    cmd->add_option( "--runs", f.runs, "default number of simulation runs" )->check( CLI::PositiveNumber );
    cmd->add_option( "--limit", f.limit, "maximum number of states" )->check( CLI::PositiveNumber );
    auto* strict = cmd->add_flag( "--strict", f.strict, "reject inspections without exploring predecessors" );
    cmd->add_flag( "--lenient", f.lenient, "explore automatically where needed" )->excludes( strict );
    cmd->add_option( "--out", f.out, "directory for the reports" );
    cmd->add_option( "--format", f.format, "stdout format" )->check( CLI::IsMember( { "text", "json" } ) );
}

int run_check( const project_flags& f, bool gate )
{
    auto cfg = load_project_config( f.file );
    cfg.seed = pick_seed( f.seed, cfg.seed );
    if ( f.runs )
        cfg.sim_runs = *f.runs;
    if ( f.limit )
        cfg.max_states = *f.limit;
    if ( f.strict )
        cfg.mode = check_mode::strict;
    if ( f.lenient )
        cfg.mode = check_mode::lenient;
    if ( !f.out.empty() )
        cfg.out = f.out;

    const auto p = load_project( cfg );
    const auto report = run_project( p, fs::path( f.file ).stem().string() );
    const auto text = format_text( report );
    const auto json = format_json( report, p );
    std::cout << ( f.format == "json" ? json : text );
    if ( !cfg.out.empty() )
    {
        write_file( fs::path( cfg.out ) / "report.json", json );
        write_file( fs::path( cfg.out ) / "report.txt", text );
    }
    return gate && !report.all_success() ? 1 : 0;
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Validation obligation engine" };
    app.require_subcommand( 1 );

    project_flags check_flags;
    auto* check = app.add_subcommand( "check", "evaluate every obligation; exit 0 iff all succeed" );
    add_project_flags( check, check_flags );

    project_flags report_flags;
    auto* report = app.add_subcommand( "report", "evaluate and write the reports without gating" );
    add_project_flags( report, report_flags );

    std::string explore_model;
    std::string dot_file;
    std::string stats_file;
    std::size_t explore_limit = 100000;
    auto* explore = app.add_subcommand( "explore", "explore a model fully; print statistics" );
    explore->add_option( "model", explore_model, "machine file" )->required()->check( CLI::ExistingFile );
    explore->add_option( "--dot", dot_file, "write the state space as DOT" );
    explore->add_option( "--stats", stats_file, "write the statistics CSV here instead of stdout" );
    explore->add_option( "--limit", explore_limit, "maximum number of states" )->check( CLI::PositiveNumber );

    std::string sim_model;
    std::string sim_file;
    std::size_t sim_runs = 1000;
    std::optional< std::uint64_t > sim_seed;
    std::string sim_start = "<PRED, 1=1>";
    std::string sim_end = "<STEPS, 100>";
    std::string sim_eventually;
    std::string sim_out;
    auto* sim = app.add_subcommand( "sim", "Monte Carlo simulation" );
    sim->add_option( "model", sim_model, "machine file" )->required()->check( CLI::ExistingFile );
    sim->add_option( "config", sim_file, "simulation configuration (JSON)" )->required()->check( CLI::ExistingFile );
    sim->add_option( "--runs", sim_runs, "number of runs" );
    sim->add_option( "--seed", sim_seed, "master seed" );
    sim->add_option( "--start", sim_start, "start condition, e.g. <PRED, x = 0>" );
    sim->add_option( "--end", sim_end, "end condition, <TIME, ms> or <STEPS, n>" );
    sim->add_option( "--eventually", sim_eventually, "count runs reaching this predicate" );
    sim->add_option( "--out", sim_out, "directory for runs.csv and stats.csv" );

    std::string anim_model;
    std::size_t anim_limit = 100000;
    auto* animate = app.add_subcommand( "animate", "interactive animation on stdin" );
    animate->add_option( "model", anim_model, "machine file" )->required()->check( CLI::ExistingFile );
    animate->add_option( "--limit", anim_limit, "maximum number of states" )->check( CLI::PositiveNumber );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        return app.exit( e ) == 0 ? 0 : 2;
    }

    try
    {
        if ( *check )
            return run_check( check_flags, true );
        if ( *report )
            return run_check( report_flags, false );
        if ( *explore )
        {
            auto m = std::make_shared< const machine >( load_machine( explore_model ) );
            state_space space{ m, explore_limit };
            space.explore();
            const auto csv = statistics_csv( statistics( space ) );
            if ( stats_file.empty() )
                std::cout << csv;
            else
                write_file( stats_file, csv );
            if ( !dot_file.empty() )
                write_file( dot_file, to_dot( space ) );
            return 0;
        }
        if ( *sim )
        {
            auto m = std::make_shared< const machine >( load_machine( sim_model ) );
            const simulator s{ m, load_sim_config( sim_file ) };
            const auto seed = pick_seed( sim_seed, 0 );
            const auto rs = s.monte_carlo( sim_runs, condition::parse( sim_start ), condition::parse( sim_end ), seed );
            std::string stats = "kind,operation,count\n";
            for ( const auto& [ key, count ] : simulation_statistics( *m, rs ) )
                stats += key.first + "," + key.second + "," + std::to_string( count ) + "\n";
            std::cout << "runs," << rs.runs.size() << "\nseed," << seed << "\ndigest," << digest( rs ) << "\n";
            if ( !sim_eventually.empty() )
            {
                const auto k = count_eventually( *m, rs, sim_eventually );
                std::cout << "eventually," << k << "\n";
                if ( sim_runs )
                    std::cout << "fraction," << static_cast< double >( k ) / static_cast< double >( sim_runs ) << "\n";
            }
            if ( sim_out.empty() )
                std::cout << stats;
            else
            {
                write_file( fs::path( sim_out ) / "runs.csv", runs_csv( *m, rs ) );
                write_file( fs::path( sim_out ) / "stats.csv", stats );
            }
            return 0;
        }
        if ( *animate )
        {
            animator a{ std::make_shared< const machine >( load_machine( anim_model ) ), anim_limit };
            run_animator( a, std::cin, std::cout );
            return 0;
        }
    }
    catch ( const model_error& e )
    {
        for ( const auto& d : e.diagnostics() )
            std::cerr << "error: " << d.str() << "\n";
        return 2;
    }
    catch ( const std::exception& e )
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
