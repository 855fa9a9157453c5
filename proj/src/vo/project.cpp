#include "vove/vo/project.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace vove
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

std::string resolve( const std::string& base, const std::string& p )
{
    if ( p.empty() || fs::path( p ).is_absolute() )
        return p;
    return ( fs::path( base ) / p ).lexically_normal().string();
}

std::size_t positive( const json& j, const char* key, std::size_t fallback )
{
    if ( !j.contains( key ) )
        return fallback;
    const auto& v = j.at( key );
    if ( !v.is_number_unsigned() || v.get< std::size_t >() == 0 )
        throw std::invalid_argument( std::string( key ) + " must be a positive integer" );
    return v.get< std::size_t >();
}

} // namespace

project_config parse_project_config( std::string_view json_text, const std::string& base_dir )
{
    json j;
    try
    {
        j = json::parse( json_text );
    }
    catch ( const json::parse_error& e )
    {
        throw std::invalid_argument( std::string( "project file: " ) + e.what() );
    }
    if ( !j.is_object() )
        throw std::invalid_argument( "project file must hold a JSON object" );
    static const std::set< std::string > known{ "models", "sims", "requirements", "vo", "max_states",
                                                "sim_runs", "seed", "mode", "out" };
    for ( const auto& [ key, _ ] : j.items() )
        if ( !known.count( key ) )
            throw std::invalid_argument( "unknown project key '" + key + "'" );

    project_config cfg;
    for ( const char* section : { "models", "sims" } )
    {
        if ( !j.contains( section ) )
            continue;
        auto& target = std::string_view( section ) == "models" ? cfg.models : cfg.sims;
        for ( const auto& [ name, file ] : j.at( section ).items() )
        {
            if ( !file.is_string() )
                throw std::invalid_argument( std::string( section ) + "." + name + " must be a file name" );
            target[ name ] = resolve( base_dir, file.get< std::string >() );
        }
    }
    cfg.requirements = resolve( base_dir, j.value( "requirements", "" ) );
    cfg.obligations = resolve( base_dir, j.value( "vo", "" ) );
    cfg.out = resolve( base_dir, j.value( "out", "" ) );
    cfg.max_states = positive( j, "max_states", cfg.max_states );
    cfg.sim_runs = positive( j, "sim_runs", cfg.sim_runs );
    if ( j.contains( "seed" ) )
    {
        if ( !j.at( "seed" ).is_number_unsigned() )
            throw std::invalid_argument( "seed must be a non-negative integer" );
        cfg.seed = j.at( "seed" ).get< std::uint64_t >();
    }
    const auto mode = j.value( "mode", "strict" );
    if ( mode == "strict" )
        cfg.mode = check_mode::strict;
    else if ( mode == "lenient" )
        cfg.mode = check_mode::lenient;
    else
        throw std::invalid_argument( "mode must be strict or lenient" );
    return cfg;
}

project_config load_project_config( const std::string& file )
{
    std::ifstream in{ file };
    if ( !in )
        throw std::runtime_error( "cannot open project file " + file );
    std::ostringstream ss;
    ss << in.rdbuf();
    auto base = fs::path( file ).parent_path().string();
    return parse_project_config( ss.str(), base.empty() ? "." : base );
}

std::set< std::string > vo_project::artifacts() const
{
    std::set< std::string > out;
    for ( const auto& [ name, _ ] : models )
        out.insert( name );
    for ( const auto& [ name, _ ] : sims )
        out.insert( name );
    return out;
}

vo_project load_project( const project_config& cfg )
{
    vo_project p;
    p.config = cfg;
    for ( const auto& [ name, file ] : cfg.models )
    {
        if ( cfg.sims.count( name ) )
            throw std::invalid_argument( "artifact name '" + name + "' is used twice" );
        p.models[ name ] = std::make_shared< const machine >( load_machine( file ) );
    }
    for ( const auto& [ name, file ] : cfg.sims )
        p.sims.emplace( name, load_sim_config( file ) );
    if ( !cfg.requirements.empty() )
        p.requirements = load_requirements( cfg.requirements );
    if ( !cfg.obligations.empty() )
    {
        const auto names = p.artifacts();
        p.obligations = load_vo_file( cfg.obligations, &names );
    }
    return p;
}

} // namespace vove
