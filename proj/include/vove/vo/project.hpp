#pragma once

#include "vove/model/machine.hpp"
#include "vove/sim/config.hpp"
#include "vove/vo/obligation.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

namespace vove
{

enum class check_mode
{
    strict,
    lenient
};

struct project_config
{
    std::map< std::string, std::string > models;  // artifact name -> machine file
    std::map< std::string, std::string > sims;    // artifact name -> simulation config
    std::string requirements;
    std::string obligations;
    std::size_t max_states = 100000;
    std::size_t sim_runs = 1000;
    std::uint64_t seed = 0;
    check_mode mode = check_mode::strict;
    std::string out;
};

// Paths in the file are taken relative to the file's directory.
project_config parse_project_config( std::string_view json_text, const std::string& base_dir = "." );
project_config load_project_config( const std::string& file );

struct vo_project
{
    project_config config;
    std::map< std::string, std::shared_ptr< const machine > > models;
    std::map< std::string, sim_config > sims;
    std::vector< requirement > requirements;
    vo_file obligations;

    [[nodiscard]] std::set< std::string > artifacts() const;
};

vo_project load_project( const project_config& cfg );

} // namespace vove
