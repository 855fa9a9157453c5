#pragma once

#include "vove/space/query.hpp"
#include "vove/space/session.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vove
{

// Raised when an analysis needs a fully explored space.
class incomplete_space : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct space_statistics
{
    std::size_t states = 0;       // including the root
    std::size_t transitions = 0;  // including INITIALISATION edges
    std::size_t deadlocks = 0;    // expanded states without successors
    std::vector< std::pair< std::string, std::size_t > > per_operation;  // INITIALISATION first

    // "Number of States", "Number of Transitions", "Deadlocked States",
    // then "Transitions of <op>" per operation.
    [[nodiscard]] std::vector< std::pair< std::string, std::size_t > > rows() const;
};

space_statistics statistics( const state_space& space );
std::string statistics_csv( const space_statistics& stats );

struct projected_edge
{
    std::string source;  // empty for the root
    std::string label;
    std::string target;

    auto operator<=>( const projected_edge& ) const = default;
};

struct projected_graph
{
    std::string expression;
    std::vector< std::string > nodes;      // sorted, root excluded
    std::vector< projected_edge > edges;   // sorted, deduplicated
};

// Quotient of a complete space by the value of `expression`.
projected_graph project( const state_space& space, std::string_view expression );

std::vector< std::pair< std::string, std::string > > enabling_relation( const state_space& space );

struct rw_entry
{
    bool write = false;
    std::string op;
    std::string var;

    auto operator<=>( const rw_entry& ) const = default;
};

std::vector< rw_entry > read_write_matrix( const machine& m );

std::vector< std::pair< std::string, std::size_t > > variable_coverage( const model_context& ctx );
std::vector< std::pair< std::string, bool > > operation_coverage( const model_context& ctx );
// Integer and boolean variables with at least one observed value.
std::vector< std::pair< std::string, std::pair< value_t, value_t > > > min_max( const model_context& ctx );

std::string to_dot( const state_space& space );
std::string to_dot( const projected_graph& g );

// Artifact bindings for inspection formulas: R_spstat, R_stat, Z_svis,
// T_svis, R_rwm, R_vct, R_oct, R_mmv, plus R_ed once the space is complete.
query_env inspection_bindings( const model_context& ctx );
// S_<name>/T_<name> and S_proj/T_proj for a projection.
void bind_projection( query_env& env, const projected_graph& g, const std::string& name );

} // namespace vove
