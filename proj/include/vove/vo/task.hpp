#pragma once

#include "vove/check/explicit.hpp"
#include "vove/check/testgen.hpp"
#include "vove/vo/requirements.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vove
{

enum class technique
{
    tr,
    ht,
    eop,
    oc,
    mcdc,
    mc,
    ltl,
    ctl,
    svis,
    sprj,
    stat,
    sistat,
    ed,
    oct,
    rwm,
    vct,
    mmv,
    vap,
    // recognised but not executable
    po,
    smc,
    psmc
};

const char* to_string( technique t );
std::optional< technique > parse_technique( std::string_view name );
bool is_supported( technique t );

struct mc_task
{
    mc_config config;
    bool operator==( const mc_task& ) const = default;
};

// LTL and CTL: formula plus the expected outcome.
struct temporal_task
{
    std::string formula;
    bool expect_holds = true;
    bool operator==( const temporal_task& ) const = default;
};

struct replay_task
{
    std::vector< std::pair< std::string, std::string > > steps;  // event, postcondition
    std::string file;                                            // `@path` form
    bool operator==( const replay_task& ) const = default;
};

struct coverage_task
{
    std::vector< std::string > operations;
    bool operator==( const coverage_task& ) const = default;
};

struct mcdc_task
{
    int level = 0;
    bool operator==( const mcdc_task& ) const = default;
};

struct vacuity_task
{
    vacuity_scope scope = vacuity_scope::invariant;
    bool operator==( const vacuity_task& ) const = default;
};

// HT (bound = alpha) and EOP (bound = delta).
struct statistical_task
{
    std::optional< std::size_t > runs;
    std::string hypothesis;  // canonical text
    std::string bound;
    bool operator==( const statistical_task& ) const = default;
};

struct sistat_task
{
    std::optional< std::size_t > runs;
    std::string start;
    std::string end;
    std::string formula;
    bool operator==( const sistat_task& ) const = default;
};

struct inspection_task
{
    std::string formula;
    bool operator==( const inspection_task& ) const = default;
};

struct projection_task
{
    std::string expression;
    std::string formula;
    bool operator==( const projection_task& ) const = default;
};

struct unsupported_task
{
    std::string raw;
    bool operator==( const unsupported_task& ) const = default;
};

using task_params = std::variant< mc_task, temporal_task, replay_task, coverage_task, mcdc_task, vacuity_task,
                                  statistical_task, sistat_task, inspection_task, projection_task, unsupported_task >;

struct vt_decl
{
    std::string id;
    std::vector< std::string > context;  // machine, then optional simulation config
    technique tech = technique::mc;
    task_params params;

    bool operator==( const vt_decl& ) const = default;
};

// `ID/ctx1, ctx2/TECH: params`. With `artifacts`, every context name must be
// one of them.
vt_decl parse_vt( std::string_view line, const std::set< std::string >* artifacts = nullptr );
std::string params_string( const vt_decl& vt );
std::string to_string( const vt_decl& vt );

} // namespace vove
