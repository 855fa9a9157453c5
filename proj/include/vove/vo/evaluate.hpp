#pragma once

#include "vove/check/verdict.hpp"
#include "vove/vo/project.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vove
{

struct diagnostic_entry
{
    enum class severity
    {
        warning,
        error
    };

    severity level = severity::error;
    std::string obligation;  // empty for file-level findings
    std::string task;
    std::string message;
};

std::vector< diagnostic_entry > semantic_check( const vo_file& file, const std::vector< requirement >& reqs,
                                                check_mode mode );

struct blame_set
{
    std::vector< std::string > tasks;
    std::vector< std::string > requirements;
    std::vector< std::string > artifacts;

    [[nodiscard]] bool empty() const { return tasks.empty() && requirements.empty() && artifacts.empty(); }
};

struct result_node
{
    vo_node::kind op = vo_node::kind::leaf;
    std::string task;
    bool evaluated = false;
    status result = status::error;
    std::vector< result_node > children;
};

// One execution (or memo hit) of a task inside an obligation.
struct task_run
{
    std::string task;
    std::string lineage;
    bool cached = false;
    verdict outcome;
};

struct vo_result
{
    std::string id;
    std::vector< std::string > validates;
    std::string expression;
    status result = status::error;
    std::string message;
    result_node tree;
    std::vector< task_run > runs;
    blame_set blame;
    double elapsed_ms = 0;
};

struct eval_options
{
    check_mode mode = check_mode::strict;
    std::uint64_t seed = 0;
    std::size_t sim_runs = 1000;
    std::size_t max_states = 100000;
    std::string base_dir = ".";  // for `@file` traces
};

eval_options options_for( const vo_project& p );

std::uint64_t task_seed( std::uint64_t master, const std::string& task );

class evaluator
{
public:
    evaluator( const vo_project& p, eval_options opts );

    [[nodiscard]] const std::vector< diagnostic_entry >& diagnostics() const { return _diagnostics; }

    // Each obligation starts from a fresh session; task verdicts are shared
    // through the memo when the session lineage matches.
    vo_result evaluate( const vo_decl& vo );
    std::vector< vo_result > evaluate_all();

private:
    struct memo_entry
    {
        verdict outcome;
        validation_session after;
    };

    const vo_project& _project;
    eval_options _opts;
    std::vector< diagnostic_entry > _diagnostics;
    std::map< std::string, const vt_decl* > _tasks;
    std::map< std::pair< std::string, std::string >, memo_entry > _memo;

    struct state
    {
        validation_session session;
        std::string lineage;
    };

    result_node eval( const vo_expr& e, state& st, std::vector< task_run >& runs );
    verdict run_task( const vt_decl& vt, validation_session& session );
    blame_set blame( const vo_decl& vo, const result_node& tree ) const;
};

} // namespace vove
