#include "vove/vo/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace vove
{

namespace
{

using nlohmann::ordered_json;

const char* kind_name( vo_node::kind k )
{
    switch ( k )
    {
    case vo_node::kind::leaf:
        return "task";
    case vo_node::kind::negation:
        return "not";
    case vo_node::kind::sequence:
        return "seq";
    case vo_node::kind::conjunction:
        return "and";
    case vo_node::kind::disjunction:
        return "or";
    case vo_node::kind::implication:
        return "implies";
    case vo_node::kind::equivalence:
        return "iff";
    }
    return "?";
}

ordered_json tree_json( const result_node& n )
{
    ordered_json j;
    j[ "op" ] = kind_name( n.op );
    if ( n.op == vo_node::kind::leaf )
        j[ "task" ] = n.task;
    j[ "status" ] = n.evaluated ? to_string( n.result ) : "NOT_RUN";
    if ( !n.children.empty() )
    {
        j[ "children" ] = ordered_json::array();
        for ( const auto& c : n.children )
            j[ "children" ].push_back( tree_json( c ) );
    }
    return j;
}

const char* severity_name( diagnostic_entry::severity s )
{
    return s == diagnostic_entry::severity::error ? "ERROR" : "WARN";
}

std::string pad( std::string s, std::size_t width )
{
    if ( s.size() < width )
        s.append( width - s.size(), ' ' );
    return s;
}

std::string join( const std::vector< std::string >& v )
{
    std::string out;
    for ( std::size_t i = 0; i < v.size(); ++i )
        out += ( i ? ", " : "" ) + v[ i ];
    return out;
}

} // namespace

bool evaluation_report::all_success() const
{
    for ( const auto& r : results )
        if ( r.result != status::success )
            return false;
    return true;
}

evaluation_report run_project( const vo_project& p, const std::string& name )
{
    evaluation_report r;
    r.project = name;
    const auto opts = options_for( p );
    r.seed = opts.seed;
    r.mode = opts.mode;
    evaluator ev{ p, opts };
    r.diagnostics = ev.diagnostics();
    r.results = ev.evaluate_all();
    return r;
}

std::string format_text( const evaluation_report& r )
{
    std::size_t id_width = 2;
    for ( const auto& v : r.results )
        id_width = std::max( id_width, v.id.size() );
    std::ostringstream out;
    out << pad( "VO", id_width ) << "  " << pad( "STATUS", 7 ) << "  " << pad( "ELAPSED", 10 ) << "  REQUIREMENTS\n";
    for ( const auto& v : r.results )
    {
        char elapsed[ 32 ];
        std::snprintf( elapsed, sizeof elapsed, "%.1f ms", v.elapsed_ms );
        out << pad( v.id, id_width ) << "  " << pad( to_string( v.result ), 7 ) << "  " << pad( elapsed, 10 ) << "  "
            << join( v.validates ) << "\n";
    }
    std::size_t passed = 0;
    for ( const auto& v : r.results )
        passed += v.result == status::success;
    out << passed << "/" << r.results.size() << " obligations succeeded\n";

    for ( const auto& v : r.results )
    {
        if ( v.result == status::success )
            continue;
        out << "\n" << v.id << " " << to_string( v.result ) << ": " << v.expression << "\n";
        if ( !v.message.empty() )
            out << "  " << v.message << "\n";
        out << "  blame tasks: " << join( v.blame.tasks ) << "\n";
        out << "  blame requirements: " << join( v.blame.requirements ) << "\n";
        out << "  blame artifacts: " << join( v.blame.artifacts ) << "\n";
    }
    if ( !r.diagnostics.empty() )
    {
        out << "\n";
        for ( const auto& d : r.diagnostics )
            out << severity_name( d.level ) << ( d.obligation.empty() ? "" : " " + d.obligation ) << ": " << d.message
                << "\n";
    }
    return out.str();
}

std::string format_json( const evaluation_report& r, const vo_project& p )
{
    ordered_json j;
    j[ "schema" ] = 1;
    j[ "project" ] = r.project;
    j[ "seed" ] = r.seed;
    j[ "mode" ] = r.mode == check_mode::strict ? "strict" : "lenient";

    j[ "diagnostics" ] = ordered_json::array();
    for ( const auto& d : r.diagnostics )
    {
        ordered_json e;
        e[ "severity" ] = severity_name( d.level );
        e[ "obligation" ] = d.obligation;
        e[ "task" ] = d.task;
        e[ "message" ] = d.message;
        j[ "diagnostics" ].push_back( e );
    }

    j[ "requirements" ] = ordered_json::array();
    for ( const auto& req : p.requirements )
    {
        ordered_json e;
        e[ "id" ] = req.id;
        e[ "kind" ] = req.kind;
        ordered_json by = ordered_json::array();
        for ( const auto& v : r.results )
            if ( std::find( v.validates.begin(), v.validates.end(), req.id ) != v.validates.end() )
                by.push_back( v.id );
        e[ "validated_by" ] = by;
        j[ "requirements" ].push_back( e );
    }

    j[ "tasks" ] = ordered_json::array();
    for ( const auto& vt : p.obligations.tasks )
    {
        ordered_json e;
        e[ "id" ] = vt.id;
        e[ "context" ] = vt.context;
        e[ "technique" ] = to_string( vt.tech );
        e[ "parameters" ] = params_string( vt );
        j[ "tasks" ].push_back( e );
    }

    j[ "obligations" ] = ordered_json::array();
    for ( const auto& v : r.results )
    {
        ordered_json e;
        e[ "id" ] = v.id;
        e[ "expression" ] = v.expression;
        e[ "validates" ] = v.validates;
        e[ "status" ] = to_string( v.result );
        e[ "message" ] = v.message;
        e[ "tree" ] = tree_json( v.tree );
        e[ "runs" ] = ordered_json::array();
        for ( const auto& run : v.runs )
        {
            ordered_json t;
            t[ "task" ] = run.task;
            t[ "lineage" ] = run.lineage;
            t[ "cached" ] = run.cached;
            t[ "status" ] = to_string( run.outcome.result );
            t[ "message" ] = run.outcome.message;
            std::string ctx;
            for ( const auto& vt : p.obligations.tasks )
                if ( vt.id == run.task )
                    ctx = vt.context.front();
            const auto model = p.models.find( ctx );
            if ( run.outcome.trace && model != p.models.end() )
                t[ "trace" ] = path_string( *model->second, *run.outcome.trace );
            if ( run.outcome.loop_start )
                t[ "loop_start" ] = *run.outcome.loop_start;
            if ( !run.outcome.traces.empty() && model != p.models.end() )
            {
                t[ "tests" ] = ordered_json::array();
                for ( const auto& tc : run.outcome.traces )
                    t[ "tests" ].push_back( path_string( *model->second, tc ) );
            }
            if ( !run.outcome.findings.empty() )
                t[ "findings" ] = run.outcome.findings;
            e[ "runs" ].push_back( t );
        }
        ordered_json b;
        b[ "tasks" ] = v.blame.tasks;
        b[ "requirements" ] = v.blame.requirements;
        b[ "artifacts" ] = v.blame.artifacts;
        e[ "blame" ] = b;
        j[ "obligations" ].push_back( e );
    }
    std::size_t passed = 0;
    for ( const auto& v : r.results )
        passed += v.result == status::success;
    j[ "summary" ] = { { "obligations", r.results.size() }, { "success", passed }, { "all_success", r.all_success() } };
    return j.dump( 2 ) + "\n";
}

} // namespace vove
