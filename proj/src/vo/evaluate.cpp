#include "vove/vo/evaluate.hpp"

#include "vove/check/ctl.hpp"
#include "vove/check/ltl.hpp"
#include "vove/check/trace.hpp"
#include "vove/sim/simulator.hpp"
#include "vove/sim/statistics.hpp"
#include "vove/space/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <set>

namespace vove
{

namespace
{

using kind = vo_node::kind;

constexpr int produces_state = 1;
constexpr int produces_complete = 2;

using facts = std::map< std::string, int >;

bool needs_state( technique t )
{
    return t == technique::stat || t == technique::svis || t == technique::oct || t == technique::vct
           || t == technique::mmv;
}

bool needs_complete( technique t ) { return t == technique::sprj || t == technique::ed || t == technique::vap; }

int produced( const vt_decl& vt )
{
    switch ( vt.tech )
    {
    case technique::mc:
        return std::get< mc_task >( vt.params ).config.k == mc_config::kind::fin ? produces_state | produces_complete
                                                                                  : produces_state;
    case technique::tr:
    case technique::oc:
    case technique::mcdc:
        return produces_state;
    case technique::ltl:
    case technique::ctl:
        return std::get< temporal_task >( vt.params ).expect_holds ? 0 : produces_state;
    default:
        return 0;
    }
}

struct flow_checker
{
    const std::map< std::string, const vt_decl* >& tasks;
    check_mode mode;
    std::string obligation;
    std::vector< diagnostic_entry >& out;
    std::set< std::string > reported;

    void error( const std::string& task, const std::string& msg )
    {
        if ( reported.insert( task + "\n" + msg ).second )
            out.push_back( { diagnostic_entry::severity::error, obligation, task, msg } );
    }

    facts flow( const vo_expr& e, facts in )
    {
        switch ( e->op )
        {
        case kind::leaf:
        {
            const auto it = tasks.find( e->task );
            if ( it == tasks.end() )
            {
                error( e->task, "unknown task " + e->task );
                return in;
            }
            const auto& vt = *it->second;
            if ( !is_supported( vt.tech ) )
            {
                error( vt.id, std::string( "technique " ) + to_string( vt.tech ) + " is not supported" );
                return in;
            }
            const auto& ctx = vt.context.front();
            if ( needs_state( vt.tech ) && !( in[ ctx ] & produces_state ) )
                error( vt.id, vt.id + " inspects " + ctx + " before any task has produced states" );
            if ( needs_complete( vt.tech ) && !( in[ ctx ] & produces_complete ) )
            {
                if ( mode == check_mode::strict )
                    error( vt.id, vt.id + " needs a complete exploration of " + ctx + " first" );
                else
                    in[ ctx ] |= produces_state | produces_complete;
            }
            in[ ctx ] |= produced( vt );
            return in;
        }
        case kind::negation:
            return flow( e->left, in );
        case kind::sequence:
            return flow( e->right, flow( e->left, in ) );
        default:
        {
            auto a = flow( e->left, in );
            const auto b = flow( e->right, in );
            for ( const auto& [ ctx, bits ] : b )
                a[ ctx ] |= bits;
            return a;
        }
        }
    }
};

status invert( status s )
{
    if ( s == status::success )
        return status::fail;
    if ( s == status::fail )
        return status::success;
    return status::error;
}

status combine( kind op, status a, status b )
{
    if ( a == status::error || b == status::error )
        return status::error;
    const bool x = a == status::success;
    const bool y = b == status::success;
    bool r = false;
    switch ( op )
    {
    case kind::conjunction:
        r = x && y;
        break;
    case kind::disjunction:
        r = x || y;
        break;
    case kind::implication:
        r = !x || y;
        break;
    case kind::equivalence:
        r = x == y;
        break;
    default:
        break;
    }
    return r ? status::success : status::fail;
}

result_node skeleton( const vo_expr& e )
{
    result_node n;
    n.op = e->op;
    n.task = e->task;
    if ( e->left )
        n.children.push_back( skeleton( e->left ) );
    if ( e->right )
        n.children.push_back( skeleton( e->right ) );
    return n;
}

void evaluated_leaves( const result_node& n, std::vector< std::string >& out )
{
    if ( !n.evaluated )
        return;
    if ( n.op == kind::leaf )
        out.push_back( n.task );
    for ( const auto& c : n.children )
        evaluated_leaves( c, out );
}

void failing_leaves( const result_node& n, std::vector< std::string >& out )
{
    if ( !n.evaluated || n.result == status::success )
        return;
    if ( n.op == kind::leaf )
    {
        out.push_back( n.task );
        return;
    }
    if ( n.result == status::error && n.op != kind::sequence )
    {
        for ( const auto& c : n.children )
            if ( c.evaluated && c.result == status::error )
                failing_leaves( c, out );
        return;
    }
    switch ( n.op )
    {
    case kind::sequence:
        failing_leaves( n.children[ 0 ].result != status::success ? n.children[ 0 ] : n.children[ 1 ], out );
        break;
    case kind::conjunction:
    case kind::disjunction:
        for ( const auto& c : n.children )
            failing_leaves( c, out );
        break;
    case kind::implication:
        evaluated_leaves( n.children[ 0 ], out );
        failing_leaves( n.children[ 1 ], out );
        break;
    default:
        evaluated_leaves( n, out );
        break;
    }
}

void add_unique( std::vector< std::string >& v, const std::string& s )
{
    if ( std::find( v.begin(), v.end(), s ) == v.end() )
        v.push_back( s );
}

std::uint64_t fnv1a( const std::string& s )
{
    std::uint64_t h = 14695981039346656037ull;
    for ( const unsigned char c : s )
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double parse_double( const std::string& s )
{
    std::size_t used = 0;
    const double v = std::stod( s, &used );
    if ( used != s.size() )
        throw std::invalid_argument( "bad number '" + s + "'" );
    return v;
}

verdict judge( const std::string& formula, const query_env& env )
{
    return check_query( formula, env ) ? verdict::success( formula + " holds" )
                                       : verdict::fail( formula + " does not hold" );
}

} // namespace

std::vector< diagnostic_entry > semantic_check( const vo_file& file, const std::vector< requirement >& reqs,
                                                check_mode mode )
{
    std::vector< diagnostic_entry > out;
    std::map< std::string, const vt_decl* > tasks;
    for ( const auto& vt : file.tasks )
        tasks.emplace( vt.id, &vt );
    std::set< std::string > req_ids;
    for ( const auto& r : reqs )
        req_ids.insert( r.id );

    std::set< std::string > used;
    std::set< std::string > seen;
    for ( const auto& vo : file.obligations )
    {
        if ( !seen.insert( vo.id ).second )
            out.push_back( { diagnostic_entry::severity::error, vo.id, {}, "duplicate obligation " + vo.id } );
        for ( const auto& r : vo.validates )
            if ( !req_ids.count( r ) )
                out.push_back( { diagnostic_entry::severity::error, vo.id, {}, "unknown requirement " + r } );
        flow_checker fc{ tasks, mode, vo.id, out, {} };
        fc.flow( vo.expr, {} );
        for ( const auto& l : leaves( vo.expr ) )
            used.insert( l );
    }
    for ( const auto& vt : file.tasks )
        if ( !used.count( vt.id ) )
            out.push_back( { diagnostic_entry::severity::warning, {}, vt.id, "task " + vt.id + " is never used" } );
    return out;
}

eval_options options_for( const vo_project& p )
{
    eval_options o;
    o.mode = p.config.mode;
    o.seed = p.config.seed;
    o.sim_runs = p.config.sim_runs;
    o.max_states = p.config.max_states;
    const auto dir = std::filesystem::path( p.config.obligations ).parent_path().string();
    o.base_dir = dir.empty() ? "." : dir;
    return o;
}

std::uint64_t task_seed( std::uint64_t master, const std::string& task ) { return run_seed( master, fnv1a( task ) ); }

evaluator::evaluator( const vo_project& p, eval_options opts ) : _project{ p }, _opts{ std::move( opts ) }
{
    for ( const auto& vt : p.obligations.tasks )
        _tasks.emplace( vt.id, &vt );
    _diagnostics = semantic_check( p.obligations, p.requirements, _opts.mode );
}

std::vector< vo_result > evaluator::evaluate_all()
{
    std::vector< vo_result > out;
    for ( const auto& vo : _project.obligations.obligations )
        out.push_back( evaluate( vo ) );
    return out;
}

vo_result evaluator::evaluate( const vo_decl& vo )
{
    const auto start = std::chrono::steady_clock::now();
    vo_result r;
    r.id = vo.id;
    r.validates = vo.validates;
    r.expression = to_string( vo.expr );

    std::vector< std::string > problems;
    std::vector< std::string > flagged;
    for ( const auto& d : _diagnostics )
        if ( d.obligation == vo.id && d.level == diagnostic_entry::severity::error )
        {
            problems.push_back( d.message );
            if ( !d.task.empty() )
                add_unique( flagged, d.task );
        }

    if ( !problems.empty() )
    {
        r.result = status::error;
        r.tree = skeleton( vo.expr );
        for ( std::size_t i = 0; i < problems.size(); ++i )
            r.message += ( i ? "; " : "" ) + problems[ i ];
        r.blame.tasks = flagged;
        r.blame.requirements = vo.validates;
        for ( const auto& t : flagged )
            if ( const auto it = _tasks.find( t ); it != _tasks.end() )
                for ( const auto& c : it->second->context )
                    add_unique( r.blame.artifacts, c );
    }
    else
    {
        state st{ validation_session( _opts.max_states ), "root" };
        r.tree = eval( vo.expr, st, r.runs );
        r.result = r.tree.result;
        if ( r.result != status::success )
        {
            for ( const auto& run : r.runs )
                if ( run.outcome.result != status::success )
                {
                    r.message = run.task + ": " + run.outcome.message;
                    break;
                }
            r.blame = blame( vo, r.tree );
        }
    }
    r.elapsed_ms = std::chrono::duration< double, std::milli >( std::chrono::steady_clock::now() - start ).count();
    return r;
}

result_node evaluator::eval( const vo_expr& e, state& st, std::vector< task_run >& runs )
{
    result_node n;
    n.op = e->op;
    n.task = e->task;
    n.evaluated = true;
    switch ( e->op )
    {
    case kind::leaf:
    {
        const auto found = _tasks.find( e->task );
        if ( found == _tasks.end() )
        {
            verdict v;
            v.message = "unknown task " + e->task;
            runs.push_back( task_run{ e->task, st.lineage, false, v } );
            n.result = status::error;
            break;
        }
        const auto& vt = *found->second;
        task_run run{ vt.id, st.lineage, false, {} };
        const auto key = std::make_pair( vt.id, st.lineage );
        if ( const auto it = _memo.find( key ); it != _memo.end() )
        {
            run.cached = true;
            run.outcome = it->second.outcome;
            st.session = it->second.after;
        }
        else
        {
            run.outcome = run_task( vt, st.session );
            _memo.emplace( key, memo_entry{ run.outcome, st.session } );
        }
        n.result = run.outcome.result;
        st.lineage += ";" + vt.id;
        runs.push_back( std::move( run ) );
        break;
    }
    case kind::negation:
        n.children.push_back( eval( e->left, st, runs ) );
        n.result = invert( n.children[ 0 ].result );
        break;
    case kind::sequence:
        n.children.push_back( eval( e->left, st, runs ) );
        if ( n.children[ 0 ].result == status::success )
        {
            n.children.push_back( eval( e->right, st, runs ) );
            n.result = n.children[ 1 ].result;
        }
        else
        {
            n.children.push_back( skeleton( e->right ) );
            n.result = n.children[ 0 ].result;
        }
        break;
    default:
    {
        auto a = st;
        auto b = st;
        n.children.push_back( eval( e->left, a, runs ) );
        n.children.push_back( eval( e->right, b, runs ) );
        n.result = combine( e->op, n.children[ 0 ].result, n.children[ 1 ].result );
        st.session = std::move( a.session );
        st.session.merge_from( b.session );
        st.lineage += ";(" + to_string( e ) + ")";
        break;
    }
    }
    return n;
}

verdict evaluator::run_task( const vt_decl& vt, validation_session& session )
{
    try
    {
        const auto& model = _project.models.at( vt.context.front() );
        auto& ctx = session.context( vt.context.front(), model );
        const auto& m = *model;

        auto ensure_complete = [ & ]() -> std::optional< verdict >
        {
            if ( ctx.space.complete() )
                return std::nullopt;
            if ( _opts.mode == check_mode::strict )
                return verdict::error( "the state space of " + ctx.name + " is not fully explored" );
            return explore_all( ctx );
        };

        auto make_sim = [ & ]
        {
            if ( vt.context.size() < 2 || !_project.sims.count( vt.context[ 1 ] ) )
                throw std::invalid_argument( vt.id + " needs a simulation configuration" );
            return simulator( model, _project.sims.at( vt.context[ 1 ] ) );
        };

        switch ( vt.tech )
        {
        case technique::tr:
        {
            const auto& p = std::get< replay_task >( vt.params );
            if ( p.file.empty() )
                return replay_trace( ctx, make_trace( m, p.steps ) );
            const auto file = std::filesystem::path( p.file ).is_absolute()
                                      ? p.file
                                      : ( std::filesystem::path( _opts.base_dir ) / p.file ).string();
            return replay_trace( ctx, load_trace_file( m, file ) );
        }
        case technique::mc:
            return check_explicit( ctx, std::get< mc_task >( vt.params ).config );
        case technique::ltl:
        {
            const auto& p = std::get< temporal_task >( vt.params );
            return check_ltl( ctx, parse_ltl( p.formula ), p.expect_holds );
        }
        case technique::ctl:
        {
            const auto& p = std::get< temporal_task >( vt.params );
            return check_ctl( ctx, parse_ctl( p.formula ), p.expect_holds );
        }
        case technique::oc:
            return gen_op_coverage( ctx, std::get< coverage_task >( vt.params ).operations );
        case technique::mcdc:
            return gen_mcdc( ctx, static_cast< unsigned >( std::get< mcdc_task >( vt.params ).level ) );
        case technique::vap:
            if ( auto failed = ensure_complete() )
                return *failed;
            return vacuous_parts( ctx, std::get< vacuity_task >( vt.params ).scope );
        case technique::ht:
        case technique::eop:
        {
            const auto& p = std::get< statistical_task >( vt.params );
            const auto sim = make_sim();
            const auto h = hypothesis::parse( p.hypothesis );
            const auto n = p.runs.value_or( _opts.sim_runs );
            const auto seed = task_seed( _opts.seed, vt.id );
            const double bound = parse_double( p.bound );
            return vt.tech == technique::ht ? run_hypothesis_test( sim, h, n, bound, seed )
                                            : run_estimation( sim, h, n, bound, seed );
        }
        case technique::sistat:
        {
            const auto& p = std::get< sistat_task >( vt.params );
            const auto sim = make_sim();
            const auto rs = sim.monte_carlo( p.runs.value_or( _opts.sim_runs ), condition::parse( p.start ),
                                             condition::parse( p.end ), task_seed( _opts.seed, vt.id ) );
            std::vector< qvalue > rel;
            for ( const auto& [ key, count ] : simulation_statistics( m, rs ) )
                rel.push_back( qvalue::pair( qvalue::pair( qvalue::text( key.first ), qvalue::text( key.second ) ),
                                             qvalue::number( static_cast< double >( count ) ) ) );
            query_env env;
            env[ "R_sistat" ] = qvalue::set( std::move( rel ) );
            return judge( p.formula, env );
        }
        case technique::sprj:
        {
            if ( auto failed = ensure_complete() )
                return *failed;
            const auto& p = std::get< projection_task >( vt.params );
            const auto g = project( ctx.space, p.expression );
            auto env = inspection_bindings( ctx );
            bind_projection( env, g, p.expression );
            return judge( p.formula, env );
        }
        case technique::ed:
            if ( auto failed = ensure_complete() )
                return *failed;
            return judge( std::get< inspection_task >( vt.params ).formula, inspection_bindings( ctx ) );
        case technique::svis:
        case technique::stat:
        case technique::oct:
        case technique::rwm:
        case technique::vct:
        case technique::mmv:
            return judge( std::get< inspection_task >( vt.params ).formula, inspection_bindings( ctx ) );
        case technique::po:
        case technique::smc:
        case technique::psmc:
            break;
        }
        return verdict::error( std::string( "technique " ) + to_string( vt.tech ) + " is not supported" );
    }
    catch ( const std::exception& e )
    {
        return verdict::error( e.what() );
    }
}

blame_set evaluator::blame( const vo_decl& vo, const result_node& tree ) const
{
    blame_set b;
    std::vector< std::string > leaves_found;
    failing_leaves( tree, leaves_found );
    for ( const auto& t : leaves_found )
        add_unique( b.tasks, t );
    for ( const auto& r : vo.validates )
        add_unique( b.requirements, r );
    for ( const auto& t : b.tasks )
    {
        for ( const auto& other : _project.obligations.obligations )
            if ( other.expr->op == kind::leaf && other.expr->task == t )
                for ( const auto& r : other.validates )
                    add_unique( b.requirements, r );
        if ( const auto it = _tasks.find( t ); it != _tasks.end() )
            for ( const auto& c : it->second->context )
                add_unique( b.artifacts, c );
    }
    return b;
}

} // namespace vove
