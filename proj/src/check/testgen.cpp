#include "vove/check/testgen.hpp"

#include "vove/check/explicit.hpp"
#include "vove/model/diagnostic.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

namespace vove
{

namespace
{

constexpr auto none = std::numeric_limits< std::size_t >::max();

// Breadth-first parents over the (already explored) space.
std::vector< std::size_t > bfs_parents( const state_space& space, std::vector< std::size_t >* order = nullptr )
{
    std::vector< std::size_t > parent( space.node_count(), none );
    std::vector< char > seen( space.node_count(), 0 );
    std::deque< std::size_t > queue{ state_space::root };
    seen[ state_space::root ] = 1;
    while ( !queue.empty() )
    {
        const auto v = queue.front();
        queue.pop_front();
        if ( order )
            order->push_back( v );
        for ( const auto e : space.out_edges( v ) )
        {
            const auto t = space.edge( e ).target;
            if ( !seen[ t ] )
            {
                seen[ t ] = 1;
                parent[ t ] = e;
                queue.push_back( t );
            }
        }
    }
    return parent;
}

void observe_path( model_context& ctx, const path& p )
{
    if ( p.origin )
        ctx.observe( *p.origin );
    for ( const auto& s : p.steps )
    {
        ctx.observe( s.label );
        ctx.observe( s.target );
    }
}

// Calls fn(args) for every parameter binding of `op`.
template < typename F >
void for_each_binding( const machine& m, const operation& op, F fn )
{
    std::vector< value_t > args( op.params.size(), 0 );
    while ( true )
    {
        fn( args );
        std::size_t k = args.size();
        while ( k > 0 )
        {
            --k;
            if ( static_cast< std::size_t >( ++args[ k ] ) < m.set_size( op.params[ k ].set ) )
                break;
            args[ k ] = 0;
            if ( k == 0 )
                return;
        }
        if ( args.empty() )
            return;
    }
}

std::vector< expr > children( const expr& e )
{
    if ( e->kind == expr_kind::and_ || e->kind == expr_kind::or_ )
    {
        std::vector< expr > out;
        for ( const auto& a : e->args )
        {
            if ( a->kind == e->kind )
            {
                auto sub = children( a );
                out.insert( out.end(), sub.begin(), sub.end() );
            }
            else
                out.push_back( a );
        }
        return out;
    }
    return e->args;
}

void collect_conditions( const expr& e, unsigned depth, unsigned level, std::vector< expr >& out )
{
    const bool connective = is_connective( e->kind );
    if ( !connective || depth == level )
    {
        out.push_back( e );
        return;
    }
    for ( const auto& c : children( e ) )
        collect_conditions( c, depth + 1, level, out );
}

expr substitute( const expr& root, const expr& target, const expr& with )
{
    if ( root == target )
        return with;
    bool changed = false;
    std::vector< expr > args;
    for ( const auto& a : root->args )
    {
        args.push_back( substitute( a, target, with ) );
        changed = changed || args.back() != a;
    }
    if ( !changed )
        return root;
    auto n = std::make_shared< expr_node >( *root );
    n->args = std::move( args );
    return n;
}

struct condition_probe
{
    std::string op;
    int op_index = 0;
    std::string text;
    program value;
    program guard_if_true;
    program guard_if_false;
};

std::vector< condition_probe > probes( const machine& m, unsigned level )
{
    std::vector< condition_probe > out;
    if ( level == 0 )
        return out;
    for ( std::size_t i = 0; i < m.operations.size(); ++i )
    {
        const auto& op = m.operations[ i ];
        if ( op.guard->kind == expr_kind::bool_lit )
            continue;
        std::vector< expr > conds;
        if ( !is_connective( op.guard->kind ) || level == 1 )
            conds.push_back( op.guard );
        else
            for ( const auto& c : children( op.guard ) )
                if ( op.guard->kind != expr_kind::and_ || !is_typing_conjunct( m, c, &op ) )
                    collect_conditions( c, 2, level, conds );
        for ( const auto& c : conds )
        {
            condition_probe p;
            p.op = op.name;
            p.op_index = static_cast< int >( i );
            p.text = to_string( c );
            p.value = m.compile( c );
            p.guard_if_true = m.compile( substitute( op.guard, c, make_bool( true ) ) );
            p.guard_if_false = m.compile( substitute( op.guard, c, make_bool( false ) ) );
            out.push_back( std::move( p ) );
        }
    }
    return out;
}

} // namespace

verdict gen_op_coverage( model_context& ctx, const std::vector< std::string >& ops )
{
    const auto& m = *ctx.model;
    auto& space = ctx.space;
    std::vector< int > wanted;
    for ( const auto& name : ops )
    {
        const auto op = m.find_operation( name );
        if ( !op )
            return verdict::error( "unknown operation " + name );
        wanted.push_back( *op );
    }

    std::map< int, path > found;
    std::vector< int > distinct( wanted.begin(), wanted.end() );
    std::sort( distinct.begin(), distinct.end() );
    distinct.erase( std::unique( distinct.begin(), distinct.end() ), distinct.end() );
    auto missing = distinct.size();

    try
    {
        std::vector< std::size_t > parent( space.node_count(), none );
        std::vector< char > seen( space.node_count(), 0 );
        std::deque< std::size_t > queue{ state_space::root };
        seen[ state_space::root ] = 1;
        while ( !queue.empty() && missing > 0 )
        {
            const auto v = queue.front();
            queue.pop_front();
            for ( const auto e : space.expand( v ) )
            {
                const auto& tr = space.edge( e );
                if ( tr.target >= seen.size() )
                {
                    seen.resize( space.node_count(), 0 );
                    parent.resize( space.node_count(), none );
                }
                const auto op = tr.label.op;
                if ( op >= 0 && !found.count( op )
                     && std::binary_search( distinct.begin(), distinct.end(), op ) )
                {
                    auto p = path_to( space, parent, v );
                    p.steps.push_back( { tr.label, space.node( tr.target ) } );
                    found.emplace( op, std::move( p ) );
                    --missing;
                }
                if ( !seen[ tr.target ] )
                {
                    seen[ tr.target ] = 1;
                    parent[ tr.target ] = e;
                    queue.push_back( tr.target );
                }
            }
        }
    }
    catch ( const limit_exceeded& e )
    {
        return verdict::error( e.what() );
    }
    catch ( const model_error& e )
    {
        return verdict::error( e.what() );
    }

    verdict v = verdict::success();
    std::vector< std::string > uncovered;
    for ( const auto w : wanted )
    {
        const auto it = found.find( w );
        if ( it == found.end() )
        {
            uncovered.push_back( op_name( m, w ) );
            continue;
        }
        v.traces.push_back( it->second );
        observe_path( ctx, it->second );
    }
    if ( !v.traces.empty() )
        ctx.current_trace = v.traces.back();
    if ( !uncovered.empty() )
    {
        v.result = status::fail;
        v.findings = uncovered;
        std::string list;
        for ( const auto& u : uncovered )
            list += ( list.empty() ? "" : ", " ) + u;
        v.message = "uncovered: " + list;
    }
    else
        v.message = std::to_string( v.traces.size() ) + " traces generated";
    return v;
}

std::vector< mcdc_requirement > mcdc_requirements( model_context& ctx, unsigned level )
{
    const auto& m = *ctx.model;
    auto& space = ctx.space;
    space.explore();
    const auto ps = probes( m, level );
    std::vector< mcdc_requirement > reqs;
    for ( const auto& p : ps )
        for ( const bool v : { true, false } )
            reqs.push_back( { p.op, p.text, v, false } );

    for ( std::size_t n = 1; n < space.node_count(); ++n )
    {
        const auto& s = space.node( n ).values;
        for ( std::size_t k = 0; k < ps.size(); ++k )
        {
            const auto& p = ps[ k ];
            for_each_binding( m, m.operations[ static_cast< std::size_t >( p.op_index ) ],
                              [ & ]( const std::vector< value_t >& args )
                              {
                                  if ( p.guard_if_true.test( s, args ) == p.guard_if_false.test( s, args ) )
                                      return;
                                  const bool val = p.value.test( s, args );
                                  reqs[ 2 * k + ( val ? 0 : 1 ) ].witnessed = true;
                              } );
        }
    }
    return reqs;
}

verdict gen_mcdc( model_context& ctx, unsigned level )
{
    const auto& m = *ctx.model;
    auto& space = ctx.space;
    if ( auto err = explore_all( ctx ) )
        return *err;

    std::vector< mcdc_requirement > reqs;
    std::vector< condition_probe > ps;
    try
    {
        reqs = mcdc_requirements( ctx, level );
        ps = probes( m, level );
    }
    catch ( const model_error& e )
    {
        return verdict::error( e.what() );
    }

    std::vector< std::size_t > order;
    const auto parent = bfs_parents( space, &order );
    verdict v = verdict::success();
    std::vector< char > done( reqs.size(), 0 );
    for ( const auto n : order )
    {
        if ( n == state_space::root )
            continue;
        const auto& s = space.node( n ).values;
        for ( std::size_t k = 0; k < ps.size(); ++k )
        {
            const auto& p = ps[ k ];
            const auto& op = m.operations[ static_cast< std::size_t >( p.op_index ) ];
            for_each_binding( m, op,
                              [ & ]( const std::vector< value_t >& args )
                              {
                                  if ( p.guard_if_true.test( s, args ) == p.guard_if_false.test( s, args ) )
                                      return;
                                  const auto r = 2 * k + ( p.value.test( s, args ) ? 0 : 1 );
                                  if ( done[ r ] )
                                      return;
                                  done[ r ] = 1;
                                  auto tc = path_to( space, parent, n );
                                  const event e{ p.op_index, args };
                                  if ( op.guard_code.test( s, args ) )
                                  {
                                      state next;
                                      apply_unchecked( m, space.node( n ), e, next );
                                      tc.steps.push_back( { e, next } );
                                  }
                                  v.traces.push_back( std::move( tc ) );
                              } );
        }
    }
    for ( const auto& t : v.traces )
        observe_path( ctx, t );

    std::size_t witnessed = 0;
    for ( const auto& r : reqs )
    {
        if ( r.witnessed )
            ++witnessed;
        else
            v.findings.push_back( r.op + ": " + r.condition + ( r.value ? " = TRUE" : " = FALSE" ) );
    }
    v.message = std::to_string( witnessed ) + " of " + std::to_string( reqs.size() ) + " requirements witnessed";
    if ( witnessed != reqs.size() )
        v.result = status::fail;
    return v;
}

verdict vacuous_parts( model_context& ctx, vacuity_scope scope )
{
    const auto& m = *ctx.model;
    verdict v = verdict::success();

    // Each row is one valuation (or state and binding); columns are conjuncts.
    auto analyse = [ & ]( const std::string& where, const std::vector< expr >& parts,
                          const std::vector< std::vector< char > >& rows,
                          const std::vector< std::vector< char > >& antecedents )
    {
        for ( std::size_t i = 0; i < parts.size(); ++i )
        {
            bool matters = false;
            for ( const auto& r : rows )
            {
                bool rest = true;
                for ( std::size_t j = 0; j < parts.size() && rest; ++j )
                    rest = j == i || r[ j ];
                if ( rest && !r[ i ] )
                {
                    matters = true;
                    break;
                }
            }
            if ( !matters )
                v.findings.push_back( where + ": " + to_string( parts[ i ] ) + " is implied by the other conjuncts" );
            if ( parts[ i ]->kind == expr_kind::implies )
            {
                bool fired = false;
                for ( const auto& a : antecedents )
                    fired = fired || a[ i ];
                if ( !fired )
                    v.findings.push_back( where + ": antecedent of " + to_string( parts[ i ] ) + " is never true" );
            }
        }
    };

    try
    {
        if ( scope == vacuity_scope::invariant )
        {
            std::vector< expr > parts;
            for ( const auto& c : conjuncts( m.invariant ) )
                if ( !is_typing_conjunct( m, c ) )
                    parts.push_back( c );
            std::vector< program > code, ante;
            for ( const auto& c : parts )
            {
                code.push_back( m.compile( c ) );
                ante.push_back( c->kind == expr_kind::implies ? m.compile( c->args[ 0 ] ) : program{} );
            }

            double total = 1;
            for ( std::size_t i = 0; i < m.variables.size(); ++i )
                total *= static_cast< double >( m.domain_size( static_cast< int >( i ) ) );
            if ( total > 4e6 )
                return verdict::error( "too many type-correct valuations to check the invariant" );

            std::vector< std::vector< char > > rows, antecedents;
            std::vector< value_t > vals( m.variables.size() );
            for ( std::size_t i = 0; i < vals.size(); ++i )
                vals[ i ] = m.variables[ i ].lo;
            while ( true )
            {
                std::vector< char > r( parts.size() ), a( parts.size(), 0 );
                for ( std::size_t i = 0; i < parts.size(); ++i )
                {
                    r[ i ] = code[ i ].test( vals );
                    if ( !ante[ i ].empty() )
                        a[ i ] = ante[ i ].test( vals );
                }
                rows.push_back( std::move( r ) );
                antecedents.push_back( std::move( a ) );
                std::size_t k = vals.size();
                bool wrapped = true;
                while ( k > 0 )
                {
                    --k;
                    if ( vals[ k ] < m.variables[ k ].hi )
                    {
                        ++vals[ k ];
                        wrapped = false;
                        break;
                    }
                    vals[ k ] = m.variables[ k ].lo;
                }
                if ( wrapped )
                    break;
            }
            analyse( "INVARIANT", parts, rows, antecedents );
        }
        else
        {
            if ( auto err = explore_all( ctx ) )
                return *err;
            const auto& space = ctx.space;
            for ( const auto& op : m.operations )
            {
                if ( op.guard->kind == expr_kind::bool_lit )
                    continue;
                std::vector< expr > parts;
                for ( const auto& c : conjuncts( op.guard ) )
                    if ( !is_typing_conjunct( m, c, &op ) )
                        parts.push_back( c );
                std::vector< program > code, ante;
                for ( const auto& c : parts )
                {
                    code.push_back( m.compile( c ) );
                    ante.push_back( c->kind == expr_kind::implies ? m.compile( c->args[ 0 ] ) : program{} );
                }
                std::vector< std::vector< char > > rows, antecedents;
                for ( std::size_t n = 1; n < space.node_count(); ++n )
                {
                    const auto& s = space.node( n ).values;
                    for_each_binding( m, op,
                                      [ & ]( const std::vector< value_t >& args )
                                      {
                                          std::vector< char > r( parts.size() ), a( parts.size(), 0 );
                                          for ( std::size_t i = 0; i < parts.size(); ++i )
                                          {
                                              r[ i ] = code[ i ].test( s, args );
                                              if ( !ante[ i ].empty() )
                                                  a[ i ] = ante[ i ].test( s, args );
                                          }
                                          rows.push_back( std::move( r ) );
                                          antecedents.push_back( std::move( a ) );
                                      } );
                }
                analyse( op.name, parts, rows, antecedents );
            }
        }
    }
    catch ( const model_error& e )
    {
        return verdict::error( e.what() );
    }

    if ( !v.findings.empty() )
    {
        v.result = status::fail;
        v.message = std::to_string( v.findings.size() ) + " vacuous part(s)";
    }
    else
        v.message = "no vacuous parts";
    return v;
}

} // namespace vove
