#include "vove/check/ctl.hpp"

#include "formula_lexer.hpp"

#include "vove/model/diagnostic.hpp"

#include <deque>
#include <limits>

namespace vove
{

ctl make_ctl( ctl_op op, std::vector< ctl > args, std::string text )
{
    auto n = std::make_shared< ctl_node >();
    n->op = op;
    n->args = std::move( args );
    n->text = std::move( text );
    return n;
}

namespace
{

using detail::ftoken;

class ctl_parser
{
    detail::ftoken_stream _ts;

public:
    explicit ctl_parser( std::string_view text ) : _ts{ text } {}

    ctl run()
    {
        auto f = equiv();
        if ( _ts.peek().k != ftoken::kind::end )
            _ts.fail( "unexpected input" );
        return f;
    }

private:
    ctl equiv()
    {
        auto l = implies();
        while ( _ts.accept( ftoken::kind::op, "<=>" ) )
            l = make_ctl( ctl_op::equiv, { l, implies() } );
        return l;
    }

    ctl implies()
    {
        auto l = disjunction();
        if ( _ts.accept( ftoken::kind::op, "=>" ) )
            return make_ctl( ctl_op::implies, { l, implies() } );
        return l;
    }

    ctl disjunction()
    {
        auto l = conjunction();
        while ( _ts.accept( ftoken::kind::op, "|" ) )
            l = make_ctl( ctl_op::or_, { l, conjunction() } );
        return l;
    }

    ctl conjunction()
    {
        auto l = unary();
        while ( _ts.accept( ftoken::kind::op, "&" ) )
            l = make_ctl( ctl_op::and_, { l, unary() } );
        return l;
    }

    ctl unary()
    {
        if ( _ts.accept( ftoken::kind::op, "!" ) )
            return make_ctl( ctl_op::not_, { unary() } );
        const auto t = _ts.peek();
        if ( t.k == ftoken::kind::word )
        {
            static const std::pair< std::string_view, ctl_op > ops[] = {
                { "EX", ctl_op::ex }, { "AX", ctl_op::ax }, { "EF", ctl_op::ef },
                { "AF", ctl_op::af }, { "EG", ctl_op::eg }, { "AG", ctl_op::ag },
            };
            for ( const auto& [ w, op ] : ops )
            {
                if ( t.text == w )
                {
                    _ts.next();
                    return make_ctl( op, { unary() } );
                }
            }
            if ( t.text == "E" || t.text == "A" )
            {
                _ts.next();
                const bool square = _ts.accept( ftoken::kind::lbrack );
                if ( !square )
                    _ts.expect( ftoken::kind::open, "'[' or '('" );
                auto lhs = equiv();
                if ( !_ts.accept( ftoken::kind::word, "U" ) )
                    _ts.fail( "expected U" );
                auto rhs = equiv();
                _ts.expect( square ? ftoken::kind::rbrack : ftoken::kind::close, square ? "']'" : "')'" );
                return make_ctl( t.text == "E" ? ctl_op::eu : ctl_op::au, { lhs, rhs } );
            }
        }
        return atom();
    }

    ctl atom()
    {
        const auto t = _ts.next();
        switch ( t.k )
        {
        case ftoken::kind::pred:
            if ( t.text.find_first_not_of( " \t\r\n" ) == std::string::npos )
                _ts.fail( "empty predicate" );
            return make_ctl( ctl_op::prop, {}, t.text );
        case ftoken::kind::open:
        {
            auto f = equiv();
            _ts.expect( ftoken::kind::close, "')'" );
            return f;
        }
        case ftoken::kind::word:
            if ( t.text == "true" || t.text == "TRUE" )
                return make_ctl( ctl_op::true_ );
            if ( t.text == "false" || t.text == "FALSE" )
                return make_ctl( ctl_op::false_ );
            break;
        default: break;
        }
        _ts.fail( "expected a formula" );
    }
};

const char* op_name( ctl_op op )
{
    switch ( op )
    {
    case ctl_op::not_: return "not";
    case ctl_op::ex: return "EX";
    case ctl_op::ax: return "AX";
    case ctl_op::ef: return "EF";
    case ctl_op::af: return "AF";
    case ctl_op::eg: return "EG";
    case ctl_op::ag: return "AG";
    case ctl_op::and_: return " & ";
    case ctl_op::or_: return " or ";
    case ctl_op::implies: return " => ";
    case ctl_op::equiv: return " <=> ";
    default: return "?";
    }
}

// Successor and predecessor lists of the non-root graph, deadlocks stuttering.
struct graph
{
    std::vector< std::vector< std::size_t > > succ;
    std::vector< std::vector< std::size_t > > pred;
};

graph make_graph( const state_space& space )
{
    graph g;
    const auto n = space.node_count();
    g.succ.resize( n );
    g.pred.resize( n );
    for ( std::size_t i = 1; i < n; ++i )
    {
        for ( const auto e : space.out_edges( i ) )
            g.succ[ i ].push_back( space.edge( e ).target );
        if ( g.succ[ i ].empty() )
            g.succ[ i ].push_back( i );
        for ( const auto t : g.succ[ i ] )
            g.pred[ t ].push_back( i );
    }
    return g;
}

class labeler
{
public:
    labeler( const state_space& space ) : _space{ space }, _g{ make_graph( space ) } {}

    std::vector< char > label( const ctl& f )
    {
        const auto n = _space.node_count();
        std::vector< char > out( n, 0 );
        auto each = [ & ]( auto fn )
        {
            for ( std::size_t i = 1; i < n; ++i )
                out[ i ] = fn( i );
        };
        switch ( f->op )
        {
        case ctl_op::prop:
        {
            const auto& m = _space.model();
            const auto code = m.compile( m.parse_predicate( f->text ) );
            each( [ & ]( std::size_t i ) { return code.test( _space.node( i ).values ); } );
            return out;
        }
        case ctl_op::true_: each( []( std::size_t ) { return true; } ); return out;
        case ctl_op::false_: return out;
        case ctl_op::not_:
        {
            const auto a = label( f->args[ 0 ] );
            each( [ & ]( std::size_t i ) { return !a[ i ]; } );
            return out;
        }
        case ctl_op::and_:
        case ctl_op::or_:
        case ctl_op::implies:
        case ctl_op::equiv:
        {
            const auto a = label( f->args[ 0 ] );
            const auto b = label( f->args[ 1 ] );
            each(
                    [ & ]( std::size_t i )
                    {
                        switch ( f->op )
                        {
                        case ctl_op::and_: return a[ i ] && b[ i ];
                        case ctl_op::or_: return a[ i ] || b[ i ];
                        case ctl_op::implies: return !a[ i ] || b[ i ];
                        default: return a[ i ] == b[ i ];
                        }
                    } );
            return out;
        }
        case ctl_op::ex:
        case ctl_op::ax:
        {
            const auto a = label( f->args[ 0 ] );
            const bool all = f->op == ctl_op::ax;
            each(
                    [ & ]( std::size_t i )
                    {
                        for ( const auto t : _g.succ[ i ] )
                            if ( static_cast< bool >( a[ t ] ) != all )
                                return !all;
                        return all;
                    } );
            return out;
        }
        case ctl_op::ef: return exists_until( all_true(), label( f->args[ 0 ] ) );
        case ctl_op::eu: return exists_until( label( f->args[ 0 ] ), label( f->args[ 1 ] ) );
        case ctl_op::af: return always_until( all_true(), label( f->args[ 0 ] ) );
        case ctl_op::au: return always_until( label( f->args[ 0 ] ), label( f->args[ 1 ] ) );
        case ctl_op::eg: return exists_globally( label( f->args[ 0 ] ) );
        case ctl_op::ag:
        {
            auto neg = label( f->args[ 0 ] );
            for ( std::size_t i = 1; i < n; ++i )
                neg[ i ] = !neg[ i ];
            const auto ef = exists_until( all_true(), neg );
            each( [ & ]( std::size_t i ) { return !ef[ i ]; } );
            return out;
        }
        }
        return out;
    }

private:
    const state_space& _space;
    graph _g;

    std::vector< char > all_true() const
    {
        std::vector< char > v( _space.node_count(), 1 );
        v[ state_space::root ] = 0;
        return v;
    }

    std::vector< char > exists_until( const std::vector< char >& a, const std::vector< char >& b ) const
    {
        auto z = b;
        std::deque< std::size_t > work;
        for ( std::size_t i = 1; i < z.size(); ++i )
            if ( z[ i ] )
                work.push_back( i );
        while ( !work.empty() )
        {
            const auto v = work.front();
            work.pop_front();
            for ( const auto p : _g.pred[ v ] )
            {
                if ( !z[ p ] && a[ p ] )
                {
                    z[ p ] = 1;
                    work.push_back( p );
                }
            }
        }
        return z;
    }

    std::vector< char > always_until( const std::vector< char >& a, const std::vector< char >& b ) const
    {
        auto z = b;
        std::vector< std::size_t > pending( z.size(), 0 );
        for ( std::size_t i = 1; i < z.size(); ++i )
            pending[ i ] = _g.succ[ i ].size();
        std::deque< std::size_t > work;
        for ( std::size_t i = 1; i < z.size(); ++i )
            if ( z[ i ] )
                work.push_back( i );
        while ( !work.empty() )
        {
            const auto v = work.front();
            work.pop_front();
            for ( const auto p : _g.pred[ v ] )
            {
                if ( z[ p ] )
                    continue;
                if ( --pending[ p ] == 0 && a[ p ] )
                {
                    z[ p ] = 1;
                    work.push_back( p );
                }
            }
        }
        return z;
    }

    std::vector< char > exists_globally( const std::vector< char >& a ) const
    {
        auto z = a;
        std::vector< std::size_t > alive( z.size(), 0 );
        std::deque< std::size_t > work;
        for ( std::size_t i = 1; i < z.size(); ++i )
        {
            if ( !z[ i ] )
                continue;
            for ( const auto t : _g.succ[ i ] )
                alive[ i ] += z[ t ] ? 1 : 0;
            if ( alive[ i ] == 0 )
                work.push_back( i );
        }
        while ( !work.empty() )
        {
            const auto v = work.front();
            work.pop_front();
            if ( !z[ v ] )
                continue;
            z[ v ] = 0;
            for ( const auto p : _g.pred[ v ] )
                if ( z[ p ] && --alive[ p ] == 0 )
                    work.push_back( p );
        }
        return z;
    }
};

// Shortest path from the root to a node where `target` holds.
std::optional< path > witness( const state_space& space, const std::vector< char >& target )
{
    constexpr auto none = std::numeric_limits< std::size_t >::max();
    std::vector< std::size_t > parent( space.node_count(), none );
    std::vector< char > seen( space.node_count(), 0 );
    std::deque< std::size_t > queue{ state_space::root };
    seen[ state_space::root ] = 1;
    while ( !queue.empty() )
    {
        const auto v = queue.front();
        queue.pop_front();
        if ( v != state_space::root && target[ v ] )
            return path_to( space, parent, v );
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
    return std::nullopt;
}

} // namespace

ctl parse_ctl( std::string_view text )
{
    return ctl_parser{ text }.run();
}

std::string to_string( const ctl& f )
{
    switch ( f->op )
    {
    case ctl_op::prop: return "{" + f->text + "}";
    case ctl_op::true_: return "true";
    case ctl_op::false_: return "false";
    case ctl_op::eu:
    case ctl_op::au:
        return std::string( f->op == ctl_op::eu ? "E[" : "A[" ) + to_string( f->args[ 0 ] ) + " U "
             + to_string( f->args[ 1 ] ) + "]";
    case ctl_op::and_:
    case ctl_op::or_:
    case ctl_op::implies:
    case ctl_op::equiv:
        return "(" + to_string( f->args[ 0 ] ) + op_name( f->op ) + to_string( f->args[ 1 ] ) + ")";
    default: return std::string( op_name( f->op ) ) + "(" + to_string( f->args[ 0 ] ) + ")";
    }
}

std::vector< char > label_ctl( const state_space& space, const ctl& f )
{
    return labeler{ space }.label( f );
}

verdict check_ctl( model_context& ctx, const ctl& f, bool expect_holds )
{
    auto& space = ctx.space;
    bool holds = true;
    std::optional< path > evidence;
    try
    {
        space.explore();
        const auto sat = label_ctl( space, f );
        for ( const auto e : space.out_edges( state_space::root ) )
            holds = holds && sat[ space.edge( e ).target ];
        if ( f->op == ctl_op::ef && holds )
            evidence = witness( space, label_ctl( space, f->args[ 0 ] ) );
        else if ( f->op == ctl_op::ag && !holds )
        {
            auto bad = label_ctl( space, f->args[ 0 ] );
            for ( auto& b : bad )
                b = !b;
            evidence = witness( space, bad );
        }
        else if ( !holds )
        {
            auto bad = sat;
            for ( auto& b : bad )
                b = !b;
            std::vector< char > initial( space.node_count(), 0 );
            for ( const auto e : space.out_edges( state_space::root ) )
                initial[ space.edge( e ).target ] = bad[ space.edge( e ).target ];
            evidence = witness( space, initial );
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
    ctx.observe_space();

    verdict v = holds == expect_holds
                      ? verdict::success( holds ? "property holds" : "property fails as expected" )
                      : verdict::fail( holds ? "property holds but was expected to fail" : "property fails" );
    if ( evidence )
    {
        v.message += ": " + path_string( *ctx.model, *evidence );
        v.trace = evidence;
        ctx.current_trace = evidence;
    }
    return v;
}

} // namespace vove
