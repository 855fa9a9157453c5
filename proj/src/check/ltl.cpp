#include "vove/check/ltl.hpp"

#include "formula_lexer.hpp"

#include "vove/model/diagnostic.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace vove
{

ltl make_ltl( ltl_op op, std::vector< ltl > args, std::string text )
{
    auto n = std::make_shared< ltl_node >();
    n->op = op;
    n->args = std::move( args );
    n->text = std::move( text );
    return n;
}

bool is_past_op( ltl_op op )
{
    return op == ltl_op::yesterday || op == ltl_op::since || op == ltl_op::historically || op == ltl_op::once;
}

bool is_future_op( ltl_op op )
{
    switch ( op )
    {
    case ltl_op::next:
    case ltl_op::finally:
    case ltl_op::globally:
    case ltl_op::until:
    case ltl_op::weak_until:
    case ltl_op::release: return true;
    default: return false;
    }
}

namespace
{

using detail::ftoken;

class ltl_parser
{
    detail::ftoken_stream _ts;

public:
    explicit ltl_parser( std::string_view text ) : _ts{ text } {}

    ltl run()
    {
        auto f = equiv();
        if ( _ts.peek().k != ftoken::kind::end )
            _ts.fail( "unexpected input" );
        return f;
    }

private:
    ltl equiv()
    {
        auto l = implies();
        while ( _ts.accept( ftoken::kind::op, "<=>" ) )
            l = make_ltl( ltl_op::equiv, { l, implies() } );
        return l;
    }

    ltl implies()
    {
        auto l = disjunction();
        if ( _ts.accept( ftoken::kind::op, "=>" ) )
            return make_ltl( ltl_op::implies, { l, implies() } );
        return l;
    }

    ltl disjunction()
    {
        auto l = conjunction();
        while ( _ts.accept( ftoken::kind::op, "|" ) )
            l = make_ltl( ltl_op::or_, { l, conjunction() } );
        return l;
    }

    ltl conjunction()
    {
        auto l = binary();
        while ( _ts.accept( ftoken::kind::op, "&" ) )
            l = make_ltl( ltl_op::and_, { l, binary() } );
        return l;
    }

    ltl binary()
    {
        auto l = unary();
        const auto& t = _ts.peek();
        if ( t.k != ftoken::kind::word )
            return l;
        ltl_op op;
        if ( t.text == "U" )
            op = ltl_op::until;
        else if ( t.text == "W" )
            op = ltl_op::weak_until;
        else if ( t.text == "R" )
            op = ltl_op::release;
        else if ( t.text == "S" )
            op = ltl_op::since;
        else
            _ts.fail( "unknown operator '" + t.text + "'" );
        _ts.next();
        return make_ltl( op, { l, binary() } );
    }

    static bool unary_chain( const std::string& w )
    {
        return !w.empty() && w.find_first_not_of( "GFXYHO" ) == std::string::npos;
    }

    ltl unary()
    {
        if ( _ts.accept( ftoken::kind::op, "!" ) )
            return make_ltl( ltl_op::not_, { unary() } );
        const auto t = _ts.peek();
        if ( t.k == ftoken::kind::word && unary_chain( t.text ) )
        {
            _ts.next();
            auto f = unary();
            for ( auto it = t.text.rbegin(); it != t.text.rend(); ++it )
            {
                ltl_op op = ltl_op::next;
                switch ( *it )
                {
                case 'G': op = ltl_op::globally; break;
                case 'F': op = ltl_op::finally; break;
                case 'X': op = ltl_op::next; break;
                case 'Y': op = ltl_op::yesterday; break;
                case 'H': op = ltl_op::historically; break;
                case 'O': op = ltl_op::once; break;
                }
                f = make_ltl( op, { f } );
            }
            return f;
        }
        return atom();
    }

    ltl atom()
    {
        const auto t = _ts.next();
        switch ( t.k )
        {
        case ftoken::kind::pred:
            if ( t.text.find_first_not_of( " \t\r\n" ) == std::string::npos )
                _ts.fail( "empty predicate" );
            return make_ltl( ltl_op::prop, {}, t.text );
        case ftoken::kind::open:
        {
            auto f = equiv();
            _ts.expect( ftoken::kind::close, "')'" );
            return f;
        }
        case ftoken::kind::word:
            if ( t.text == "true" || t.text == "TRUE" )
                return make_ltl( ltl_op::true_ );
            if ( t.text == "false" || t.text == "FALSE" )
                return make_ltl( ltl_op::false_ );
            break;
        default: break;
        }
        _ts.fail( "expected a formula" );
    }
};

const char* unary_name( ltl_op op )
{
    switch ( op )
    {
    case ltl_op::next: return "X";
    case ltl_op::finally: return "F";
    case ltl_op::globally: return "G";
    case ltl_op::yesterday: return "Y";
    case ltl_op::historically: return "H";
    case ltl_op::once: return "O";
    case ltl_op::not_: return "not";
    default: return "?";
    }
}

const char* binary_name( ltl_op op )
{
    switch ( op )
    {
    case ltl_op::and_: return " & ";
    case ltl_op::or_: return " or ";
    case ltl_op::implies: return " => ";
    case ltl_op::equiv: return " <=> ";
    case ltl_op::until: return " U ";
    case ltl_op::weak_until: return " W ";
    case ltl_op::release: return " R ";
    case ltl_op::since: return " S ";
    default: return " ? ";
    }
}

bool pure_past( const ltl& f )
{
    if ( is_future_op( f->op ) )
        return false;
    return std::all_of( f->args.begin(), f->args.end(), pure_past );
}

// Maximal subformulas without future operators, evaluated per position by a
// deterministic monitor whose state is the truth vector of all their nodes.
class past_monitor
{
public:
    past_monitor( const machine& m, const ltl& f ) : _m{ m } { collect( f ); }

    [[nodiscard]] std::size_t width() const { return _nodes.size(); }
    [[nodiscard]] int letter( const ltl_node* n ) const { return _index.at( n ); }

    void step( const state& s, const std::vector< char >* prev, std::vector< char >& out ) const
    {
        out.assign( _nodes.size(), 0 );
        for ( std::size_t i = 0; i < _nodes.size(); ++i )
        {
            const auto* n = _nodes[ i ];
            const auto a = _kids[ i ][ 0 ];
            const auto b = _kids[ i ][ 1 ];
            char v = 0;
            switch ( n->op )
            {
            case ltl_op::prop: v = _progs[ i ].test( s.values ); break;
            case ltl_op::true_: v = 1; break;
            case ltl_op::false_: v = 0; break;
            case ltl_op::not_: v = !out[ a ]; break;
            case ltl_op::and_: v = out[ a ] && out[ b ]; break;
            case ltl_op::or_: v = out[ a ] || out[ b ]; break;
            case ltl_op::implies: v = !out[ a ] || out[ b ]; break;
            case ltl_op::equiv: v = out[ a ] == out[ b ]; break;
            case ltl_op::yesterday: v = prev && ( *prev )[ a ]; break;
            case ltl_op::since: v = out[ b ] || ( out[ a ] && prev && ( *prev )[ i ] ); break;
            case ltl_op::historically: v = out[ a ] && ( !prev || ( *prev )[ i ] ); break;
            case ltl_op::once: v = out[ a ] || ( prev && ( *prev )[ i ] ); break;
            default: break;
            }
            out[ i ] = v;
        }
    }

private:
    const machine& _m;
    std::vector< const ltl_node* > _nodes;
    std::vector< std::array< int, 2 > > _kids;
    std::vector< program > _progs;
    std::unordered_map< const ltl_node*, int > _index;

    void collect( const ltl& f )
    {
        if ( pure_past( f ) )
        {
            add( f );
            return;
        }
        if ( is_past_op( f->op ) )
            throw formula_error( "past operator applied to a future formula: " + to_string( f ) );
        for ( const auto& a : f->args )
            collect( a );
    }

    int add( const ltl& f )
    {
        if ( const auto it = _index.find( f.get() ); it != _index.end() )
            return it->second;
        std::array< int, 2 > kids{ -1, -1 };
        for ( std::size_t k = 0; k < f->args.size() && k < 2; ++k )
            kids[ k ] = add( f->args[ k ] );
        const auto id = static_cast< int >( _nodes.size() );
        _nodes.push_back( f.get() );
        _kids.push_back( kids );
        _progs.push_back( f->op == ltl_op::prop ? _m.compile( _m.parse_predicate( f->text ) ) : program{} );
        _index[ f.get() ] = id;
        return id;
    }
};

// Negation normal form over monitor letters, hash-consed.
struct nnf_node
{
    enum class kind
    {
        lit,
        tt,
        ff,
        and_,
        or_,
        next,
        until,
        release
    };

    kind k = kind::tt;
    int a = -1;
    int b = -1;
    int letter = -1;
    bool positive = true;

    auto operator<=>( const nnf_node& ) const = default;
};

class nnf_table
{
public:
    std::vector< nnf_node > nodes;

    int make( nnf_node n )
    {
        const auto [ it, fresh ] = _ids.emplace( n, static_cast< int >( nodes.size() ) );
        if ( fresh )
            nodes.push_back( n );
        return it->second;
    }

    int make( nnf_node::kind k, int a = -1, int b = -1 ) { return make( { k, a, b, -1, true } ); }

    [[nodiscard]] int find( const nnf_node& n ) const
    {
        const auto it = _ids.find( n );
        return it == _ids.end() ? -1 : it->second;
    }

    int convert( const ltl& f, bool neg, const past_monitor& mon )
    {
        using k = nnf_node::kind;
        if ( pure_past( f ) )
            return make( { k::lit, -1, -1, mon.letter( f.get() ), !neg } );
        const auto& x = f->args;
        switch ( f->op )
        {
        case ltl_op::not_: return convert( x[ 0 ], !neg, mon );
        case ltl_op::and_:
            return make( neg ? k::or_ : k::and_, convert( x[ 0 ], neg, mon ), convert( x[ 1 ], neg, mon ) );
        case ltl_op::or_:
            return make( neg ? k::and_ : k::or_, convert( x[ 0 ], neg, mon ), convert( x[ 1 ], neg, mon ) );
        case ltl_op::implies:
            return make( neg ? k::and_ : k::or_, convert( x[ 0 ], !neg, mon ), convert( x[ 1 ], neg, mon ) );
        case ltl_op::equiv:
        {
            const auto both = make( k::and_, convert( x[ 0 ], false, mon ), convert( x[ 1 ], neg, mon ) );
            const auto neither = make( k::and_, convert( x[ 0 ], true, mon ), convert( x[ 1 ], !neg, mon ) );
            return make( k::or_, both, neither );
        }
        case ltl_op::next: return make( k::next, convert( x[ 0 ], neg, mon ) );
        case ltl_op::finally:
            return neg ? make( k::release, make( k::ff ), convert( x[ 0 ], true, mon ) )
                       : make( k::until, make( k::tt ), convert( x[ 0 ], false, mon ) );
        case ltl_op::globally:
            return neg ? make( k::until, make( k::tt ), convert( x[ 0 ], true, mon ) )
                       : make( k::release, make( k::ff ), convert( x[ 0 ], false, mon ) );
        case ltl_op::until:
            return make( neg ? k::release : k::until, convert( x[ 0 ], neg, mon ), convert( x[ 1 ], neg, mon ) );
        case ltl_op::release:
            return make( neg ? k::until : k::release, convert( x[ 0 ], neg, mon ), convert( x[ 1 ], neg, mon ) );
        case ltl_op::weak_until:
        {
            // a W b == b R (a or b)
            const auto a = convert( x[ 0 ], neg, mon );
            const auto b = convert( x[ 1 ], neg, mon );
            if ( neg )
                return make( k::until, b, make( k::and_, a, b ) );
            return make( k::release, b, make( k::or_, a, b ) );
        }
        default: throw formula_error( "unsupported operator in " + to_string( f ) );
        }
    }

private:
    std::map< nnf_node, int > _ids;
};

// Generalized Büchi automaton built by the tableau construction of
// Gerth, Peled, Vardi and Wolper.
class tableau
{
public:
    struct node
    {
        std::set< int > incoming;  // -1 marks an initial node
        std::set< int > old;
        std::set< int > next;
    };

    std::vector< node > nodes;
    std::vector< std::vector< std::pair< int, bool > > > literals;
    std::vector< std::vector< int > > successors;
    std::vector< int > initial;
    std::vector< std::vector< char > > accepting;  // one set per until subformula

    tableau( nnf_table& t, int root ) : _t{ t }
    {
        expand( { -1 }, { root }, {}, {} );
        successors.resize( nodes.size() );
        literals.resize( nodes.size() );
        for ( std::size_t q = 0; q < nodes.size(); ++q )
        {
            for ( const auto p : nodes[ q ].incoming )
            {
                if ( p < 0 )
                    initial.push_back( static_cast< int >( q ) );
                else
                    successors[ static_cast< std::size_t >( p ) ].push_back( static_cast< int >( q ) );
            }
            for ( const auto f : nodes[ q ].old )
            {
                const auto& n = _t.nodes[ static_cast< std::size_t >( f ) ];
                if ( n.k == nnf_node::kind::lit )
                    literals[ q ].emplace_back( n.letter, n.positive );
            }
        }
        for ( std::size_t f = 0; f < _t.nodes.size(); ++f )
        {
            const auto& n = _t.nodes[ f ];
            if ( n.k != nnf_node::kind::until )
                continue;
            std::vector< char > set( nodes.size(), 0 );
            for ( std::size_t q = 0; q < nodes.size(); ++q )
                set[ q ] = !nodes[ q ].old.count( static_cast< int >( f ) ) || nodes[ q ].old.count( n.b );
            accepting.push_back( std::move( set ) );
        }
    }

private:
    nnf_table& _t;

    void expand( std::set< int > incoming, std::set< int > fresh, std::set< int > old, std::set< int > next )
    {
        using k = nnf_node::kind;
        if ( fresh.empty() )
        {
            for ( auto& q : nodes )
            {
                if ( q.old == old && q.next == next )
                {
                    q.incoming.insert( incoming.begin(), incoming.end() );
                    return;
                }
            }
            const auto id = static_cast< int >( nodes.size() );
            nodes.push_back( { std::move( incoming ), std::move( old ), next } );
            expand( { id }, std::move( next ), {}, {} );
            return;
        }
        const int eta = *fresh.begin();
        fresh.erase( fresh.begin() );
        if ( old.count( eta ) )
        {
            expand( std::move( incoming ), std::move( fresh ), std::move( old ), std::move( next ) );
            return;
        }
        const auto n = _t.nodes[ static_cast< std::size_t >( eta ) ];
        switch ( n.k )
        {
        case k::ff: return;
        case k::tt:
            old.insert( eta );
            expand( std::move( incoming ), std::move( fresh ), std::move( old ), std::move( next ) );
            return;
        case k::lit:
        {
            const auto opposite = _t.find( { k::lit, -1, -1, n.letter, !n.positive } );
            if ( opposite >= 0 && old.count( opposite ) )
                return;
            old.insert( eta );
            expand( std::move( incoming ), std::move( fresh ), std::move( old ), std::move( next ) );
            return;
        }
        case k::and_:
            old.insert( eta );
            fresh.insert( n.a );
            fresh.insert( n.b );
            expand( std::move( incoming ), std::move( fresh ), std::move( old ), std::move( next ) );
            return;
        case k::next:
            old.insert( eta );
            next.insert( n.a );
            expand( std::move( incoming ), std::move( fresh ), std::move( old ), std::move( next ) );
            return;
        case k::or_:
        case k::until:
        case k::release:
        {
            old.insert( eta );
            auto fresh1 = fresh;
            auto next1 = next;
            auto fresh2 = std::move( fresh );
            if ( n.k == k::or_ )
            {
                fresh1.insert( n.a );
                fresh2.insert( n.b );
            }
            else if ( n.k == k::until )
            {
                fresh1.insert( n.a );
                next1.insert( eta );
                fresh2.insert( n.b );
            }
            else
            {
                fresh1.insert( n.b );
                next1.insert( eta );
                fresh2.insert( n.a );
                fresh2.insert( n.b );
            }
            expand( incoming, std::move( fresh1 ), old, std::move( next1 ) );
            expand( std::move( incoming ), std::move( fresh2 ), std::move( old ), std::move( next ) );
            return;
        }
        }
    }
};

struct aug_graph
{
    std::vector< std::size_t > node;                           // state-space node
    std::vector< std::vector< char > > bits;                   // monitor vector
    std::vector< std::vector< std::pair< int, long > > > succ;  // (aug, edge or -1 for stutter)
    std::vector< std::pair< int, long > > initial;             // (aug, INITIALISATION edge)
};

aug_graph build_aug( const state_space& space, const past_monitor& mon, std::size_t limit )
{
    aug_graph g;
    std::map< std::pair< std::size_t, std::vector< char > >, int > ids;
    std::deque< int > queue;
    auto intern = [ & ]( std::size_t n, std::vector< char > v )
    {
        const auto [ it, fresh ] = ids.emplace( std::make_pair( n, v ), static_cast< int >( g.node.size() ) );
        if ( fresh )
        {
            if ( g.node.size() >= limit )
                throw limit_exceeded( limit );
            g.node.push_back( n );
            g.bits.push_back( std::move( v ) );
            g.succ.emplace_back();
            queue.push_back( it->second );
        }
        return it->second;
    };

    std::vector< char > v;
    for ( const auto e : space.out_edges( state_space::root ) )
    {
        const auto t = space.edge( e ).target;
        mon.step( space.node( t ), nullptr, v );
        g.initial.emplace_back( intern( t, v ), static_cast< long >( e ) );
    }
    while ( !queue.empty() )
    {
        const auto a = queue.front();
        queue.pop_front();
        const auto n = g.node[ static_cast< std::size_t >( a ) ];
        const auto& out = space.out_edges( n );
        std::vector< std::pair< int, long > > succ;
        if ( out.empty() )
        {
            const auto prev = g.bits[ static_cast< std::size_t >( a ) ];
            mon.step( space.node( n ), &prev, v );
            succ.emplace_back( intern( n, v ), -1 );
        }
        for ( const auto e : out )
        {
            const auto t = space.edge( e ).target;
            const auto prev = g.bits[ static_cast< std::size_t >( a ) ];
            mon.step( space.node( t ), &prev, v );
            succ.emplace_back( intern( t, v ), static_cast< long >( e ) );
        }
        g.succ[ static_cast< std::size_t >( a ) ] = std::move( succ );
    }
    return g;
}

struct product
{
    std::vector< int > aug;
    std::vector< int > q;
    std::vector< std::vector< std::pair< int, long > > > succ;
    std::vector< int > parent;        // -1 for initial states
    std::vector< long > parent_edge;  // model edge taken to reach the state
};

// Tarjan's algorithm without recursion; components in reverse topological order.
std::vector< std::vector< int > > strongly_connected( const product& p )
{
    const auto n = p.aug.size();
    std::vector< int > index( n, -1 ), low( n, 0 ), comp( n, -1 );
    std::vector< char > on_stack( n, 0 );
    std::vector< int > stack;
    std::vector< std::vector< int > > out;
    int counter = 0;
    std::vector< std::pair< int, std::size_t > > call;
    for ( std::size_t root = 0; root < n; ++root )
    {
        if ( index[ root ] >= 0 )
            continue;
        call.emplace_back( static_cast< int >( root ), 0 );
        while ( !call.empty() )
        {
            auto& [ v, i ] = call.back();
            const auto vu = static_cast< std::size_t >( v );
            if ( i == 0 && index[ vu ] < 0 )
            {
                index[ vu ] = low[ vu ] = counter++;
                stack.push_back( v );
                on_stack[ vu ] = 1;
            }
            if ( i < p.succ[ vu ].size() )
            {
                const auto w = static_cast< std::size_t >( p.succ[ vu ][ i ].first );
                ++i;
                if ( index[ w ] < 0 )
                    call.emplace_back( static_cast< int >( w ), 0 );
                else if ( on_stack[ w ] )
                    low[ vu ] = std::min( low[ vu ], index[ w ] );
                continue;
            }
            if ( low[ vu ] == index[ vu ] )
            {
                std::vector< int > c;
                int w;
                do
                {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[ static_cast< std::size_t >( w ) ] = 0;
                    c.push_back( w );
                } while ( w != v );
                out.push_back( std::move( c ) );
            }
            const auto done = v;
            call.pop_back();
            if ( !call.empty() )
            {
                const auto parent = static_cast< std::size_t >( call.back().first );
                low[ parent ] = std::min( low[ parent ], low[ static_cast< std::size_t >( done ) ] );
            }
        }
    }
    return out;
}

// Shortest path inside `allowed` from `from` to any state satisfying `goal`,
// taking at least `min_steps` steps; returns the visited states after `from`.
template < typename Goal >
std::vector< std::pair< int, long > > bfs_within( const product& p, const std::vector< char >& allowed, int from,
                                                  Goal goal, bool at_least_one )
{
    if ( !at_least_one && goal( from ) )
        return {};
    std::map< int, std::pair< int, long > > prev;
    std::deque< int > queue{ from };
    std::set< int > seen;
    if ( !at_least_one )
        seen.insert( from );
    while ( !queue.empty() )
    {
        const auto v = queue.front();
        queue.pop_front();
        for ( const auto& [ w, e ] : p.succ[ static_cast< std::size_t >( v ) ] )
        {
            if ( !allowed[ static_cast< std::size_t >( w ) ] || seen.count( w ) )
                continue;
            seen.insert( w );
            prev[ w ] = { v, e };
            if ( goal( w ) )
            {
                std::vector< std::pair< int, long > > out;
                int at = w;
                do
                {
                    const auto [ pv, pe ] = prev.at( at );
                    out.emplace_back( at, pe );
                    at = pv;
                } while ( at != from || out.size() == 0 );
                std::reverse( out.begin(), out.end() );
                return out;
            }
            queue.push_back( w );
        }
    }
    return {};
}

} // namespace

ltl parse_ltl( std::string_view text )
{
    return ltl_parser{ text }.run();
}

std::string to_string( const ltl& f )
{
    switch ( f->op )
    {
    case ltl_op::prop: return "{" + f->text + "}";
    case ltl_op::true_: return "true";
    case ltl_op::false_: return "false";
    case ltl_op::not_:
    case ltl_op::next:
    case ltl_op::finally:
    case ltl_op::globally:
    case ltl_op::yesterday:
    case ltl_op::historically:
    case ltl_op::once: return std::string( unary_name( f->op ) ) + "(" + to_string( f->args[ 0 ] ) + ")";
    default: return "(" + to_string( f->args[ 0 ] ) + binary_name( f->op ) + to_string( f->args[ 1 ] ) + ")";
    }
}

ltl_result model_check_ltl( model_context& ctx, const ltl& f )
{
    auto& space = ctx.space;
    space.explore();
    const auto& m = *ctx.model;
    const past_monitor mon{ m, f };
    nnf_table table;
    const auto root = table.convert( f, true, mon );
    const tableau gba{ table, root };
    const auto g = build_aug( space, mon, space.max_states() );

    auto accepts = [ & ]( int a, int q )
    {
        const auto& bits = g.bits[ static_cast< std::size_t >( a ) ];
        for ( const auto& [ letter, positive ] : gba.literals[ static_cast< std::size_t >( q ) ] )
            if ( static_cast< bool >( bits[ static_cast< std::size_t >( letter ) ] ) != positive )
                return false;
        return true;
    };

    product p;
    std::unordered_map< long long, int > ids;
    std::deque< int > queue;
    const auto nq = static_cast< long long >( gba.nodes.size() );
    auto intern = [ & ]( int a, int q, int parent, long edge )
    {
        const auto key = a * nq + q;
        const auto [ it, fresh ] = ids.emplace( key, static_cast< int >( p.aug.size() ) );
        if ( fresh )
        {
            p.aug.push_back( a );
            p.q.push_back( q );
            p.succ.emplace_back();
            p.parent.push_back( parent );
            p.parent_edge.push_back( edge );
            queue.push_back( it->second );
        }
        return it->second;
    };
    for ( const auto& [ a, e ] : g.initial )
        for ( const auto q : gba.initial )
            if ( accepts( a, q ) )
                intern( a, q, -1, e );
    while ( !queue.empty() )
    {
        const auto s = queue.front();
        queue.pop_front();
        const auto a = p.aug[ static_cast< std::size_t >( s ) ];
        const auto q = p.q[ static_cast< std::size_t >( s ) ];
        std::vector< std::pair< int, long > > succ;
        for ( const auto& [ a2, e ] : g.succ[ static_cast< std::size_t >( a ) ] )
            for ( const auto q2 : gba.successors[ static_cast< std::size_t >( q ) ] )
                if ( accepts( a2, q2 ) )
                    succ.emplace_back( intern( a2, q2, s, e ), e );
        p.succ[ static_cast< std::size_t >( s ) ] = std::move( succ );
    }

    const auto comps = strongly_connected( p );
    const std::vector< int >* best = nullptr;
    int best_entry = -1;
    for ( const auto& c : comps )
    {
        if ( c.size() == 1 )
        {
            const auto v = c[ 0 ];
            const auto& s = p.succ[ static_cast< std::size_t >( v ) ];
            if ( std::none_of( s.begin(), s.end(), [ & ]( const auto& x ) { return x.first == v; } ) )
                continue;
        }
        bool ok = true;
        for ( const auto& set : gba.accepting )
        {
            ok = std::any_of( c.begin(), c.end(),
                              [ & ]( int v ) { return set[ static_cast< std::size_t >( p.q[ static_cast< std::size_t >( v ) ] ) ]; } );
            if ( !ok )
                break;
        }
        if ( !ok )
            continue;
        const auto entry = *std::min_element( c.begin(), c.end() );
        if ( !best || entry < best_entry )
        {
            best = &c;
            best_entry = entry;
        }
    }

    ltl_result r;
    if ( !best )
        return r;
    r.holds = false;

    std::vector< char > in_comp( p.aug.size(), 0 );
    for ( const auto v : *best )
        in_comp[ static_cast< std::size_t >( v ) ] = 1;

    std::vector< std::pair< int, long > > prefix;
    for ( int v = best_entry; v >= 0; v = p.parent[ static_cast< std::size_t >( v ) ] )
        prefix.emplace_back( v, p.parent_edge[ static_cast< std::size_t >( v ) ] );
    std::reverse( prefix.begin(), prefix.end() );

    std::vector< std::pair< int, long > > cycle;
    int at = best_entry;
    for ( const auto& set : gba.accepting )
    {
        auto seg = bfs_within(
                p, in_comp, at,
                [ & ]( int v ) { return set[ static_cast< std::size_t >( p.q[ static_cast< std::size_t >( v ) ] ) ]; },
                false );
        if ( !seg.empty() )
            at = seg.back().first;
        cycle.insert( cycle.end(), seg.begin(), seg.end() );
    }
    auto back = bfs_within( p, in_comp, at, [ & ]( int v ) { return v == best_entry; }, true );
    cycle.insert( cycle.end(), back.begin(), back.end() );

    auto step_for = [ & ]( int v, long e )
    {
        const auto n = g.node[ static_cast< std::size_t >( p.aug[ static_cast< std::size_t >( v ) ] ) ];
        const event label = e < 0 ? event{ event::stutter, {} } : space.edge( static_cast< std::size_t >( e ) ).label;
        return path_step{ label, space.node( n ) };
    };
    for ( const auto& [ v, e ] : prefix )
        r.counterexample.steps.push_back( step_for( v, e ) );
    r.loop_start = r.counterexample.steps.size() - 1;
    for ( const auto& [ v, e ] : cycle )
        r.counterexample.steps.push_back( step_for( v, e ) );
    return r;
}

verdict check_ltl( model_context& ctx, const ltl& f, bool expect_holds )
{
    ltl_result r;
    try
    {
        r = model_check_ltl( ctx, f );
    }
    catch ( const limit_exceeded& e )
    {
        return verdict::error( e.what() );
    }
    catch ( const model_error& e )
    {
        return verdict::error( e.what() );
    }
    catch ( const formula_error& e )
    {
        return verdict::error( e.what() );
    }
    ctx.observe_space();

    verdict v;
    if ( r.holds )
    {
        v = expect_holds ? verdict::success( "property holds" )
                         : verdict::fail( "property holds but was expected to fail" );
        return v;
    }
    const auto cex = path_string( *ctx.model, r.counterexample );
    v = expect_holds ? verdict::fail( "counterexample: " + cex ) : verdict::success( "fails as expected: " + cex );
    v.trace = r.counterexample;
    v.loop_start = r.loop_start;
    ctx.current_trace = r.counterexample;
    return v;
}

} // namespace vove
