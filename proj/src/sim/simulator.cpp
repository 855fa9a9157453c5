#include "vove/sim/simulator.hpp"

#include "vove/model/diagnostic.hpp"
#include "vove/util/text.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <random>

namespace vove
{

namespace
{

std::uint64_t splitmix64( std::uint64_t x )
{
    x += 0x9E3779B97F4A7C15ULL;
    x = ( x ^ ( x >> 30 ) ) * 0xBF58476D1CE4E5B9ULL;
    x = ( x ^ ( x >> 27 ) ) * 0x94D049BB133111EBULL;
    return x ^ ( x >> 31 );
}

struct fnv
{
    std::uint64_t h = 0xCBF29CE484222325ULL;

    void bytes( const void* p, std::size_t n )
    {
        const auto* b = static_cast< const unsigned char* >( p );
        for ( std::size_t i = 0; i < n; ++i )
        {
            h ^= b[ i ];
            h *= 0x100000001B3ULL;
        }
    }

    template< typename T >
    void add( T v )
    {
        // Fixed little-endian encoding so digests agree across platforms.
        const auto u = static_cast< std::uint64_t >( v );
        unsigned char b[ 8 ];
        for ( int i = 0; i < 8; ++i )
            b[ i ] = static_cast< unsigned char >( u >> ( 8 * i ) );
        bytes( b, 8 );
    }

    [[nodiscard]] std::string hex() const
    {
        char buf[ 17 ];
        std::snprintf( buf, sizeof buf, "%016llx", static_cast< unsigned long long >( h ) );
        return buf;
    }
};

std::int64_t parse_amount( const std::string& text, const std::string& what )
{
    std::size_t used = 0;
    long long v = 0;
    try
    {
        v = std::stoll( text, &used );
    }
    catch ( const std::exception& )
    {
        used = 0;
    }
    if ( used == 0 || used != text.size() || v < 0 )
        throw std::invalid_argument( what + " needs a non-negative integer, got '" + text + "'" );
    return v;
}

} // namespace

condition condition::parse( std::string_view text )
{
    const auto g = angle_group( text );
    if ( !g )
        throw std::invalid_argument( "expected <KIND, value>, got '" + std::string( text ) + "'" );
    condition c;
    const auto& [ kind, rest ] = *g;
    if ( kind == "PRED" )
    {
        c.k = kind::pred;
        c.predicate = rest;
        if ( rest.empty() )
            throw std::invalid_argument( "PRED needs a predicate" );
    }
    else if ( kind == "TIME" )
    {
        c.k = kind::time;
        c.amount = parse_amount( rest, "TIME" );
    }
    else if ( kind == "STEPS" )
    {
        c.k = kind::steps;
        c.amount = parse_amount( rest, "STEPS" );
    }
    else
        throw std::invalid_argument( "unknown condition '" + kind + "'" );
    return c;
}

std::string to_string( const condition& c )
{
    switch ( c.k )
    {
    case condition::kind::pred: return "<PRED, " + c.predicate + ">";
    case condition::kind::time: return "<TIME, " + std::to_string( c.amount ) + ">";
    case condition::kind::steps: return "<STEPS, " + std::to_string( c.amount ) + ">";
    }
    return "";
}

std::uint64_t run_seed( std::uint64_t master, std::uint64_t index ) { return splitmix64( splitmix64( master ) ^ index ); }

simulator::simulator( std::shared_ptr< const machine > m, sim_config cfg )
        : _machine{ std::move( m ) }, _config{ std::move( cfg ) }
{
    const auto& acts = _config.activations;
    auto index_of = [ & ]( const std::string& id )
    {
        for ( std::size_t i = 0; i < acts.size(); ++i )
            if ( acts[ i ].id == id )
                return static_cast< int >( i );
        throw sim_error( sim_error::kind::unknown_activation, "unknown activation '" + id + "'" );
    };

    for ( const auto& a : acts )
    {
        node n;
        n.choice = a.choice;
        n.after = a.after;
        for ( const auto& t : a.activating )
            n.activating.push_back( index_of( t ) );
        if ( a.choice )
        {
            int scale = 0;
            for ( const auto& [ t, p ] : a.choose )
                scale = std::max( scale, p.scale );
            for ( const auto& [ t, p ] : a.choose )
            {
                std::uint64_t w = p.digits;
                for ( int s = p.scale; s < scale; ++s )
                    w *= 10;
                if ( n.total > std::numeric_limits< std::uint64_t >::max() - w )
                    throw sim_error( sim_error::kind::syntax, "probabilities of '" + a.id + "' are too precise" );
                n.total += w;
                n.choose.emplace_back( index_of( t ), n.total );
            }
        }
        else if ( a.execute == initialise_machine )
            n.init = true;
        else
        {
            const auto op = _machine->find_operation( a.execute );
            if ( !op )
                throw sim_error( sim_error::kind::unknown_operation, "unknown operation '" + a.execute + "'" );
            n.op = *op;
            n.has_params = !_machine->operations[ static_cast< std::size_t >( *op ) ].params.empty();
        }
        _nodes.push_back( std::move( n ) );
    }
    _init = index_of( std::string( initialise_machine ) );
    _initial = initial_states( *_machine );
    fnv h;
    const auto text = to_json( _config );
    h.bytes( text.data(), text.size() );
    _digest = h.hex();
}

// Scheduler state of a single run.
class sim_run
{
public:
    sim_run( const simulator& s, std::uint64_t seed ) : _s{ s }, _rng{ seed } {}

    // Sink: on_start(time, state), on_event(time, label, pre-or-null, post).
    // Returns false when the queue empties before the end condition.
    template< typename Sink >
    bool run( const program* start, const condition& end, Sink& sink )
    {
        const auto& m = *_s._machine;
        bool started = start == nullptr;
        std::int64_t t0 = 0;
        std::int64_t recorded = 0;
        std::size_t unstarted_firings = 0;
        bool initialised = false;
        state cur;
        state next;
        if ( started )
            sink.on_start( 0, nullptr );
        activate( _s._init, 0 );

        for ( ;; )
        {
            if ( started && initialised && end.k == condition::kind::steps && recorded >= end.amount )
                return true;
            if ( _queue.empty() )
                return false;
            const auto top = _queue.front();
            if ( started && end.k == condition::kind::time && top.due - t0 > end.amount )
                return true;
            std::pop_heap( _queue.begin(), _queue.end(), later );
            _queue.pop_back();
            _now = top.due;
            const auto& n = _s._nodes[ static_cast< std::size_t >( top.node ) ];

            event label;
            if ( n.init )
            {
                if ( initialised )
                    continue;
                cur = _s._initial.size() == 1 ? _s._initial[ 0 ] : _s._initial[ draw( _s._initial.size() ) ];
                initialised = true;
                if ( started )
                    sink.on_event( _now - t0, label, nullptr, cur );
            }
            else
            {
                if ( !initialised )
                    continue;
                label.op = n.op;
                if ( n.has_params )
                {
                    std::vector< event > options;
                    for ( auto& e : enabled_events( m, cur ) )
                        if ( e.op == n.op )
                            options.push_back( std::move( e ) );
                    if ( options.empty() )
                        continue;
                    label = options[ options.size() == 1 ? 0 : draw( options.size() ) ];
                }
                else if ( !m.operations[ static_cast< std::size_t >( n.op ) ].guard_code.test( cur.values ) )
                    continue;
                apply_unchecked( m, cur, label, next );
                if ( started )
                {
                    sink.on_event( _now - t0, label, &cur, next );
                    ++recorded;
                }
                std::swap( cur, next );
            }
            for ( const int t : n.activating )
                activate( t, 0 );

            if ( !started )
            {
                if ( start->test( cur.values ) )
                {
                    started = true;
                    t0 = _now;
                    sink.on_start( 0, &cur );
                }
                else if ( ++unstarted_firings > 1000000 )
                    return false;
            }
        }
    }

private:
    struct pending
    {
        std::int64_t due;
        std::uint64_t seq;
        int node;
    };

    static bool later( const pending& a, const pending& b )
    {
        return a.due != b.due ? a.due > b.due : a.seq > b.seq;
    }

    const simulator& _s;
    std::mt19937_64 _rng;
    std::vector< pending > _queue;
    std::uint64_t _seq = 0;
    std::int64_t _now = 0;

    std::size_t draw( std::uint64_t bound )
    {
        const auto limit = std::numeric_limits< std::uint64_t >::max()
                           - std::numeric_limits< std::uint64_t >::max() % bound;
        std::uint64_t x = _rng();
        while ( x >= limit )
            x = _rng();
        return static_cast< std::size_t >( x % bound );
    }

    void activate( int id, int depth )
    {
        const auto& n = _s._nodes[ static_cast< std::size_t >( id ) ];
        if ( n.choice )
        {
            if ( depth > 10000 )
                throw sim_error( sim_error::kind::syntax, "choice activations form a cycle" );
            const auto x = draw( n.total );
            for ( const auto& [ target, cum ] : n.choose )
                if ( x < cum )
                {
                    activate( target, depth + 1 );
                    return;
                }
            return;
        }
        _queue.push_back( { _now + n.after, _seq++, id } );
        std::push_heap( _queue.begin(), _queue.end(), later );
    }
};

timed_trace simulator::simulate( std::uint64_t seed, const condition& stop ) const
{
    struct sink
    {
        timed_trace& out;
        void on_start( std::int64_t, const state* ) {}
        void on_event( std::int64_t t, const event& e, const state*, const state& post )
        {
            out.events.push_back( { t, e, post } );
        }
    };
    timed_trace t;
    sink s{ t };
    sim_run r{ *this, seed };
    t.stalled = !r.run( nullptr, stop, s );
    return t;
}

run_set simulator::monte_carlo( std::size_t runs, const condition& start, const condition& end,
                                std::uint64_t master_seed ) const
{
    const auto& m = *_machine;
    const auto ops = m.operations.size();
    std::vector< const program* > guards;
    std::vector< char > has_params;
    for ( const auto& op : m.operations )
    {
        guards.push_back( &op.guard_code );
        has_params.push_back( !op.params.empty() );
    }

    run_set rs;
    rs.width = m.variables.size();
    rs.enabled.assign( ops, 0 );
    rs.executed.assign( ops, 0 );
    rs.config_digest = _digest;
    rs.runs.reserve( runs );

    std::optional< program > start_code;
    if ( start.k == condition::kind::pred )
        start_code = m.compile( m.parse_predicate( start.predicate ) );
    else if ( start.amount != 0 )
        throw std::invalid_argument( "start condition must be a predicate" );
    const program always = m.compile( make_bool( true ) );

    struct sink
    {
        run_set& rs;
        run_record& rec;
        const std::vector< const program* >& guards;
        const std::vector< char >& has_params;
        const machine& m;

        void on_start( std::int64_t, const state* s )
        {
            rec.started = true;
            rec.first_state = rs.width ? rs.states.size() / rs.width : 0;
            if ( s )
                rs.states.insert( rs.states.end(), s->values.begin(), s->values.end() );
        }

        void on_event( std::int64_t t, const event& e, const state* pre, const state& post )
        {
            rs.times.push_back( t );
            rs.events.push_back( e );
            rs.states.insert( rs.states.end(), post.values.begin(), post.values.end() );
            ++rec.event_count;
            if ( !pre )
                return;
            ++rs.executed[ static_cast< std::size_t >( e.op ) ];
            for ( std::size_t i = 0; i < guards.size(); ++i )
                if ( has_params[ i ] ? is_enabled( m, *pre, static_cast< int >( i ) ) : guards[ i ]->test( pre->values ) )
                    ++rs.enabled[ i ];
        }
    };

    for ( std::size_t i = 0; i < runs; ++i )
    {
        run_record rec;
        rec.seed = run_seed( master_seed, i );
        rec.first_event = rs.events.size();
        sink s{ rs, rec, guards, has_params, m };
        sim_run r{ *this, rec.seed };
        const bool finished = r.run( start_code ? &*start_code : &always, end, s );
        rec.stalled = !finished;
        rs.runs.push_back( rec );
    }
    return rs;
}

std::size_t count_eventually( const machine& m, const run_set& rs, const std::string& predicate )
{
    const auto p = m.compile( m.parse_predicate( predicate ) );
    std::size_t k = 0;
    for ( const auto& r : rs.runs )
    {
        if ( !r.started )
            continue;
        for ( std::size_t i = 0; i <= r.event_count; ++i )
            if ( p.test( rs.state_at( r.first_state + i ) ) )
            {
                ++k;
                break;
            }
    }
    return k;
}

std::map< std::pair< std::string, std::string >, std::uint64_t > simulation_statistics( const machine& m,
                                                                                       const run_set& rs )
{
    std::map< std::pair< std::string, std::string >, std::uint64_t > out;
    for ( std::size_t i = 0; i < m.operations.size(); ++i )
    {
        const auto& name = m.operations[ i ].name;
        out[ { "enabled", name } ] = i < rs.enabled.size() ? rs.enabled[ i ] : 0;
        out[ { "executed", name } ] = i < rs.executed.size() ? rs.executed[ i ] : 0;
    }
    return out;
}

std::string runs_csv( const machine& m, const run_set& rs )
{
    std::string out = "run,time,op\n";
    for ( std::size_t r = 0; r < rs.runs.size(); ++r )
    {
        const auto& rec = rs.runs[ r ];
        for ( std::size_t i = 0; i < rec.event_count; ++i )
        {
            const auto k = rec.first_event + i;
            out += std::to_string( r ) + "," + std::to_string( rs.times[ k ] ) + "," + event_name( m, rs.events[ k ] )
                   + "\n";
        }
    }
    return out;
}

std::string digest( const run_set& rs )
{
    fnv h;
    h.bytes( rs.config_digest.data(), rs.config_digest.size() );
    h.add( rs.runs.size() );
    for ( const auto& r : rs.runs )
    {
        h.add( r.seed );
        h.add( r.started );
        h.add( r.stalled );
        h.add( r.event_count );
        for ( std::size_t i = 0; i < r.event_count; ++i )
        {
            const auto k = r.first_event + i;
            h.add( rs.times[ k ] );
            h.add( rs.events[ k ].op );
            for ( const auto a : rs.events[ k ].args )
                h.add( a );
        }
        if ( r.started )
            for ( std::size_t i = 0; i <= r.event_count; ++i )
                for ( const auto v : rs.state_at( r.first_state + i ) )
                    h.add( v );
    }
    return h.hex();
}

} // namespace vove
