#include "vove/space/state_space.hpp"

#include <deque>

namespace vove
{

state_space::state_space( std::shared_ptr< const machine > m, std::size_t max_states )
        : _machine{ std::move( m ) }, _max_states{ max_states }
{
    _nodes.emplace_back();
    _expanded.push_back( false );
    _out.emplace_back();
}

std::optional< std::size_t > state_space::find( const state& s ) const
{
    const auto it = _index.find( s );
    if ( it == _index.end() )
        return std::nullopt;
    return it->second;
}

std::vector< std::size_t > state_space::frontier() const
{
    std::vector< std::size_t > out;
    for ( std::size_t i = 0; i < _nodes.size(); ++i )
        if ( !_expanded[ i ] )
            out.push_back( i );
    return out;
}

std::size_t state_space::add_node( const state& s )
{
    const auto [ it, fresh ] = _index.emplace( s, _nodes.size() );
    if ( fresh )
    {
        _nodes.push_back( s );
        _expanded.push_back( false );
        _out.emplace_back();
    }
    return it->second;
}

const std::vector< std::size_t >& state_space::expand( std::size_t id )
{
    if ( _expanded[ id ] )
        return _out[ id ];

    std::vector< std::pair< event, state > > succ;
    if ( id == root )
    {
        for ( auto& s : initial_states( *_machine ) )
            succ.emplace_back( event{}, std::move( s ) );
    }
    else
    {
        const auto src = _nodes[ id ];
        for ( auto& e : enabled_events( *_machine, src ) )
        {
            state next;
            apply_unchecked( *_machine, src, e, next );
            check_bounds( *_machine, next, event_name( *_machine, e ) );
            succ.emplace_back( std::move( e ), std::move( next ) );
        }
    }

    std::size_t fresh = 0;
    for ( std::size_t i = 0; i < succ.size(); ++i )
    {
        if ( _index.count( succ[ i ].second ) )
            continue;
        bool dup = false;
        for ( std::size_t j = 0; j < i && !dup; ++j )
            dup = succ[ j ].second == succ[ i ].second;
        if ( !dup )
            ++fresh;
    }
    if ( _nodes.size() + fresh > _max_states )
        throw limit_exceeded( _max_states );

    for ( auto& [ e, s ] : succ )
    {
        const auto target = add_node( s );
        _out[ id ].push_back( _edges.size() );
        _edges.push_back( { id, std::move( e ), target } );
    }
    _expanded[ id ] = true;
    ++_expanded_count;
    return _out[ id ];
}

void state_space::explore()
{
    std::vector< bool > seen( _nodes.size(), false );
    std::deque< std::size_t > queue{ root };
    seen[ root ] = true;
    while ( !queue.empty() )
    {
        const auto id = queue.front();
        queue.pop_front();
        for ( const auto e : expand( id ) )
        {
            const auto t = _edges[ e ].target;
            if ( t >= seen.size() )
                seen.resize( _nodes.size(), false );
            if ( !seen[ t ] )
            {
                seen[ t ] = true;
                queue.push_back( t );
            }
        }
    }
}

void state_space::absorb( const state_space& other )
{
    std::vector< std::size_t > map( other._nodes.size() );
    map[ root ] = root;
    for ( std::size_t i = 1; i < other._nodes.size(); ++i )
        map[ i ] = add_node( other._nodes[ i ] );
    for ( std::size_t i = 0; i < other._nodes.size(); ++i )
    {
        if ( !other._expanded[ i ] || _expanded[ map[ i ] ] )
            continue;
        const auto id = map[ i ];
        for ( const auto e : other._out[ i ] )
        {
            const auto& t = other._edges[ e ];
            _out[ id ].push_back( _edges.size() );
            _edges.push_back( { id, t.label, map[ t.target ] } );
        }
        _expanded[ id ] = true;
        ++_expanded_count;
    }
}

std::vector< std::size_t > state_space::canonical_order() const
{
    std::vector< std::size_t > order;
    std::vector< bool > seen( _nodes.size(), false );
    std::deque< std::size_t > queue{ root };
    seen[ root ] = true;
    while ( !queue.empty() )
    {
        const auto id = queue.front();
        queue.pop_front();
        order.push_back( id );
        for ( const auto e : _out[ id ] )
        {
            const auto t = _edges[ e ].target;
            if ( !seen[ t ] )
            {
                seen[ t ] = true;
                queue.push_back( t );
            }
        }
    }
    return order;
}

} // namespace vove
