#include "vove/space/session.hpp"

#include <algorithm>

namespace vove
{

model_context::model_context( std::string n, std::shared_ptr< const machine > m, std::size_t max_states )
        : name{ std::move( n ) }, model{ m }, space{ m, max_states }, visit_counts( m->operations.size(), 0 ),
          value_sets( m->variables.size() )
{
}

void model_context::observe( const state& s )
{
    for ( std::size_t i = 0; i < s.values.size() && i < value_sets.size(); ++i )
        value_sets[ i ].insert( s.values[ i ] );
}

void model_context::observe( const event& e )
{
    if ( e.op >= 0 )
        ++visit_counts[ static_cast< std::size_t >( e.op ) ];
}

void model_context::observe_space()
{
    for ( std::size_t i = 1; i < space.node_count(); ++i )
        observe( space.node( i ) );
    for ( std::size_t e = 0; e < space.edge_count(); ++e )
    {
        const auto op = space.edge( e ).label.op;
        if ( op >= 0 && visit_counts[ static_cast< std::size_t >( op ) ] == 0 )
            visit_counts[ static_cast< std::size_t >( op ) ] = 1;
    }
}

void model_context::merge_from( const model_context& other )
{
    space.absorb( other.space );
    if ( other.current_trace )
        current_trace = other.current_trace;
    for ( std::size_t i = 0; i < visit_counts.size(); ++i )
        visit_counts[ i ] = std::max( visit_counts[ i ], other.visit_counts[ i ] );
    for ( std::size_t i = 0; i < value_sets.size(); ++i )
        value_sets[ i ].insert( other.value_sets[ i ].begin(), other.value_sets[ i ].end() );
}

model_context& validation_session::context( const std::string& name, const std::shared_ptr< const machine >& m )
{
    auto it = _contexts.find( name );
    if ( it == _contexts.end() )
        it = _contexts.emplace( name, model_context{ name, m, _max_states } ).first;
    return it->second;
}

const model_context* validation_session::find( const std::string& name ) const
{
    const auto it = _contexts.find( name );
    return it == _contexts.end() ? nullptr : &it->second;
}

void validation_session::merge_from( const validation_session& other )
{
    for ( const auto& [ name, ctx ] : other._contexts )
    {
        auto it = _contexts.find( name );
        if ( it == _contexts.end() )
            _contexts.emplace( name, ctx );
        else
            it->second.merge_from( ctx );
    }
}

} // namespace vove
