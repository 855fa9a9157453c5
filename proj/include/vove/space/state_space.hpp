#pragma once

#include "vove/model/semantics.hpp"

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace vove
{

class limit_exceeded : public std::runtime_error
{
public:
    explicit limit_exceeded( std::size_t limit )
            : std::runtime_error( "state limit of " + std::to_string( limit ) + " exceeded" ), limit{ limit } {}
    std::size_t limit;
};

struct transition
{
    std::size_t source = 0;
    event label;
    std::size_t target = 0;
};

// Rooted transition graph grown on demand. Node 0 is the synthetic root; its
// out-edges are the INITIALISATION edges.
class state_space
{
public:
    static constexpr std::size_t root = 0;

    explicit state_space( std::shared_ptr< const machine > m, std::size_t max_states = 100000 );

    [[nodiscard]] const machine& model() const { return *_machine; }
    [[nodiscard]] const std::shared_ptr< const machine >& model_ptr() const { return _machine; }

    [[nodiscard]] std::size_t max_states() const { return _max_states; }
    void set_max_states( std::size_t n ) { _max_states = n; }

    [[nodiscard]] std::size_t node_count() const { return _nodes.size(); }
    [[nodiscard]] std::size_t edge_count() const { return _edges.size(); }
    [[nodiscard]] const state& node( std::size_t id ) const { return _nodes[ id ]; }
    [[nodiscard]] const transition& edge( std::size_t e ) const { return _edges[ e ]; }
    [[nodiscard]] std::optional< std::size_t > find( const state& s ) const;

    [[nodiscard]] bool expanded( std::size_t id ) const { return _expanded[ id ]; }
    [[nodiscard]] const std::vector< std::size_t >& out_edges( std::size_t id ) const { return _out[ id ]; }
    [[nodiscard]] bool complete() const { return _expanded_count == _nodes.size(); }
    [[nodiscard]] std::vector< std::size_t > frontier() const;

    // Computes the successors of `id` once. Throws limit_exceeded, leaving the
    // node unexpanded, when the new nodes would push the count over the limit.
    const std::vector< std::size_t >& expand( std::size_t id );

    // Breadth-first from the root until every reachable node is expanded.
    void explore();

    // Adds the nodes and expansions known to `other` (same machine).
    void absorb( const state_space& other );

    // Node ids in breadth-first discovery order over the known edges; stable
    // regardless of the order in which nodes were created.
    [[nodiscard]] std::vector< std::size_t > canonical_order() const;

private:
    std::shared_ptr< const machine > _machine;
    std::size_t _max_states;
    std::vector< state > _nodes;
    std::vector< bool > _expanded;
    std::vector< std::vector< std::size_t > > _out;
    std::vector< transition > _edges;
    std::unordered_map< state, std::size_t, state_hash > _index;
    std::size_t _expanded_count = 0;

    std::size_t add_node( const state& s );
};

} // namespace vove
