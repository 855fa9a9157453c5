#pragma once

#include "vove/space/state_space.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vove
{

struct path_step
{
    event label;
    state target;
};

// A concrete execution. Without an origin it starts at the root and its
// first step is an INITIALISATION.
struct path
{
    std::optional< state > origin;
    std::vector< path_step > steps;

    [[nodiscard]] const state* last() const
    {
        if ( !steps.empty() )
            return &steps.back().target;
        return origin ? &*origin : nullptr;
    }
};

struct trace_step
{
    event label;
    std::string post_text;  // empty when the step has no postcondition
    expr post;
};

struct trace
{
    std::optional< state > origin;
    std::vector< trace_step > steps;
};

// Everything the validation tasks know about one model.
struct model_context
{
    std::string name;
    std::shared_ptr< const machine > model;
    state_space space;
    std::optional< path > current_trace;
    std::vector< std::size_t > visit_counts;        // per operation
    std::vector< std::set< value_t > > value_sets;  // per variable

    model_context( std::string n, std::shared_ptr< const machine > m, std::size_t max_states );

    void observe( const state& s );
    void observe( const event& e );
    // Marks every known node and edge of the space as observed.
    void observe_space();
    void merge_from( const model_context& other );
};

class validation_session
{
public:
    explicit validation_session( std::size_t max_states = 100000 ) : _max_states{ max_states } {}

    [[nodiscard]] std::size_t max_states() const { return _max_states; }

    model_context& context( const std::string& name, const std::shared_ptr< const machine >& m );
    [[nodiscard]] const model_context* find( const std::string& name ) const;
    [[nodiscard]] const std::map< std::string, model_context >& contexts() const { return _contexts; }

    // Union of two sessions that were cloned from a common ancestor.
    void merge_from( const validation_session& other );

private:
    std::size_t _max_states;
    std::map< std::string, model_context > _contexts;
};

} // namespace vove
