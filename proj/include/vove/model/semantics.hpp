#pragma once

#include "vove/model/machine.hpp"

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vove
{

struct state
{
    std::vector< value_t > values;

    bool operator==( const state& ) const = default;
    auto operator<=>( const state& ) const = default;
};

struct state_hash
{
    std::size_t operator()( const state& s ) const noexcept
    {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ s.values.size();
        for ( auto v : s.values )
        {
            h ^= static_cast< std::uint32_t >( v );
            h *= 0x100000001B3ULL;
            h ^= h >> 29;
        }
        return static_cast< std::size_t >( h );
    }
};

// op == initialisation marks the edge out of the root node; stutter is the
// implicit self-loop that completes deadlocks for path semantics.
struct event
{
    static constexpr int initialisation = -1;
    static constexpr int stutter = -2;

    int op = initialisation;
    std::vector< value_t > args;

    bool operator==( const event& ) const = default;
    auto operator<=>( const event& ) const = default;
};

bool eval_pred( const program& p, const state& s, std::span< const value_t > bindings = {} );
bool eval_pred( const machine& m, const expr& resolved, const state& s, std::span< const value_t > bindings = {} );

std::vector< state > initial_states( const machine& m );
std::vector< event > enabled_events( const machine& m, const state& s );
bool is_enabled( const machine& m, const state& s, int op );
state apply_event( const machine& m, const state& s, const event& e );
// Throws TypeMismatch when a value leaves its declared range.
void check_bounds( const machine& m, const state& s, const std::string& context );
// Same as apply_event, without the guard check, writing into `out`.
void apply_unchecked( const machine& m, const state& s, const event& e, state& out );

std::string event_name( const machine& m, const event& e );            // Send_cmd(cmd_cars_r)
std::string event_call( const machine& m, const event& e );            // Send_cmd(cmd=cmd_cars_r)
std::string op_name( const machine& m, int op );                       // INITIALISATION for -1
std::string state_string( const machine& m, const state& s );          // (tl_cars=red, tl_peds=red)

// Parses `op`, `op(v1, v2)` or `op(p=v, ...)` against the machine.
event parse_event( const machine& m, std::string_view text );

} // namespace vove
