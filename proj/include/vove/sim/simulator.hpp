#pragma once

#include "vove/model/semantics.hpp"
#include "vove/sim/config.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vove
{

// <PRED, p>, <TIME, ms> or <STEPS, n>.
struct condition
{
    enum class kind
    {
        pred,
        time,
        steps
    };

    kind k = kind::pred;
    std::string predicate;
    std::int64_t amount = 0;

    static condition parse( std::string_view text );
};

std::string to_string( const condition& c );

struct timed_event
{
    std::int64_t time = 0;
    event label;
    state post;
};

struct timed_trace
{
    std::vector< timed_event > events;
    bool stalled = false;
};

struct run_record
{
    std::uint64_t seed = 0;
    bool started = false;
    bool stalled = false;
    std::size_t first_event = 0;  // into run_set::times / events
    std::size_t event_count = 0;
    std::size_t first_state = 0;  // start state, then one post state per event
};

// Monte Carlo results in flat storage. Times are relative to the instant the
// start condition first held.
struct run_set
{
    std::size_t width = 0;
    std::vector< run_record > runs;
    std::vector< std::int64_t > times;
    std::vector< event > events;
    std::vector< value_t > states;
    std::vector< std::uint64_t > enabled;   // by operation index
    std::vector< std::uint64_t > executed;  // by operation index
    std::string config_digest;

    [[nodiscard]] std::span< const value_t > state_at( std::size_t index ) const
    {
        return { states.data() + index * width, width };
    }
};

std::uint64_t run_seed( std::uint64_t master, std::uint64_t index );

class simulator
{
public:
    simulator( std::shared_ptr< const machine > m, sim_config cfg );

    [[nodiscard]] const machine& model() const { return *_machine; }
    [[nodiscard]] const sim_config& config() const { return _config; }

    // One run from before initialisation; the INITIALISATION event is included.
    [[nodiscard]] timed_trace simulate( std::uint64_t seed, const condition& stop ) const;

    [[nodiscard]] run_set monte_carlo( std::size_t runs, const condition& start, const condition& end,
                                       std::uint64_t master_seed ) const;

private:
    struct node
    {
        bool choice = false;
        bool init = false;
        int op = -1;
        bool has_params = false;
        std::int64_t after = 0;
        std::vector< int > activating;
        std::vector< std::pair< int, std::uint64_t > > choose;  // target, cumulative weight
        std::uint64_t total = 0;
    };

    std::shared_ptr< const machine > _machine;
    sim_config _config;
    std::vector< node > _nodes;
    int _init = -1;
    std::vector< state > _initial;
    std::string _digest;

    friend class sim_run;
};

// Number of runs in which `predicate` holds in the start state or after some
// recorded event.
std::size_t count_eventually( const machine& m, const run_set& rs, const std::string& predicate );

// (kind, operation) -> count with kind "enabled" or "executed".
std::map< std::pair< std::string, std::string >, std::uint64_t > simulation_statistics( const machine& m,
                                                                                       const run_set& rs );

// "run,time,op" rows.
std::string runs_csv( const machine& m, const run_set& rs );

// Hex digest of every run's seed, events, times and states.
std::string digest( const run_set& rs );

} // namespace vove
