#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vove
{

class sim_error : public std::runtime_error
{
public:
    enum class kind
    {
        syntax,
        bad_probability_sum,
        unknown_activation,
        unknown_operation
    };

    sim_error( kind k, const std::string& msg ) : std::runtime_error( msg ), what_kind{ k } {}
    kind what_kind;
};

// A decimal probability held exactly as digits / 10^scale.
struct decimal
{
    std::uint64_t digits = 0;
    int scale = 0;

    static decimal parse( std::string_view text );
    [[nodiscard]] std::string str() const;
    [[nodiscard]] double value() const;
};

struct activation
{
    std::string id;
    bool choice = false;
    // direct
    std::string execute;
    std::int64_t after = 0;
    std::vector< std::string > activating;
    // choice: target id and probability, in file order
    std::vector< std::pair< std::string, decimal > > choose;
};

struct sim_config
{
    std::vector< activation > activations;

    [[nodiscard]] const activation* find( std::string_view id ) const;
};

inline constexpr std::string_view initialise_machine = "$initialise_machine";

sim_config parse_sim_config( std::string_view json_text );
sim_config load_sim_config( const std::string& file );

// Canonical JSON of the configuration (stable key order).
std::string to_json( const sim_config& c );

} // namespace vove
