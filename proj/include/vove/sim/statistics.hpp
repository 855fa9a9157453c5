#pragma once

#include "vove/check/verdict.hpp"
#include "vove/sim/simulator.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace vove
{

// P(X <= k) and P(X >= k) for X ~ Binomial(n, p).
double binomial_cdf( std::int64_t k, std::int64_t n, double p );
double binomial_sf( std::int64_t k, std::int64_t n, double p );

enum class tail
{
    left,
    right,
    two
};

tail parse_tail( std::string_view text );  // LEFT_TAILED, RIGHT_TAILED, TWO_TAILED
const char* to_string( tail t );

// (<start>, <end>, <EVENTUALLY, pred>, PROCEDURE, p0)
struct hypothesis
{
    condition start;
    condition end;
    std::string property;
    tail procedure = tail::left;
    double p0 = 0.5;
    std::string p0_text = "0.5";

    static hypothesis parse( std::string_view text );
};

std::string to_string( const hypothesis& h );

// Left: H is p >= p0, rejected iff P(X <= k) < alpha. Right mirrors it;
// two-tailed doubles the smaller tail.
verdict hypothesis_test( std::size_t k, std::size_t n, tail procedure, double p0, double alpha );

// Compares k/n with p0 under a tolerance delta.
verdict estimate_probability( std::size_t k, std::size_t n, tail procedure, double p0, double delta );

// Runs `n` simulations for `h` and applies the matching test.
verdict run_hypothesis_test( const simulator& sim, const hypothesis& h, std::size_t n, double alpha,
                             std::uint64_t seed );
verdict run_estimation( const simulator& sim, const hypothesis& h, std::size_t n, double delta, std::uint64_t seed );

} // namespace vove
