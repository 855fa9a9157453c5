#include "vove/sim/statistics.hpp"

#include "vove/model/diagnostic.hpp"
#include "vove/util/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace vove
{

namespace
{

// Binomial weights relative to the mode, normalised by their sum. Ratios of
// consecutive terms keep the relative error near machine precision.
std::vector< double > binomial_pmf( std::int64_t n, double p )
{
    std::vector< double > w( static_cast< std::size_t >( n ) + 1, 0.0 );
    if ( p <= 0 )
    {
        w[ 0 ] = 1;
        return w;
    }
    if ( p >= 1 )
    {
        w.back() = 1;
        return w;
    }
    const double q = 1 - p;
    auto mode = static_cast< std::int64_t >( std::floor( static_cast< double >( n + 1 ) * p ) );
    mode = std::min( mode, n );
    w[ static_cast< std::size_t >( mode ) ] = 1;
    for ( std::int64_t i = mode; i < n; ++i )
    {
        const double next = w[ static_cast< std::size_t >( i ) ] * static_cast< double >( n - i ) / static_cast< double >( i + 1 ) * p / q;
        if ( next < 1e-300 )
            break;
        w[ static_cast< std::size_t >( i + 1 ) ] = next;
    }
    for ( std::int64_t i = mode; i > 0; --i )
    {
        const double prev = w[ static_cast< std::size_t >( i ) ] * static_cast< double >( i ) / static_cast< double >( n - i + 1 ) * q / p;
        if ( prev < 1e-300 )
            break;
        w[ static_cast< std::size_t >( i - 1 ) ] = prev;
    }
    double total = 0;
    for ( const double x : w )
        total += x;
    for ( auto& x : w )
        x /= total;
    return w;
}

double sum_range( const std::vector< double >& w, std::int64_t lo, std::int64_t hi )
{
    // Smallest terms first.
    double s = 0;
    if ( lo > hi )
        return 0;
    std::vector< double > part( w.begin() + lo, w.begin() + hi + 1 );
    std::sort( part.begin(), part.end() );
    for ( const double x : part )
        s += x;
    return s;
}

std::string fmt( double x )
{
    char buf[ 32 ];
    std::snprintf( buf, sizeof buf, "%.6g", x );
    return buf;
}

double parse_probability( const std::string& text )
{
    std::size_t used = 0;
    double v = 0;
    try
    {
        v = std::stod( text, &used );
    }
    catch ( const std::exception& )
    {
        used = 0;
    }
    if ( used == 0 || used != text.size() )
        throw std::invalid_argument( "bad probability '" + text + "'" );
    return v;
}

} // namespace

double binomial_cdf( std::int64_t k, std::int64_t n, double p )
{
    if ( k < 0 )
        return 0;
    if ( k >= n )
        return 1;
    const auto w = binomial_pmf( n, p );
    // Sum the shorter side for accuracy.
    const double lower = sum_range( w, 0, k );
    return lower <= 0.5 ? lower : 1 - sum_range( w, k + 1, n );
}

double binomial_sf( std::int64_t k, std::int64_t n, double p )
{
    if ( k <= 0 )
        return 1;
    if ( k > n )
        return 0;
    const auto w = binomial_pmf( n, p );
    const double upper = sum_range( w, k, n );
    return upper <= 0.5 ? upper : 1 - sum_range( w, 0, k - 1 );
}

tail parse_tail( std::string_view text )
{
    const auto t = trim( text );
    if ( t == "LEFT_TAILED" )
        return tail::left;
    if ( t == "RIGHT_TAILED" )
        return tail::right;
    if ( t == "TWO_TAILED" )
        return tail::two;
    throw std::invalid_argument( "unknown test procedure '" + t + "'" );
}

const char* to_string( tail t )
{
    switch ( t )
    {
    case tail::left: return "LEFT_TAILED";
    case tail::right: return "RIGHT_TAILED";
    case tail::two: return "TWO_TAILED";
    }
    return "";
}

hypothesis hypothesis::parse( std::string_view text )
{
    const auto parts = split_top_level( strip_parens( ascii_angles( text ) ) );
    if ( parts.size() != 5 )
        throw std::invalid_argument( "hypothesis needs (start, end, property, procedure, p0)" );
    hypothesis h;
    h.start = condition::parse( parts[ 0 ] );
    h.end = condition::parse( parts[ 1 ] );
    if ( h.end.k == condition::kind::pred )
        throw std::invalid_argument( "end condition must be TIME or STEPS" );
    const auto prop = angle_group( parts[ 2 ] );
    if ( !prop || prop->first != "EVENTUALLY" || prop->second.empty() )
        throw std::invalid_argument( "property must be <EVENTUALLY, predicate>" );
    h.property = prop->second;
    h.procedure = parse_tail( parts[ 3 ] );
    h.p0_text = parts[ 4 ];
    h.p0 = parse_probability( parts[ 4 ] );
    if ( !( h.p0 > 0 && h.p0 <= 1 ) )
        throw std::invalid_argument( "p0 must lie in (0, 1]" );
    return h;
}

std::string to_string( const hypothesis& h )
{
    return "(" + to_string( h.start ) + ", " + to_string( h.end ) + ", <EVENTUALLY, " + h.property + ">, "
           + to_string( h.procedure ) + ", " + h.p0_text + ")";
}

verdict hypothesis_test( std::size_t k, std::size_t n, tail procedure, double p0, double alpha )
{
    if ( n == 0 )
        return verdict::error( "no simulation runs" );
    const auto kk = static_cast< std::int64_t >( k );
    const auto nn = static_cast< std::int64_t >( n );
    double pv = 0;
    switch ( procedure )
    {
    case tail::left: pv = binomial_cdf( kk, nn, p0 ); break;
    case tail::right: pv = binomial_sf( kk, nn, p0 ); break;
    case tail::two: pv = std::min( 1.0, 2 * std::min( binomial_cdf( kk, nn, p0 ), binomial_sf( kk, nn, p0 ) ) ); break;
    }
    const auto msg = std::to_string( k ) + "/" + std::to_string( n ) + " successes, p-value " + fmt( pv );
    return pv < alpha ? verdict::fail( "hypothesis rejected: " + msg ) : verdict::success( "hypothesis accepted: " + msg );
}

verdict estimate_probability( std::size_t k, std::size_t n, tail procedure, double p0, double delta )
{
    if ( n == 0 )
        return verdict::error( "no simulation runs" );
    const double est = static_cast< double >( k ) / static_cast< double >( n );
    // Tolerate rounding in p0 +- delta.
    const double eps = 1e-12;
    bool ok = false;
    switch ( procedure )
    {
    case tail::left: ok = est >= p0 - delta - eps; break;
    case tail::right: ok = est <= p0 + delta + eps; break;
    case tail::two: ok = std::fabs( est - p0 ) <= delta + eps; break;
    }
    const auto msg = "estimated probability " + fmt( est ) + " from " + std::to_string( n ) + " runs";
    return ok ? verdict::success( msg ) : verdict::fail( msg );
}

namespace
{

std::size_t successes( const simulator& sim, const hypothesis& h, std::size_t n, std::uint64_t seed )
{
    const auto rs = sim.monte_carlo( n, h.start, h.end, seed );
    return count_eventually( sim.model(), rs, h.property );
}

template< typename F >
verdict guarded( F&& f )
{
    try
    {
        return f();
    }
    catch ( const model_error& e )
    {
        return verdict::error( e.what() );
    }
    catch ( const std::invalid_argument& e )
    {
        return verdict::error( e.what() );
    }
    catch ( const sim_error& e )
    {
        return verdict::error( e.what() );
    }
}

} // namespace

verdict run_hypothesis_test( const simulator& sim, const hypothesis& h, std::size_t n, double alpha,
                             std::uint64_t seed )
{
    return guarded( [ & ] { return hypothesis_test( successes( sim, h, n, seed ), n, h.procedure, h.p0, alpha ); } );
}

verdict run_estimation( const simulator& sim, const hypothesis& h, std::size_t n, double delta, std::uint64_t seed )
{
    return guarded( [ & ] { return estimate_probability( successes( sim, h, n, seed ), n, h.procedure, h.p0, delta ); } );
}

} // namespace vove
