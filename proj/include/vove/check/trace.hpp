#pragma once

#include "vove/check/verdict.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vove
{

// Builds a trace from (event text, postcondition text) pairs; an empty
// postcondition means none.
trace make_trace( const machine& m, const std::vector< std::pair< std::string, std::string > >& steps );

// Trace files hold one step per line, `op(p=v, ...) [assert <pred>]`, with
// `#` comments. INITIALISATION may be written or left implicit.
trace parse_trace_file( const machine& m, std::string_view text );
std::string format_trace_file( const machine& m, const path& p, const std::vector< std::string >& posts = {} );
trace load_trace_file( const machine& m, const std::string& file );

// Executes the steps from the trace origin, from the root when the trace
// starts with INITIALISATION, otherwise from the end of the context's current
// trace (or the root followed by an implicit INITIALISATION).
verdict replay_trace( model_context& ctx, const trace& t );

} // namespace vove
