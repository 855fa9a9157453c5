#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vove
{

std::string trim( std::string_view s );

// Replaces the mathematical angle brackets with < and >.
std::string ascii_angles( std::string_view s );

// Splits at `sep` outside (), [], {} and <KEYWORD, ...> groups.
std::vector< std::string > split_top_level( std::string_view s, char sep = ',' );

// "<KIND, rest>" -> (KIND, rest); nullopt if `s` is not such a group.
std::optional< std::pair< std::string, std::string > > angle_group( std::string_view s );

// Strips one pair of enclosing parentheses if they span all of `s`.
std::string strip_parens( std::string_view s );

} // namespace vove
