#pragma once

#include "vove/check/ltl.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace vove
{

enum class ctl_op
{
    prop,
    true_,
    false_,
    not_,
    and_,
    or_,
    implies,
    equiv,
    ex,
    ax,
    ef,
    af,
    eg,
    ag,
    eu,
    au
};

struct ctl_node;
using ctl = std::shared_ptr< const ctl_node >;

struct ctl_node
{
    ctl_op op = ctl_op::true_;
    std::vector< ctl > args;
    std::string text;
};

ctl make_ctl( ctl_op op, std::vector< ctl > args = {}, std::string text = {} );

// EX AX EF AF EG AG, E[f U g], A[f U g], predicates in braces.
ctl parse_ctl( std::string_view text );
std::string to_string( const ctl& f );

// Truth value of `f` in every explored non-root node (index = node id).
std::vector< char > label_ctl( const state_space& space, const ctl& f );

verdict check_ctl( model_context& ctx, const ctl& f, bool expect_holds );

} // namespace vove
