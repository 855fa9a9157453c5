#pragma once

#include "vove/check/verdict.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vove
{

class formula_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class ltl_op
{
    prop,  // state predicate in braces
    true_,
    false_,
    not_,
    and_,
    or_,
    implies,
    equiv,
    next,
    finally,
    globally,
    until,
    weak_until,
    release,
    yesterday,
    since,
    historically,
    once
};

struct ltl_node;
using ltl = std::shared_ptr< const ltl_node >;

struct ltl_node
{
    ltl_op op = ltl_op::true_;
    std::vector< ltl > args;
    std::string text;  // predicate source for prop
};

ltl make_ltl( ltl_op op, std::vector< ltl > args = {}, std::string text = {} );

// Predicates in braces; unary G F X Y H O (chains such as GF allowed),
// binary U W R S; connectives not/!/¬, &/∧, or/|/∨, =>/⇒/⟹, <=>/⇔.
ltl parse_ltl( std::string_view text );
std::string to_string( const ltl& f );
bool is_past_op( ltl_op op );
bool is_future_op( ltl_op op );

// Decides whether every path from every initial state satisfies `f`, using a
// fully explored space in which deadlocks stutter. On failure the verdict
// carries a lasso.
struct ltl_result
{
    bool holds = true;
    path counterexample;
    std::size_t loop_start = 0;
};

ltl_result model_check_ltl( model_context& ctx, const ltl& f );

// SUCCESS iff the outcome matches the expectation (holds == expect_holds).
verdict check_ltl( model_context& ctx, const ltl& f, bool expect_holds );

} // namespace vove
