#pragma once

#include "vove/check/verdict.hpp"

#include <string>
#include <vector>

namespace vove
{

// One shortest trace from the root ending in each listed operation.
verdict gen_op_coverage( model_context& ctx, const std::vector< std::string >& ops );

struct mcdc_requirement
{
    std::string op;
    std::string condition;
    bool value = false;
    bool witnessed = false;
};

// Conditions are the subformulas of each guard reached after descending
// `level` connective layers (flattened and/or chains count as one layer);
// parameter typing conjuncts are skipped. A requirement (condition, value) is
// witnessed by a reachable state and binding where the condition has that
// value and flipping it alone flips the guard.
std::vector< mcdc_requirement > mcdc_requirements( model_context& ctx, unsigned level );
verdict gen_mcdc( model_context& ctx, unsigned level );

enum class vacuity_scope
{
    invariant,
    guards
};

// INV: over all type-correct valuations; GRD: over reachable states and all
// parameter bindings. A conjunct is vacuous when the remaining conjuncts imply
// it; an implication is flagged when its antecedent is never true.
verdict vacuous_parts( model_context& ctx, vacuity_scope scope );

} // namespace vove
