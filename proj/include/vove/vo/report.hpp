#pragma once

#include "vove/vo/evaluate.hpp"

#include <string>
#include <vector>

namespace vove
{

struct evaluation_report
{
    std::string project;
    std::uint64_t seed = 0;
    check_mode mode = check_mode::strict;
    std::vector< diagnostic_entry > diagnostics;
    std::vector< vo_result > results;

    [[nodiscard]] bool all_success() const;
};

evaluation_report run_project( const vo_project& p, const std::string& name );

// Table of obligations with elapsed times, then blame and diagnostics.
std::string format_text( const evaluation_report& r );
// Stable JSON: no timings, keys in a fixed order.
std::string format_json( const evaluation_report& r, const vo_project& p );

} // namespace vove
