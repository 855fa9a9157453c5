#pragma once

#include "vove/space/session.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace vove
{

// Step-by-step execution of a machine with undo and recorded assertions.
class animator
{
public:
    explicit animator( std::shared_ptr< const machine > m, std::size_t max_states = 100000 );

    [[nodiscard]] const machine& model() const { return *_ctx.model; }
    [[nodiscard]] bool at_root() const { return _nodes.size() == 1; }
    [[nodiscard]] const state* current() const;

    // Outgoing transitions of the current node, in a fixed order.
    [[nodiscard]] std::vector< transition > enabled();
    // 1-based index into enabled(); false when out of range.
    bool fire( std::size_t choice );
    bool back();
    // Checks `pred` in the current state and records it for the last step.
    bool assert_here( const std::string& pred );

    [[nodiscard]] const path& history() const { return _path; }
    [[nodiscard]] std::string trace_file() const;

private:
    model_context _ctx;
    std::vector< std::size_t > _nodes;
    path _path;
    std::vector< std::string > _posts;
};

// Reads commands until `quit` or end of input.
void run_animator( animator& a, std::istream& in, std::ostream& out );

} // namespace vove
