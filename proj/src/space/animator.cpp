#include "vove/space/animator.hpp"

#include "vove/check/trace.hpp"
#include "vove/model/diagnostic.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vove
{

animator::animator( std::shared_ptr< const machine > m, std::size_t max_states )
        : _ctx{ m->name, m, max_states }, _nodes{ state_space::root }
{
}

const state* animator::current() const { return at_root() ? nullptr : &_ctx.space.node( _nodes.back() ); }

std::vector< transition > animator::enabled()
{
    std::vector< transition > out;
    for ( const auto e : _ctx.space.expand( _nodes.back() ) )
        out.push_back( _ctx.space.edge( e ) );
    return out;
}

bool animator::fire( std::size_t choice )
{
    const auto options = enabled();
    if ( choice == 0 || choice > options.size() )
        return false;
    const auto& t = options[ choice - 1 ];
    _nodes.push_back( t.target );
    _path.steps.push_back( { t.label, _ctx.space.node( t.target ) } );
    _posts.emplace_back();
    return true;
}

bool animator::back()
{
    if ( at_root() )
        return false;
    _nodes.pop_back();
    _path.steps.pop_back();
    _posts.pop_back();
    return true;
}

bool animator::assert_here( const std::string& pred )
{
    if ( at_root() )
        return false;
    const auto p = model().parse_predicate( pred );
    if ( !eval_pred( model(), p, *current() ) )
        return false;
    auto& post = _posts.back();
    post = post.empty() ? pred : post + " & " + pred;
    return true;
}

std::string animator::trace_file() const { return format_trace_file( model(), _path, _posts ); }

void run_animator( animator& a, std::istream& in, std::ostream& out )
{
    auto show = [ & ]
    {
        out << ( a.at_root() ? std::string( "(root)" ) : state_string( a.model(), *a.current() ) ) << "\n";
        const auto options = a.enabled();
        if ( options.empty() )
            out << "  no enabled events\n";
        for ( std::size_t i = 0; i < options.size(); ++i )
            out << "  " << i + 1 << ") " << event_name( a.model(), options[ i ].label ) << "\n";
    };

    show();
    std::string line;
    while ( out << "> " << std::flush, std::getline( in, line ) )
    {
        std::istringstream words{ line };
        std::string cmd;
        words >> cmd;
        std::string rest;
        std::getline( words >> std::ws, rest );
        try
        {
            if ( cmd.empty() )
                continue;
            if ( cmd == "quit" || cmd == "exit" )
                break;
            if ( cmd == "fire" || std::isdigit( static_cast< unsigned char >( cmd[ 0 ] ) ) )
            {
                const auto arg = cmd == "fire" ? rest : cmd;
                std::size_t n = 0;
                try
                {
                    n = std::stoul( arg );
                }
                catch ( const std::exception& )
                {
                    n = 0;
                }
                if ( !a.fire( n ) )
                    out << "no event number '" << arg << "'\n";
            }
            else if ( cmd == "back" )
            {
                if ( !a.back() )
                    out << "already at the start\n";
            }
            else if ( cmd == "assert" )
            {
                if ( !a.assert_here( rest ) )
                    out << "not recorded: '" << rest << "' does not hold here\n";
            }
            else if ( cmd == "save-trace" )
            {
                std::ofstream file{ rest };
                if ( !file )
                    out << "cannot write " << rest << "\n";
                else
                {
                    file << a.trace_file();
                    out << "saved " << a.history().steps.size() << " steps to " << rest << "\n";
                }
                continue;
            }
            else if ( cmd == "help" )
            {
                out << "fire N | N | back | assert PRED | save-trace FILE | quit\n";
                continue;
            }
            else
            {
                out << "unknown command '" << cmd << "' (try help)\n";
                continue;
            }
        }
        catch ( const std::exception& e )
        {
            out << "error: " << e.what() << "\n";
        }
        show();
    }
}

} // namespace vove
