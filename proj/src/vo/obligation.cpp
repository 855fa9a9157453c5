#include "vove/vo/obligation.hpp"

#include "vove/util/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace vove
{

namespace
{

using kind = vo_node::kind;

int precedence( kind k )
{
    switch ( k )
    {
    case kind::equivalence:
        return 1;
    case kind::implication:
        return 2;
    case kind::disjunction:
        return 3;
    case kind::conjunction:
        return 4;
    case kind::sequence:
        return 5;
    case kind::negation:
        return 6;
    case kind::leaf:
        break;
    }
    return 7;
}

const char* symbol( kind k )
{
    switch ( k )
    {
    case kind::equivalence:
        return " <=> ";
    case kind::implication:
        return " => ";
    case kind::disjunction:
        return " | ";
    case kind::conjunction:
        return " & ";
    case kind::sequence:
        return "; ";
    default:
        return "";
    }
}

bool id_char( char c )
{
    return std::isalnum( static_cast< unsigned char >( c ) ) || c == '_' || c == '.' || c == '-';
}

class parser
{
public:
    explicit parser( std::string_view text ) : _s{ text } {}

    vo_expr parse()
    {
        auto e = binary( 1 );
        skip();
        if ( _i != _s.size() )
            fail( "unexpected '" + std::string( _s.substr( _i, 8 ) ) + "'" );
        return e;
    }

private:
    std::string_view _s;
    std::size_t _i = 0;

    [[noreturn]] void fail( const std::string& msg ) const
    {
        throw vo_error( vo_error::kind::syntax,
                        msg + " at offset " + std::to_string( _i ) + " in '" + std::string( _s ) + "'" );
    }

    void skip()
    {
        while ( _i < _s.size() && std::isspace( static_cast< unsigned char >( _s[ _i ] ) ) )
            ++_i;
    }

    bool eat( std::string_view tok )
    {
        skip();
        if ( _s.substr( _i, tok.size() ) != tok )
            return false;
        _i += tok.size();
        return true;
    }

    std::optional< kind > binary_op( int level )
    {
        skip();
        const auto save = _i;
        auto found = [ & ]() -> std::optional< kind >
        {
            switch ( level )
            {
            case 1:
                if ( eat( "<=>" ) || eat( "⇔" ) )
                    return kind::equivalence;
                break;
            case 2:
                if ( eat( "=>" ) || eat( "⇒" ) )
                    return kind::implication;
                break;
            case 3:
                if ( eat( "|" ) || eat( "∨" ) )
                    return kind::disjunction;
                break;
            case 4:
                if ( eat( "&" ) || eat( "∧" ) )
                    return kind::conjunction;
                break;
            case 5:
                if ( eat( ";" ) )
                    return kind::sequence;
                break;
            }
            return std::nullopt;
        }();
        if ( !found )
            _i = save;
        return found;
    }

    vo_expr binary( int level )
    {
        if ( level > 5 )
            return unary();
        auto lhs = binary( level + 1 );
        while ( auto k = binary_op( level ) )
        {
            auto rhs = binary( level + 1 );
            lhs = std::make_shared< vo_node >( vo_node{ *k, {}, lhs, rhs } );
        }
        return lhs;
    }

    vo_expr unary()
    {
        if ( eat( "!" ) || eat( "¬" ) )
            return std::make_shared< vo_node >( vo_node{ kind::negation, {}, unary(), nullptr } );
        if ( eat( "(" ) )
        {
            auto e = binary( 1 );
            if ( !eat( ")" ) )
                fail( "expected ')'" );
            return e;
        }
        skip();
        const auto start = _i;
        while ( _i < _s.size() && id_char( _s[ _i ] ) )
            ++_i;
        if ( start == _i )
            fail( _i == _s.size() ? "unexpected end of expression" : "expected a task id" );
        return std::make_shared< vo_node >( vo_node{ kind::leaf, std::string( _s.substr( start, _i - start ) ), nullptr, nullptr } );
    }
};

std::string render( const vo_expr& e, int context )
{
    std::string out;
    if ( e->op == kind::leaf )
        return e->task;
    if ( e->op == kind::negation )
        out = "!" + render( e->left, precedence( kind::negation ) );
    else
        // Left-associative: a right operand of equal precedence needs parentheses.
        out = render( e->left, precedence( e->op ) ) + symbol( e->op ) + render( e->right, precedence( e->op ) + 1 );
    return precedence( e->op ) < context ? "(" + out + ")" : out;
}

void collect( const vo_expr& e, std::vector< std::string >& out )
{
    if ( e->op == kind::leaf )
    {
        out.push_back( e->task );
        return;
    }
    collect( e->left, out );
    if ( e->right )
        collect( e->right, out );
}

} // namespace

bool same_tree( const vo_expr& a, const vo_expr& b )
{
    if ( !a || !b )
        return a == b;
    return a->op == b->op && a->task == b->task && same_tree( a->left, b->left ) && same_tree( a->right, b->right );
}

std::string to_string( const vo_expr& e ) { return render( e, 0 ); }

std::string to_string( const vo_decl& vo )
{
    std::string out = vo.id;
    if ( !vo.validates.empty() )
    {
        out += " [validates ";
        for ( std::size_t i = 0; i < vo.validates.size(); ++i )
            out += ( i ? "," : "" ) + vo.validates[ i ];
        out += "]";
    }
    return out + ": " + to_string( vo.expr );
}

vo_expr parse_vo_expr( std::string_view text ) { return parser{ text }.parse(); }

vo_decl parse_vo( std::string_view line )
{
    const auto t = trim( line );
    const auto colon = t.find( ':' );
    if ( colon == std::string::npos )
        throw vo_error( vo_error::kind::syntax, "expected 'ID: expression', got '" + t + "'" );
    vo_decl vo;
    auto head = trim( std::string_view( t ).substr( 0, colon ) );
    if ( const auto open = head.find( '[' ); open != std::string::npos )
    {
        const auto close = head.find( ']', open );
        if ( close == std::string::npos || close + 1 != head.size() )
            throw vo_error( vo_error::kind::syntax, "malformed annotation in '" + t + "'" );
        auto note = trim( std::string_view( head ).substr( open + 1, close - open - 1 ) );
        if ( note.rfind( "validates", 0 ) != 0 )
            throw vo_error( vo_error::kind::syntax, "unknown annotation '" + note + "'" );
        for ( auto& r : split_top_level( std::string_view( note ).substr( 9 ) ) )
        {
            if ( r.empty() )
                throw vo_error( vo_error::kind::syntax, "empty requirement id in '" + t + "'" );
            vo.validates.push_back( std::move( r ) );
        }
        head = trim( std::string_view( head ).substr( 0, open ) );
    }
    if ( head.empty() || std::any_of( head.begin(), head.end(), []( char c ) { return !id_char( c ); } ) )
        throw vo_error( vo_error::kind::syntax, "bad obligation id '" + head + "'" );
    vo.id = head;
    vo.expr = parse_vo_expr( std::string_view( t ).substr( colon + 1 ) );
    return vo;
}

std::vector< std::string > leaves( const vo_expr& e )
{
    std::vector< std::string > out;
    collect( e, out );
    return out;
}

vo_file parse_vo_file( std::string_view text, const std::set< std::string >* artifacts )
{
    vo_file out;
    std::set< std::string > task_ids;
    std::istringstream in{ std::string( text ) };
    std::string line;
    std::size_t number = 0;
    while ( std::getline( in, line ) )
    {
        ++number;
        const auto t = trim( line );
        if ( t.empty() || t.front() == '#' )
            continue;
        try
        {
            const auto colon = t.find( ':' );
            const auto slash = t.find( '/' );
            if ( slash != std::string::npos && slash < colon )
            {
                auto vt = parse_vt( t, artifacts );
                if ( !task_ids.insert( vt.id ).second )
                    throw vo_error( vo_error::kind::duplicate_id, "duplicate task '" + vt.id + "'" );
                out.tasks.push_back( std::move( vt ) );
            }
            else
                out.obligations.push_back( parse_vo( t ) );
        }
        catch ( const vo_error& e )
        {
            throw vo_error( e.what_kind, "line " + std::to_string( number ) + ": " + e.what() );
        }
    }
    return out;
}

vo_file load_vo_file( const std::string& file, const std::set< std::string >* artifacts )
{
    std::ifstream in{ file };
    if ( !in )
        throw std::runtime_error( "cannot open obligation file " + file );
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_vo_file( ss.str(), artifacts );
}

} // namespace vove
