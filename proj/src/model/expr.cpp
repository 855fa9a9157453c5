#include "vove/model/expr.hpp"

#include <algorithm>
#include <array>

namespace vove
{

expr make_expr( expr_kind kind, std::vector< expr > args, std::int64_t value, std::string name, source_pos pos )
{
    auto n = std::make_shared< expr_node >();
    n->kind = kind;
    n->args = std::move( args );
    n->value = value;
    n->name = std::move( name );
    n->pos = pos;
    return n;
}

expr make_bool( bool b )
{
    auto n = std::make_shared< expr_node >();
    n->kind = expr_kind::bool_lit;
    n->value = b ? 1 : 0;
    n->ty = type::boolean();
    return n;
}

expr make_and( std::vector< expr > parts )
{
    if ( parts.empty() )
        return make_bool( true );
    expr acc = parts.front();
    for ( std::size_t i = 1; i < parts.size(); ++i )
    {
        auto n = std::make_shared< expr_node >();
        n->kind = expr_kind::and_;
        n->args = { acc, parts[ i ] };
        n->ty = type::boolean();
        n->pos = acc->pos;
        acc = n;
    }
    return acc;
}

bool is_connective( expr_kind kind )
{
    switch ( kind )
    {
    case expr_kind::not_:
    case expr_kind::and_:
    case expr_kind::or_:
    case expr_kind::implies:
    case expr_kind::equiv: return true;
    default: return false;
    }
}

bool structurally_equal( const expr& a, const expr& b )
{
    if ( a == b )
        return true;
    if ( !a || !b )
        return false;
    if ( a->kind != b->kind || a->value != b->value || a->set != b->set || a->name != b->name
         || a->args.size() != b->args.size() )
        return false;
    for ( std::size_t i = 0; i < a->args.size(); ++i )
        if ( !structurally_equal( a->args[ i ], b->args[ i ] ) )
            return false;
    return true;
}

std::vector< expr > conjuncts( const expr& e )
{
    std::vector< expr > out;
    std::vector< expr > stack{ e };
    while ( !stack.empty() )
    {
        auto cur = stack.back();
        stack.pop_back();
        if ( cur->kind == expr_kind::and_ )
        {
            stack.push_back( cur->args[ 1 ] );
            stack.push_back( cur->args[ 0 ] );
        }
        else
            out.push_back( cur );
    }
    return out;
}

namespace
{

constexpr std::array< std::string_view, 21 > reserved{
    "MACHINE", "REFINEMENT", "REFINES", "SETS",  "VARIABLES", "INVARIANT", "INITIALISATION",
    "OPERATIONS", "SELECT", "THEN",  "END",  "BEGIN",     "CHOICE",    "OR",
    "skip",       "or",     "not",   "true", "false",     "TRUE",      "FALSE",
};

bool is_reserved( std::string_view word )
{
    return std::find( reserved.begin(), reserved.end(), word ) != reserved.end();
}

class parser
{
    token_stream& _ts;

public:
    explicit parser( token_stream& ts ) : _ts{ ts } {}

    expr equiv()
    {
        auto lhs = implies();
        while ( _ts.peek().is( "<=>" ) )
        {
            const auto pos = _ts.next().pos;
            lhs = make_expr( expr_kind::equiv, { lhs, implies() }, 0, {}, pos );
        }
        return lhs;
    }

private:
    expr implies()
    {
        auto lhs = disjunction();
        while ( _ts.peek().is( "=>" ) )
        {
            const auto pos = _ts.next().pos;
            lhs = make_expr( expr_kind::implies, { lhs, disjunction() }, 0, {}, pos );
        }
        return lhs;
    }

    expr disjunction()
    {
        auto lhs = conjunction();
        while ( _ts.peek().is( "or" ) )
        {
            const auto pos = _ts.next().pos;
            lhs = make_expr( expr_kind::or_, { lhs, conjunction() }, 0, {}, pos );
        }
        return lhs;
    }

    expr conjunction()
    {
        auto lhs = negation();
        while ( _ts.peek().is( "&" ) )
        {
            const auto pos = _ts.next().pos;
            lhs = make_expr( expr_kind::and_, { lhs, negation() }, 0, {}, pos );
        }
        return lhs;
    }

    expr negation()
    {
        if ( _ts.peek().is( "not" ) )
        {
            const auto pos = _ts.next().pos;
            return make_expr( expr_kind::not_, { negation() }, 0, {}, pos );
        }
        return comparison();
    }

    expr comparison()
    {
        auto lhs = range();
        static const std::array< std::pair< std::string_view, expr_kind >, 8 > ops{ {
            { "=", expr_kind::eq },
            { "/=", expr_kind::neq },
            { "<", expr_kind::lt },
            { "<=", expr_kind::le },
            { ">", expr_kind::gt },
            { ">=", expr_kind::ge },
            { ":", expr_kind::member },
            { "/:", expr_kind::not_member },
        } };
        for ( const auto& [ sym, kind ] : ops )
        {
            if ( _ts.peek().kind == token_kind::symbol && _ts.peek().text == sym )
            {
                const auto pos = _ts.next().pos;
                return make_expr( kind, { lhs, range() }, 0, {}, pos );
            }
        }
        return lhs;
    }

    expr range()
    {
        auto lhs = additive();
        if ( _ts.peek().is( ".." ) )
        {
            const auto pos = _ts.next().pos;
            return make_expr( expr_kind::range, { lhs, additive() }, 0, {}, pos );
        }
        return lhs;
    }

    expr additive()
    {
        auto lhs = unary();
        while ( _ts.peek().kind == token_kind::symbol && ( _ts.peek().text == "+" || _ts.peek().text == "-" ) )
        {
            const auto& t = _ts.next();
            const auto kind = t.text == "+" ? expr_kind::add : expr_kind::sub;
            lhs = make_expr( kind, { lhs, unary() }, 0, {}, t.pos );
        }
        return lhs;
    }

    expr unary()
    {
        if ( _ts.peek().kind == token_kind::symbol && _ts.peek().text == "-" )
        {
            const auto pos = _ts.next().pos;
            return make_expr( expr_kind::neg, { unary() }, 0, {}, pos );
        }
        return primary();
    }

    expr primary()
    {
        const auto& t = _ts.peek();
        if ( t.kind == token_kind::integer )
        {
            _ts.next();
            std::int64_t v = 0;
            for ( char c : t.text )
            {
                v = v * 10 + ( c - '0' );
                if ( v > 2147483647 )
                    throw model_error( diag_kind::syntax_error, t.pos, "integer literal out of range" );
            }
            return make_expr( expr_kind::int_lit, {}, v, {}, t.pos );
        }
        if ( t.kind == token_kind::identifier )
        {
            if ( t.text == "true" || t.text == "TRUE" || t.text == "false" || t.text == "FALSE" )
            {
                _ts.next();
                const bool b = t.text == "true" || t.text == "TRUE";
                return make_expr( expr_kind::bool_lit, {}, b ? 1 : 0, {}, t.pos );
            }
            if ( is_reserved( t.text ) )
                _ts.fail( "expected expression" );
            _ts.next();
            return make_expr( expr_kind::name, {}, 0, t.text, t.pos );
        }
        if ( t.is( "(" ) )
        {
            _ts.next();
            auto e = equiv();
            _ts.expect( ")" );
            return e;
        }
        if ( t.is( "{" ) )
        {
            const auto pos = _ts.next().pos;
            std::vector< expr > items;
            if ( !_ts.peek().is( "}" ) )
            {
                items.push_back( additive() );
                while ( _ts.accept( "," ) )
                    items.push_back( additive() );
            }
            _ts.expect( "}" );
            return make_expr( expr_kind::set_lit, std::move( items ), 0, {}, pos );
        }
        _ts.fail( "expected expression" );
    }
};

int precedence( expr_kind kind )
{
    switch ( kind )
    {
    case expr_kind::equiv: return 1;
    case expr_kind::implies: return 2;
    case expr_kind::or_: return 3;
    case expr_kind::and_: return 4;
    case expr_kind::not_: return 5;
    case expr_kind::eq:
    case expr_kind::neq:
    case expr_kind::lt:
    case expr_kind::le:
    case expr_kind::gt:
    case expr_kind::ge:
    case expr_kind::member:
    case expr_kind::not_member: return 6;
    case expr_kind::range: return 7;
    case expr_kind::add:
    case expr_kind::sub: return 8;
    case expr_kind::neg: return 9;
    default: return 10;
    }
}

const char* spelling( expr_kind kind )
{
    switch ( kind )
    {
    case expr_kind::equiv: return " <=> ";
    case expr_kind::implies: return " => ";
    case expr_kind::or_: return " or ";
    case expr_kind::and_: return " & ";
    case expr_kind::eq: return " = ";
    case expr_kind::neq: return " /= ";
    case expr_kind::lt: return " < ";
    case expr_kind::le: return " <= ";
    case expr_kind::gt: return " > ";
    case expr_kind::ge: return " >= ";
    case expr_kind::member: return " : ";
    case expr_kind::not_member: return " /: ";
    case expr_kind::range: return "..";
    case expr_kind::add: return " + ";
    case expr_kind::sub: return " - ";
    default: return " ? ";
    }
}

void print( const expr& e, int min_prec, std::string& out )
{
    const int prec = precedence( e->kind );
    const bool parens = prec < min_prec;
    if ( parens )
        out += "(";
    switch ( e->kind )
    {
    case expr_kind::bool_lit: out += e->value ? "true" : "false"; break;
    case expr_kind::int_lit:
        if ( e->value < 0 )
            out += "(" + std::to_string( e->value ) + ")";
        else
            out += std::to_string( e->value );
        break;
    case expr_kind::name:
    case expr_kind::variable:
    case expr_kind::parameter:
    case expr_kind::element:
    case expr_kind::set_name: out += e->name; break;
    case expr_kind::set_lit:
        out += "{";
        for ( std::size_t i = 0; i < e->args.size(); ++i )
        {
            if ( i )
                out += ", ";
            print( e->args[ i ], 8, out );
        }
        out += "}";
        break;
    case expr_kind::not_:
        out += "not ";
        print( e->args[ 0 ], 5, out );
        break;
    case expr_kind::neg:
        out += "-";
        print( e->args[ 0 ], 10, out );
        break;
    case expr_kind::equiv:
    case expr_kind::implies:
    case expr_kind::or_:
    case expr_kind::and_:
    case expr_kind::add:
    case expr_kind::sub:
        print( e->args[ 0 ], prec, out );
        out += spelling( e->kind );
        print( e->args[ 1 ], prec + 1, out );
        break;
    default:
        print( e->args[ 0 ], prec + 1, out );
        out += spelling( e->kind );
        print( e->args[ 1 ], prec + 1, out );
        break;
    }
    if ( parens )
        out += ")";
}

std::string describe( const type& t, const symbol_table& symbols )
{
    (void)symbols;
    switch ( t.t )
    {
    case type::tag::boolean: return "BOOL";
    case type::tag::integer: return "INTEGER";
    case type::tag::element: return "element of set #" + std::to_string( t.set );
    case type::tag::element_set: return "subset of set #" + std::to_string( t.set );
    case type::tag::integer_set: return "set of INTEGER";
    default: return "unknown";
    }
}

class resolver
{
    const symbol_table& _sym;
    const std::vector< param_decl >& _params;

public:
    resolver( const symbol_table& sym, const std::vector< param_decl >& params ) : _sym{ sym }, _params{ params } {}

    expr run( const expr& e )
    {
        auto n = std::make_shared< expr_node >( *e );
        n->args.clear();
        for ( const auto& a : e->args )
            n->args.push_back( run( a ) );

        auto need = [ & ]( std::size_t i, type::tag tag, const char* what )
        {
            if ( n->args[ i ]->ty.t != tag )
                throw model_error( diag_kind::type_mismatch, n->args[ i ]->pos,
                                   std::string( "expected " ) + what + " operand in '" + to_string( e ) + "'" );
        };

        switch ( e->kind )
        {
        case expr_kind::bool_lit: n->ty = type::boolean(); break;
        case expr_kind::int_lit: n->ty = type::integer(); break;
        case expr_kind::variable: n->ty = _sym.variable_type( static_cast< int >( e->value ) ); break;
        case expr_kind::parameter: n->ty = _params.at( static_cast< std::size_t >( e->value ) ).ty; break;
        case expr_kind::element: n->ty = type::element( e->set ); break;
        case expr_kind::set_name: n->ty = type::element_set( e->set ); break;
        case expr_kind::name: name( *n ); break;
        case expr_kind::set_lit:
        {
            if ( n->args.empty() )
                throw model_error( diag_kind::type_mismatch, n->pos, "empty set literal has no type" );
            const auto first = n->args.front()->ty;
            for ( const auto& a : n->args )
                if ( a->ty != first )
                    throw model_error( diag_kind::type_mismatch, a->pos, "set literal mixes element types" );
            if ( first.t == type::tag::element )
                n->ty = type::element_set( first.set );
            else if ( first.t == type::tag::integer )
                n->ty = type::integer_set();
            else
                throw model_error( diag_kind::type_mismatch, n->pos, "set literal must hold elements or integers" );
            break;
        }
        case expr_kind::range:
            need( 0, type::tag::integer, "integer" );
            need( 1, type::tag::integer, "integer" );
            n->ty = type::integer_set();
            break;
        case expr_kind::not_:
        case expr_kind::and_:
        case expr_kind::or_:
        case expr_kind::implies:
        case expr_kind::equiv:
            for ( std::size_t i = 0; i < n->args.size(); ++i )
                need( i, type::tag::boolean, "predicate" );
            n->ty = type::boolean();
            break;
        case expr_kind::eq:
        case expr_kind::neq:
        {
            const auto& l = n->args[ 0 ]->ty;
            const auto& r = n->args[ 1 ]->ty;
            const bool scalar = l.t == type::tag::boolean || l.t == type::tag::integer || l.t == type::tag::element;
            if ( !scalar || l != r )
                throw model_error( diag_kind::type_mismatch, n->pos,
                                   "cannot compare " + describe( l, _sym ) + " with " + describe( r, _sym ) + " in '"
                                           + to_string( e ) + "'" );
            n->ty = type::boolean();
            break;
        }
        case expr_kind::lt:
        case expr_kind::le:
        case expr_kind::gt:
        case expr_kind::ge:
            need( 0, type::tag::integer, "integer" );
            need( 1, type::tag::integer, "integer" );
            n->ty = type::boolean();
            break;
        case expr_kind::member:
        case expr_kind::not_member:
        {
            const auto& l = n->args[ 0 ]->ty;
            const auto& r = n->args[ 1 ]->ty;
            const bool ok = ( l.t == type::tag::element && r.t == type::tag::element_set && l.set == r.set )
                            || ( l.t == type::tag::integer && r.t == type::tag::integer_set );
            if ( !ok )
                throw model_error( diag_kind::type_mismatch, n->pos, "ill-typed membership '" + to_string( e ) + "'" );
            n->ty = type::boolean();
            break;
        }
        case expr_kind::add:
        case expr_kind::sub:
            need( 0, type::tag::integer, "integer" );
            need( 1, type::tag::integer, "integer" );
            n->ty = type::integer();
            break;
        case expr_kind::neg:
            need( 0, type::tag::integer, "integer" );
            n->ty = type::integer();
            break;
        }
        return n;
    }

private:
    void name( expr_node& n )
    {
        for ( std::size_t i = 0; i < _params.size(); ++i )
        {
            if ( _params[ i ].name == n.name )
            {
                n.kind = expr_kind::parameter;
                n.value = static_cast< std::int64_t >( i );
                n.ty = _params[ i ].ty;
                return;
            }
        }
        if ( auto v = _sym.find_variable( n.name ) )
        {
            n.kind = expr_kind::variable;
            n.value = *v;
            n.ty = _sym.variable_type( *v );
            return;
        }
        if ( auto el = _sym.find_element( n.name ) )
        {
            n.kind = expr_kind::element;
            n.set = el->first;
            n.value = el->second;
            n.ty = type::element( el->first );
            return;
        }
        if ( auto s = _sym.find_set( n.name ) )
        {
            n.kind = expr_kind::set_name;
            n.set = *s;
            n.ty = type::element_set( *s );
            return;
        }
        throw model_error( diag_kind::unknown_identifier, n.pos, "unknown identifier '" + n.name + "'" );
    }
};

} // namespace

expr parse_expression( token_stream& ts )
{
    return parser{ ts }.equiv();
}

expr parse_expression( std::string_view text )
{
    token_stream ts{ tokenize( text ) };
    auto e = parse_expression( ts );
    if ( !ts.at_end() )
        ts.fail( "unexpected trailing input" );
    return e;
}

std::string to_string( const expr& e )
{
    std::string out;
    print( e, 0, out );
    return out;
}

expr resolve( const expr& e, const symbol_table& symbols, const std::vector< param_decl >& params )
{
    return resolver{ symbols, params }.run( e );
}

expr resolve_predicate( const expr& e, const symbol_table& symbols, const std::vector< param_decl >& params )
{
    auto r = resolve( e, symbols, params );
    if ( r->ty.t != type::tag::boolean )
        throw model_error( diag_kind::type_mismatch, r->pos, "expected a predicate, got '" + to_string( e ) + "'" );
    return r;
}

} // namespace vove
