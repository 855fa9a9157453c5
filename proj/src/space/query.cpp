#include "vove/space/query.hpp"

#include "vove/model/lexer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

namespace vove
{

qvalue qvalue::boolean( bool b )
{
    qvalue v;
    v._kind = kind::boolean;
    v._num = b ? 1 : 0;
    return v;
}

qvalue qvalue::number( double d )
{
    qvalue v;
    v._kind = kind::number;
    v._num = d;
    return v;
}

qvalue qvalue::text( std::string s )
{
    qvalue v;
    v._kind = kind::text;
    v._text = std::move( s );
    return v;
}

qvalue qvalue::pair( qvalue a, qvalue b )
{
    qvalue v;
    v._kind = kind::pair;
    v._items = { std::move( a ), std::move( b ) };
    return v;
}

qvalue qvalue::set( std::vector< qvalue > items )
{
    std::sort( items.begin(), items.end() );
    items.erase( std::unique( items.begin(), items.end() ), items.end() );
    qvalue v;
    v._kind = kind::set;
    v._items = std::move( items );
    return v;
}

qvalue qvalue::interval( double lo, double hi )
{
    qvalue v;
    v._kind = kind::set;
    v._interval = true;
    v._items = { number( lo ), number( hi ) };
    return v;
}

bool qvalue::contains( const qvalue& x ) const
{
    if ( _kind != kind::set )
        throw query_error( "membership test on non-set " + str() );
    if ( _interval )
    {
        if ( x._kind != kind::number )
            throw query_error( "interval membership needs a number, got " + x.str() );
        return x._num >= _items[ 0 ]._num && x._num <= _items[ 1 ]._num;
    }
    return std::binary_search( _items.begin(), _items.end(), x );
}

std::string qvalue::str() const
{
    switch ( _kind )
    {
    case kind::boolean: return _num != 0 ? "TRUE" : "FALSE";
    case kind::number:
    {
        if ( std::floor( _num ) == _num && std::fabs( _num ) < 1e15 )
            return std::to_string( static_cast< long long >( _num ) );
        char buf[ 32 ];
        const auto res = std::to_chars( buf, buf + sizeof buf, _num );
        return std::string( buf, res.ptr );
    }
    case kind::text: return _text;
    case kind::pair: return "(" + _items[ 0 ].str() + " |-> " + _items[ 1 ].str() + ")";
    case kind::set:
    {
        if ( _interval )
            return "[" + _items[ 0 ].str() + ", " + _items[ 1 ].str() + "]";
        std::string out = "{";
        for ( std::size_t i = 0; i < _items.size(); ++i )
            out += ( i ? ", " : "" ) + _items[ i ].str();
        return out + "}";
    }
    }
    return "?";
}

std::strong_ordering qvalue::operator<=>( const qvalue& o ) const
{
    if ( _kind != o._kind )
        return static_cast< int >( _kind ) <=> static_cast< int >( o._kind );
    switch ( _kind )
    {
    case kind::boolean:
    case kind::number:
        if ( _num < o._num )
            return std::strong_ordering::less;
        if ( _num > o._num )
            return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    case kind::text: return _text.compare( o._text ) <=> 0;
    case kind::pair:
    case kind::set:
        if ( _interval != o._interval )
            return _interval <=> o._interval;
        return std::lexicographical_compare_three_way( _items.begin(), _items.end(), o._items.begin(), o._items.end() );
    }
    return std::strong_ordering::equal;
}

enum class qop
{
    literal,
    name,
    call,      // name(args): builtin, application of a bound relation, or label atom
    apply,     // expr(args)
    image,     // expr[expr]
    inverse,   // expr~
    set_lit,
    interval,
    maplet,
    equiv,
    implies,
    or_,
    and_,
    not_,
    eq,
    neq,
    lt,
    le,
    gt,
    ge,
    member,
    not_member,
    subset,
    union_,
    inter,
    add,
    sub,
    mul,
    div,
    neg
};

struct query_node
{
    qop op = qop::literal;
    std::vector< query > args;
    qvalue literal;
    std::string name;
};

namespace
{

query node( qop op, std::vector< query > args = {}, std::string name = {} )
{
    auto n = std::make_shared< query_node >();
    n->op = op;
    n->args = std::move( args );
    n->name = std::move( name );
    return n;
}

query literal( qvalue v )
{
    auto n = std::make_shared< query_node >();
    n->op = qop::literal;
    n->literal = std::move( v );
    return n;
}

class query_parser
{
    token_stream _ts;

    bool sym( std::string_view s ) const
    {
        const auto& t = _ts.peek();
        return t.kind == token_kind::symbol && t.text == s;
    }

public:
    explicit query_parser( std::string_view text ) : _ts{ tokenize( text ) } {}

    query run()
    {
        auto q = equiv();
        if ( !_ts.at_end() )
            _ts.fail( "unexpected input in formula" );
        return q;
    }

private:
    query equiv()
    {
        auto l = implies();
        while ( sym( "<=>" ) )
        {
            _ts.next();
            l = node( qop::equiv, { l, implies() } );
        }
        return l;
    }

    query implies()
    {
        auto l = disjunction();
        while ( sym( "=>" ) )
        {
            _ts.next();
            l = node( qop::implies, { l, disjunction() } );
        }
        return l;
    }

    query disjunction()
    {
        auto l = conjunction();
        while ( _ts.peek().is( "or" ) )
        {
            _ts.next();
            l = node( qop::or_, { l, conjunction() } );
        }
        return l;
    }

    query conjunction()
    {
        auto l = negation();
        while ( sym( "&" ) )
        {
            _ts.next();
            l = node( qop::and_, { l, negation() } );
        }
        return l;
    }

    query negation()
    {
        if ( _ts.peek().is( "not" ) )
        {
            _ts.next();
            return node( qop::not_, { negation() } );
        }
        return comparison();
    }

    query comparison()
    {
        auto l = maplet();
        static const std::pair< std::string_view, qop > ops[] = {
            { "=", qop::eq },     { "/=", qop::neq },       { "<", qop::lt },      { "<=", qop::le },
            { ">", qop::gt },     { ">=", qop::ge },        { ":", qop::member },  { "/:", qop::not_member },
            { "<:", qop::subset },
        };
        for ( const auto& [ s, op ] : ops )
        {
            if ( sym( s ) )
            {
                _ts.next();
                return node( op, { l, maplet() } );
            }
        }
        return l;
    }

    query maplet()
    {
        auto l = set_ops();
        while ( sym( "|->" ) )
        {
            _ts.next();
            l = node( qop::maplet, { l, set_ops() } );
        }
        return l;
    }

    query set_ops()
    {
        auto l = additive();
        while ( sym( "\\/" ) || sym( "/\\" ) )
        {
            const auto op = _ts.next().text == "\\/" ? qop::union_ : qop::inter;
            l = node( op, { l, additive() } );
        }
        return l;
    }

    query additive()
    {
        auto l = multiplicative();
        while ( sym( "+" ) || sym( "-" ) )
        {
            const auto op = _ts.next().text == "+" ? qop::add : qop::sub;
            l = node( op, { l, multiplicative() } );
        }
        return l;
    }

    query multiplicative()
    {
        auto l = unary();
        while ( sym( "*" ) || sym( "/" ) )
        {
            const auto op = _ts.next().text == "*" ? qop::mul : qop::div;
            l = node( op, { l, unary() } );
        }
        return l;
    }

    query unary()
    {
        if ( sym( "-" ) )
        {
            _ts.next();
            return node( qop::neg, { unary() } );
        }
        return postfix();
    }

    std::vector< query > arguments()
    {
        std::vector< query > args;
        if ( !_ts.peek().is( ")" ) )
        {
            args.push_back( equiv() );
            while ( _ts.accept( "," ) )
                args.push_back( equiv() );
        }
        _ts.expect( ")" );
        return args;
    }

    query postfix()
    {
        auto q = primary();
        while ( true )
        {
            if ( _ts.peek().is( "(" ) )
            {
                _ts.next();
                auto args = arguments();
                if ( q->op == qop::name )
                    q = node( qop::call, std::move( args ), q->name );
                else
                {
                    args.insert( args.begin(), q );
                    q = node( qop::apply, std::move( args ) );
                }
            }
            else if ( _ts.peek().is( "[" ) )
            {
                _ts.next();
                auto s = equiv();
                _ts.expect( "]" );
                q = node( qop::image, { q, s } );
            }
            else if ( sym( "~" ) )
            {
                _ts.next();
                q = node( qop::inverse, { q } );
            }
            else
                return q;
        }
    }

    query primary()
    {
        const auto t = _ts.peek();
        switch ( t.kind )
        {
        case token_kind::integer:
        case token_kind::decimal: _ts.next(); return literal( qvalue::number( std::stod( t.text ) ) );
        case token_kind::string: _ts.next(); return literal( qvalue::text( t.text ) );
        case token_kind::identifier:
            _ts.next();
            if ( t.text == "TRUE" || t.text == "true" )
                return literal( qvalue::boolean( true ) );
            if ( t.text == "FALSE" || t.text == "false" )
                return literal( qvalue::boolean( false ) );
            return node( qop::name, {}, t.text );
        default: break;
        }
        if ( t.is( "(" ) )
        {
            _ts.next();
            auto q = equiv();
            while ( _ts.accept( "," ) )
                q = node( qop::maplet, { q, equiv() } );
            _ts.expect( ")" );
            return q;
        }
        if ( t.is( "{" ) )
        {
            _ts.next();
            std::vector< query > items;
            if ( !_ts.peek().is( "}" ) )
            {
                items.push_back( equiv() );
                while ( _ts.accept( "," ) )
                    items.push_back( equiv() );
            }
            _ts.expect( "}" );
            return node( qop::set_lit, std::move( items ) );
        }
        if ( t.is( "[" ) )
        {
            _ts.next();
            auto lo = equiv();
            _ts.expect( "," );
            auto hi = equiv();
            _ts.expect( "]" );
            return node( qop::interval, { lo, hi } );
        }
        _ts.fail( "expected a value in formula" );
    }
};

const char* spelling( qop op )
{
    switch ( op )
    {
    case qop::maplet: return " |-> ";
    case qop::equiv: return " <=> ";
    case qop::implies: return " => ";
    case qop::or_: return " or ";
    case qop::and_: return " & ";
    case qop::eq: return " = ";
    case qop::neq: return " /= ";
    case qop::lt: return " < ";
    case qop::le: return " <= ";
    case qop::gt: return " > ";
    case qop::ge: return " >= ";
    case qop::member: return " : ";
    case qop::not_member: return " /: ";
    case qop::subset: return " <: ";
    case qop::union_: return " \\/ ";
    case qop::inter: return " /\\ ";
    case qop::add: return " + ";
    case qop::sub: return " - ";
    case qop::mul: return " * ";
    case qop::div: return " / ";
    default: return " ? ";
    }
}

void print( const query& q, std::string& out )
{
    auto list = [ & ]( std::size_t from )
    {
        for ( std::size_t i = from; i < q->args.size(); ++i )
        {
            if ( i > from )
                out += ", ";
            print( q->args[ i ], out );
        }
    };
    switch ( q->op )
    {
    case qop::literal:
        if ( q->literal.type() == qvalue::kind::text )
            out += "\"" + q->literal.as_text() + "\"";
        else
            out += q->literal.str();
        return;
    case qop::name: out += q->name; return;
    case qop::call:
        out += q->name + "(";
        list( 0 );
        out += ")";
        return;
    case qop::apply:
        out += "(";
        print( q->args[ 0 ], out );
        out += ")(";
        list( 1 );
        out += ")";
        return;
    case qop::image:
        out += "(";
        print( q->args[ 0 ], out );
        out += ")[";
        print( q->args[ 1 ], out );
        out += "]";
        return;
    case qop::inverse:
        out += "(";
        print( q->args[ 0 ], out );
        out += ")~";
        return;
    case qop::set_lit:
        out += "{";
        list( 0 );
        out += "}";
        return;
    case qop::interval:
        out += "[";
        list( 0 );
        out += "]";
        return;
    case qop::not_:
        out += "not(";
        print( q->args[ 0 ], out );
        out += ")";
        return;
    case qop::neg:
        out += "-(";
        print( q->args[ 0 ], out );
        out += ")";
        return;
    default:
        out += "(";
        print( q->args[ 0 ], out );
        out += spelling( q->op );
        print( q->args[ 1 ], out );
        out += ")";
        return;
    }
}

double num( const qvalue& v, const char* what )
{
    if ( v.type() != qvalue::kind::number )
        throw query_error( std::string( what ) + " needs a number, got " + v.str() );
    return v.as_number();
}

bool truth( const qvalue& v )
{
    if ( v.type() != qvalue::kind::boolean )
        throw query_error( "expected a truth value, got " + v.str() );
    return v.as_bool();
}

const std::vector< qvalue >& elements( const qvalue& v, const char* what )
{
    if ( v.type() != qvalue::kind::set || v.is_interval() )
        throw query_error( std::string( what ) + " needs a finite set, got " + v.str() );
    return v.items();
}

qvalue apply( const qvalue& rel, const qvalue& key )
{
    const qvalue* hit = nullptr;
    for ( const auto& p : elements( rel, "application" ) )
    {
        if ( p.type() != qvalue::kind::pair )
            throw query_error( "application of a set that is not a relation" );
        if ( p.first() == key )
        {
            if ( hit && !( *hit == p.second() ) )
                throw query_error( "relation is not functional at " + key.str() );
            hit = &p.second();
        }
    }
    if ( !hit )
        throw query_error( "no value for " + key.str() );
    return *hit;
}

qvalue eval( const query& q, const query_env& env );

qvalue extreme( const qvalue& v, bool want_min, const char* what )
{
    std::vector< qvalue > xs;
    if ( v.type() == qvalue::kind::pair )
        xs = { v.first(), v.second() };
    else if ( v.type() == qvalue::kind::set && v.is_interval() )
        return want_min ? v.items()[ 0 ] : v.items()[ 1 ];
    else
        xs = elements( v, what );
    if ( xs.empty() )
        throw query_error( std::string( what ) + " of an empty set" );
    for ( const auto& x : xs )
        num( x, what );
    return want_min ? *std::min_element( xs.begin(), xs.end() ) : *std::max_element( xs.begin(), xs.end() );
}

qvalue call( const query& q, const query_env& env )
{
    std::vector< qvalue > args;
    for ( const auto& a : q->args )
        args.push_back( eval( a, env ) );
    const auto& n = q->name;

    if ( const auto it = env.find( n ); it != env.end() )
    {
        if ( args.size() != 1 )
            throw query_error( n + " takes exactly one argument" );
        return apply( it->second, args[ 0 ] );
    }

    auto one = [ & ]() -> const qvalue&
    {
        if ( args.size() != 1 )
            throw query_error( n + " takes exactly one argument" );
        return args[ 0 ];
    };
    if ( n == "card" )
        return qvalue::number( static_cast< double >( elements( one(), "card" ).size() ) );
    if ( n == "min" )
        return extreme( one(), true, "min" );
    if ( n == "max" )
        return extreme( one(), false, "max" );
    if ( n == "abs" )
        return qvalue::number( std::fabs( num( one(), "abs" ) ) );
    if ( n == "dom" || n == "ran" )
    {
        std::vector< qvalue > out;
        for ( const auto& p : elements( one(), n.c_str() ) )
        {
            if ( p.type() != qvalue::kind::pair )
                throw query_error( n + " of a set that is not a relation" );
            out.push_back( n == "dom" ? p.first() : p.second() );
        }
        return qvalue::set( std::move( out ) );
    }
    if ( n.size() > 2 && n[ 1 ] == '_' && ( n[ 0 ] == 'R' || n[ 0 ] == 'S' || n[ 0 ] == 'T' || n[ 0 ] == 'Z' ) )
        throw query_error( "no artifact is bound to " + n );

    // An unbound call spells an event label such as Send_cmd(cmd_cars_r).
    std::string label = n + "(";
    for ( std::size_t i = 0; i < args.size(); ++i )
        label += ( i ? "," : "" ) + args[ i ].str();
    return qvalue::text( label + ")" );
}

qvalue eval( const query& q, const query_env& env )
{
    auto arg = [ & ]( std::size_t i ) { return eval( q->args[ i ], env ); };
    switch ( q->op )
    {
    case qop::literal: return q->literal;
    case qop::name:
    {
        const auto it = env.find( q->name );
        if ( it != env.end() )
            return it->second;
        const auto& n = q->name;
        if ( n.size() > 2 && n[ 1 ] == '_' && ( n[ 0 ] == 'R' || n[ 0 ] == 'S' || n[ 0 ] == 'T' || n[ 0 ] == 'Z' ) )
            throw query_error( "no artifact is bound to " + n );
        return qvalue::text( n );
    }
    case qop::call: return call( q, env );
    case qop::apply:
    {
        if ( q->args.size() != 2 )
            throw query_error( "application takes exactly one argument" );
        return apply( arg( 0 ), arg( 1 ) );
    }
    case qop::image:
    {
        const auto rel = arg( 0 );
        const auto keys = arg( 1 );
        std::vector< qvalue > out;
        for ( const auto& p : elements( rel, "image" ) )
        {
            if ( p.type() != qvalue::kind::pair )
                throw query_error( "image of a set that is not a relation" );
            if ( keys.contains( p.first() ) )
                out.push_back( p.second() );
        }
        return qvalue::set( std::move( out ) );
    }
    case qop::inverse:
    {
        const auto rel = arg( 0 );
        std::vector< qvalue > out;
        for ( const auto& p : elements( rel, "inverse" ) )
        {
            if ( p.type() != qvalue::kind::pair )
                throw query_error( "inverse of a set that is not a relation" );
            out.push_back( qvalue::pair( p.second(), p.first() ) );
        }
        return qvalue::set( std::move( out ) );
    }
    case qop::set_lit:
    {
        std::vector< qvalue > out;
        for ( std::size_t i = 0; i < q->args.size(); ++i )
            out.push_back( arg( i ) );
        return qvalue::set( std::move( out ) );
    }
    case qop::interval: return qvalue::interval( num( arg( 0 ), "interval" ), num( arg( 1 ), "interval" ) );
    case qop::maplet: return qvalue::pair( arg( 0 ), arg( 1 ) );
    case qop::equiv: return qvalue::boolean( truth( arg( 0 ) ) == truth( arg( 1 ) ) );
    case qop::implies: return qvalue::boolean( !truth( arg( 0 ) ) || truth( arg( 1 ) ) );
    case qop::or_:
    {
        const bool a = truth( arg( 0 ) );
        const bool b = truth( arg( 1 ) );
        return qvalue::boolean( a || b );
    }
    case qop::and_:
    {
        const bool a = truth( arg( 0 ) );
        const bool b = truth( arg( 1 ) );
        return qvalue::boolean( a && b );
    }
    case qop::not_: return qvalue::boolean( !truth( arg( 0 ) ) );
    case qop::eq: return qvalue::boolean( arg( 0 ) == arg( 1 ) );
    case qop::neq: return qvalue::boolean( !( arg( 0 ) == arg( 1 ) ) );
    case qop::lt: return qvalue::boolean( num( arg( 0 ), "<" ) < num( arg( 1 ), "<" ) );
    case qop::le: return qvalue::boolean( num( arg( 0 ), "<=" ) <= num( arg( 1 ), "<=" ) );
    case qop::gt: return qvalue::boolean( num( arg( 0 ), ">" ) > num( arg( 1 ), ">" ) );
    case qop::ge: return qvalue::boolean( num( arg( 0 ), ">=" ) >= num( arg( 1 ), ">=" ) );
    case qop::member: return qvalue::boolean( arg( 1 ).contains( arg( 0 ) ) );
    case qop::not_member: return qvalue::boolean( !arg( 1 ).contains( arg( 0 ) ) );
    case qop::subset:
    {
        const auto a = arg( 0 );
        const auto b = arg( 1 );
        const auto& xs = elements( a, "subset" );
        return qvalue::boolean(
                std::all_of( xs.begin(), xs.end(), [ & ]( const qvalue& x ) { return b.contains( x ); } ) );
    }
    case qop::union_:
    case qop::inter:
    {
        const auto a = arg( 0 );
        const auto b = arg( 1 );
        const auto& xs = elements( a, "set operation" );
        const auto& ys = elements( b, "set operation" );
        std::vector< qvalue > out;
        if ( q->op == qop::union_ )
        {
            out = xs;
            out.insert( out.end(), ys.begin(), ys.end() );
        }
        else
            std::copy_if( xs.begin(), xs.end(), std::back_inserter( out ),
                          [ & ]( const qvalue& x ) { return b.contains( x ); } );
        return qvalue::set( std::move( out ) );
    }
    case qop::add: return qvalue::number( num( arg( 0 ), "+" ) + num( arg( 1 ), "+" ) );
    case qop::sub: return qvalue::number( num( arg( 0 ), "-" ) - num( arg( 1 ), "-" ) );
    case qop::mul: return qvalue::number( num( arg( 0 ), "*" ) * num( arg( 1 ), "*" ) );
    case qop::div:
    {
        const auto a = num( arg( 0 ), "/" );
        const auto b = num( arg( 1 ), "/" );
        if ( b == 0 )
            throw query_error( "division by zero" );
        return qvalue::number( a / b );
    }
    case qop::neg: return qvalue::number( -num( arg( 0 ), "-" ) );
    }
    throw query_error( "unknown formula node" );
}

void collect( const query& q, std::set< std::string >& out )
{
    if ( q->op == qop::name || q->op == qop::call )
    {
        const auto& n = q->name;
        if ( n.size() > 2 && n[ 1 ] == '_' && ( n[ 0 ] == 'R' || n[ 0 ] == 'S' || n[ 0 ] == 'T' || n[ 0 ] == 'Z' ) )
            out.insert( n );
    }
    for ( const auto& a : q->args )
        collect( a, out );
}

} // namespace

query parse_query( std::string_view text )
{
    try
    {
        return query_parser{ text }.run();
    }
    catch ( const model_error& e )
    {
        throw query_error( e.what() );
    }
}

std::string to_string( const query& q )
{
    std::string out;
    print( q, out );
    return out;
}

qvalue eval_query( const query& q, const query_env& env )
{
    return eval( q, env );
}

bool check_query( std::string_view text, const query_env& env )
{
    return truth( eval_query( parse_query( text ), env ) );
}

std::vector< std::string > query_bindings( const query& q )
{
    std::set< std::string > out;
    collect( q, out );
    return { out.begin(), out.end() };
}

} // namespace vove
