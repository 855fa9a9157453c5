#include "vove/model/machine.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

namespace vove
{

std::optional< int > machine::find_variable( std::string_view n ) const
{
    for ( std::size_t i = 0; i < variables.size(); ++i )
        if ( variables[ i ].name == n )
            return static_cast< int >( i );
    return std::nullopt;
}

std::optional< std::pair< int, int > > machine::find_element( std::string_view n ) const
{
    for ( std::size_t s = 0; s < sets.size(); ++s )
        for ( std::size_t e = 0; e < sets[ s ].elements.size(); ++e )
            if ( sets[ s ].elements[ e ] == n )
                return std::pair{ static_cast< int >( s ), static_cast< int >( e ) };
    return std::nullopt;
}

std::optional< int > machine::find_set( std::string_view n ) const
{
    for ( std::size_t s = 0; s < sets.size(); ++s )
        if ( sets[ s ].name == n )
            return static_cast< int >( s );
    return std::nullopt;
}

std::string machine::element_name( int set, int index ) const
{
    const auto& els = sets.at( static_cast< std::size_t >( set ) ).elements;
    if ( index < 0 || static_cast< std::size_t >( index ) >= els.size() )
        return "?" + std::to_string( index );
    return els[ static_cast< std::size_t >( index ) ];
}

std::optional< int > machine::find_operation( std::string_view n ) const
{
    for ( std::size_t i = 0; i < operations.size(); ++i )
        if ( operations[ i ].name == n )
            return static_cast< int >( i );
    return std::nullopt;
}

std::string machine::value_name( const type& t, value_t v ) const
{
    switch ( t.t )
    {
    case type::tag::element: return element_name( t.set, v );
    case type::tag::boolean: return v ? "TRUE" : "FALSE";
    default: return std::to_string( v );
    }
}

std::string machine::value_name( int var, value_t v ) const
{
    return value_name( variables.at( static_cast< std::size_t >( var ) ).ty, v );
}

std::size_t machine::domain_size( int var ) const
{
    const auto& d = variables.at( static_cast< std::size_t >( var ) );
    return static_cast< std::size_t >( static_cast< std::int64_t >( d.hi ) - d.lo + 1 );
}

std::vector< param_decl > machine::param_decls( const operation& op ) const
{
    std::vector< param_decl > out;
    for ( const auto& p : op.params )
        out.push_back( { p.name, type::element( p.set ) } );
    return out;
}

expr machine::parse_predicate( std::string_view text, const operation* op ) const
{
    const auto params = op ? param_decls( *op ) : std::vector< param_decl >{};
    return resolve_predicate( parse_expression( text ), *this, params );
}

namespace
{

struct raw_assign
{
    std::string target;
    source_pos pos;
    expr rhs;
};

struct raw_set
{
    std::string name;
    source_pos pos;
    std::vector< std::pair< std::string, source_pos > > elements;
};

struct raw_op
{
    std::string name;
    source_pos pos;
    std::vector< std::pair< std::string, source_pos > > params;
    expr guard;
    std::vector< raw_assign > effects;
};

struct raw_machine
{
    std::string name;
    bool refinement = false;
    std::string refines;
    std::vector< raw_set > sets;
    std::vector< std::pair< std::string, source_pos > > variables;
    expr invariant;
    std::vector< std::vector< raw_assign > > init;
    std::vector< raw_op > ops;
};

bool is_section( const token& t )
{
    return t.kind == token_kind::identifier
           && ( t.text == "SETS" || t.text == "VARIABLES" || t.text == "INVARIANT" || t.text == "INITIALISATION"
                || t.text == "OPERATIONS" || t.text == "END" );
}

class machine_parser
{
    token_stream _ts;

public:
    explicit machine_parser( std::string_view text ) : _ts{ tokenize( text ) } {}

    raw_machine run()
    {
        raw_machine m;
        if ( _ts.accept( "REFINEMENT" ) )
            m.refinement = true;
        else
            _ts.expect( "MACHINE" );
        m.name = _ts.expect_identifier();
        if ( m.refinement )
        {
            _ts.expect( "REFINES" );
            m.refines = _ts.expect_identifier();
        }

        std::set< std::string > seen;
        while ( !_ts.peek().is( "END" ) )
        {
            const auto& t = _ts.peek();
            if ( !is_section( t ) )
                _ts.fail( "expected a section keyword" );
            if ( !seen.insert( t.text ).second )
                _ts.fail( "duplicate section" );
            const auto section = _ts.next().text;
            if ( section == "SETS" )
                sets( m );
            else if ( section == "VARIABLES" )
            {
                do
                {
                    const auto pos = _ts.peek().pos;
                    m.variables.emplace_back( _ts.expect_identifier(), pos );
                } while ( _ts.accept( "," ) );
            }
            else if ( section == "INVARIANT" )
                m.invariant = parse_expression( _ts );
            else if ( section == "INITIALISATION" )
                m.init = initialisation();
            else if ( section == "OPERATIONS" )
                operations( m );
        }
        _ts.expect( "END" );
        if ( !_ts.at_end() )
            _ts.fail( "unexpected input after END" );
        return m;
    }

private:
    void sets( raw_machine& m )
    {
        do
        {
            if ( is_section( _ts.peek() ) )
                break;
            raw_set s;
            s.pos = _ts.peek().pos;
            s.name = _ts.expect_identifier();
            _ts.expect( "=" );
            _ts.expect( "{" );
            do
            {
                const auto pos = _ts.peek().pos;
                s.elements.emplace_back( _ts.expect_identifier(), pos );
            } while ( _ts.accept( "," ) );
            _ts.expect( "}" );
            m.sets.push_back( std::move( s ) );
        } while ( _ts.accept( ";" ) );
    }

    std::vector< raw_assign > parallel()
    {
        std::vector< raw_assign > out;
        if ( _ts.accept( "skip" ) )
            return out;
        do
        {
            raw_assign a;
            a.pos = _ts.peek().pos;
            a.target = _ts.expect_identifier();
            _ts.expect( ":=" );
            a.rhs = parse_expression( _ts );
            out.push_back( std::move( a ) );
        } while ( _ts.accept( "||" ) );
        return out;
    }

    std::vector< std::vector< raw_assign > > initialisation()
    {
        std::vector< std::vector< raw_assign > > out;
        if ( _ts.accept( "CHOICE" ) )
        {
            do
                out.push_back( block() );
            while ( _ts.accept( "OR" ) );
            _ts.expect( "END" );
        }
        else
            out.push_back( block() );
        return out;
    }

    std::vector< raw_assign > block()
    {
        if ( _ts.accept( "BEGIN" ) )
        {
            auto body = parallel();
            _ts.expect( "END" );
            return body;
        }
        return parallel();
    }

    void operations( raw_machine& m )
    {
        while ( !is_section( _ts.peek() ) )
        {
            raw_op op;
            op.pos = _ts.peek().pos;
            op.name = _ts.expect_identifier();
            if ( _ts.accept( "(" ) )
            {
                do
                {
                    const auto pos = _ts.peek().pos;
                    op.params.emplace_back( _ts.expect_identifier(), pos );
                } while ( _ts.accept( "," ) );
                _ts.expect( ")" );
            }
            _ts.expect( "=" );
            if ( _ts.accept( "SELECT" ) )
            {
                op.guard = parse_expression( _ts );
                _ts.expect( "THEN" );
                op.effects = parallel();
                _ts.expect( "END" );
            }
            else
                op.effects = block();
            m.ops.push_back( std::move( op ) );
            if ( !_ts.accept( ";" ) )
                break;
        }
    }
};

class builder
{
    std::vector< diagnostic > _diags;
    machine _m;

    template< typename F >
    void guarded( F&& f )
    {
        try
        {
            f();
        }
        catch ( const model_error& e )
        {
            _diags.insert( _diags.end(), e.diagnostics().begin(), e.diagnostics().end() );
        }
    }

    void error( diag_kind kind, source_pos pos, std::string msg ) { _diags.push_back( { kind, pos, std::move( msg ) } ); }

public:
    machine run( const raw_machine& raw )
    {
        _m.name = raw.name;
        _m.refinement = raw.refinement;
        _m.refines = raw.refines;

        std::set< std::string > names;
        auto claim = [ & ]( const std::string& n, source_pos pos, const char* what )
        {
            if ( !names.insert( n ).second )
            {
                error( diag_kind::duplicate_name, pos, std::string( what ) + " '" + n + "' is already declared" );
                return false;
            }
            return true;
        };

        for ( const auto& s : raw.sets )
        {
            claim( s.name, s.pos, "set" );
            enum_set es{ s.name, {} };
            for ( const auto& [ el, pos ] : s.elements )
                if ( claim( el, pos, "element" ) )
                    es.elements.push_back( el );
            if ( es.elements.empty() )
                error( diag_kind::type_mismatch, s.pos, "set '" + s.name + "' is empty" );
            _m.sets.push_back( std::move( es ) );
        }
        for ( const auto& [ v, pos ] : raw.variables )
            if ( claim( v, pos, "variable" ) )
                _m.variables.push_back( { v, {}, 0, 0 } );

        type_variables( raw );
        if ( raw.invariant )
            guarded( [ & ] { _m.invariant = resolve_predicate( raw.invariant, _m ); } );
        if ( !_m.invariant )
            _m.invariant = make_bool( true );
        guarded( [ & ] { _m.invariant_code = _m.compile( _m.invariant ); } );

        for ( const auto& alt : raw.init )
        {
            init_block block;
            guarded( [ & ] { block = assignments( alt, {}, true ); } );
            _m.initialisation.push_back( std::move( block ) );
        }
        if ( raw.init.empty() )
        {
            if ( !_m.variables.empty() )
                error( diag_kind::init_violates_type, { 0, 0 }, "missing INITIALISATION" );
            _m.initialisation.emplace_back();
        }

        std::set< std::string > op_names;
        for ( const auto& r : raw.ops )
        {
            if ( !op_names.insert( r.name ).second )
                error( diag_kind::duplicate_name, r.pos, "operation '" + r.name + "' is already declared" );
            guarded( [ & ] { _m.operations.push_back( build_op( r, names ) ); } );
        }

        if ( !_diags.empty() )
            throw model_error( std::move( _diags ) );
        return std::move( _m );
    }

private:
    void type_variables( const raw_machine& raw )
    {
        std::vector< bool > typed( _m.variables.size(), false );
        if ( raw.invariant )
        {
            for ( const auto& c : conjuncts( raw.invariant ) )
            {
                if ( c->kind != expr_kind::member || c->args[ 0 ]->kind != expr_kind::name )
                    continue;
                const auto v = _m.find_variable( c->args[ 0 ]->name );
                if ( !v || typed[ static_cast< std::size_t >( *v ) ] )
                    continue;
                guarded( [ & ] {
                    type_variable( *v, c->args[ 1 ] );
                    typed[ static_cast< std::size_t >( *v ) ] = true;
                } );
            }
        }
        for ( std::size_t i = 0; i < typed.size(); ++i )
            if ( !typed[ i ] && _m.variables[ i ].ty.t == type::tag::unknown )
                error( diag_kind::type_mismatch, raw.variables[ i ].second,
                       "variable '" + _m.variables[ i ].name + "' has no typing conjunct 'v : SET' or 'v : lo..hi'" );
    }

    void type_variable( int v, const expr& domain )
    {
        auto& d = _m.variables[ static_cast< std::size_t >( v ) ];
        const auto r = resolve( domain, _m );
        auto constant = [ & ]( const expr& e )
        {
            const auto p = _m.compile( e );
            if ( p.reads_variables() )
                throw model_error( diag_kind::type_mismatch, e->pos, "type bound must be constant" );
            return p.eval( {} );
        };
        if ( r->ty.t == type::tag::element_set )
        {
            d.ty = type::element( r->ty.set );
            d.lo = 0;
            d.hi = static_cast< value_t >( _m.set_size( r->ty.set ) ) - 1;
        }
        else if ( r->kind == expr_kind::range )
        {
            d.ty = type::integer();
            d.lo = constant( r->args[ 0 ] );
            d.hi = constant( r->args[ 1 ] );
            if ( d.lo > d.hi )
                throw model_error( diag_kind::type_mismatch, r->pos, "empty range for '" + d.name + "'" );
        }
        else if ( r->kind == expr_kind::set_lit && r->ty.t == type::tag::integer_set )
        {
            d.ty = type::integer();
            d.lo = constant( r->args[ 0 ] );
            d.hi = d.lo;
            for ( const auto& a : r->args )
            {
                const auto x = constant( a );
                d.lo = std::min( d.lo, x );
                d.hi = std::max( d.hi, x );
            }
        }
        else
            throw model_error( diag_kind::type_mismatch, r->pos, "cannot derive a type for '" + d.name + "'" );
    }

    init_block assignments( const std::vector< raw_assign >& raw, const std::vector< param_decl >& params, bool init )
    {
        init_block out;
        std::vector< bool > assigned( _m.variables.size(), false );
        std::vector< diagnostic > local;
        for ( const auto& a : raw )
        {
            try
            {
                const auto v = _m.find_variable( a.target );
                if ( !v )
                    throw model_error( diag_kind::unknown_identifier, a.pos,
                                       "assignment target '" + a.target + "' is not a variable" );
                if ( assigned[ static_cast< std::size_t >( *v ) ] )
                    throw model_error( diag_kind::duplicate_name, a.pos,
                                       "variable '" + a.target + "' assigned twice" );
                assigned[ static_cast< std::size_t >( *v ) ] = true;
                auto rhs = resolve( a.rhs, _m, params );
                const auto& want = _m.variables[ static_cast< std::size_t >( *v ) ].ty;
                if ( rhs->ty != want )
                    throw model_error( init ? diag_kind::init_violates_type : diag_kind::type_mismatch, a.pos,
                                       "value '" + to_string( a.rhs ) + "' does not fit the type of '" + a.target
                                               + "'" );
                auto code = _m.compile( rhs );
                if ( init && code.reads_variables() )
                    throw model_error( diag_kind::init_violates_type, a.pos,
                                       "initialisation of '" + a.target + "' reads state variables" );
                out.push_back( { *v, rhs, std::move( code ) } );
            }
            catch ( const model_error& e )
            {
                local.insert( local.end(), e.diagnostics().begin(), e.diagnostics().end() );
            }
        }
        if ( init )
            for ( std::size_t i = 0; i < assigned.size(); ++i )
                if ( !assigned[ i ] )
                    local.push_back( { diag_kind::init_violates_type, raw.empty() ? source_pos{ 0, 0 } : raw.front().pos,
                                       "initialisation does not assign '" + _m.variables[ i ].name + "'" } );
        if ( !local.empty() )
            throw model_error( std::move( local ) );
        return out;
    }

    operation build_op( const raw_op& r, const std::set< std::string >& names )
    {
        operation op;
        op.name = r.name;
        op.pos = r.pos;
        std::set< std::string > pnames;
        for ( const auto& [ p, pos ] : r.params )
        {
            if ( names.count( p ) || !pnames.insert( p ).second )
                throw model_error( diag_kind::duplicate_name, pos,
                                   "parameter '" + p + "' of '" + r.name + "' shadows another name" );
            op.params.push_back( { p, -1 } );
        }
        if ( r.guard )
        {
            for ( const auto& c : conjuncts( r.guard ) )
            {
                if ( c->kind != expr_kind::member || c->args[ 0 ]->kind != expr_kind::name )
                    continue;
                for ( auto& p : op.params )
                {
                    if ( p.name != c->args[ 0 ]->name || p.set >= 0 )
                        continue;
                    const auto dom = resolve( c->args[ 1 ], _m );
                    if ( dom->ty.t != type::tag::element_set )
                        throw model_error( diag_kind::type_mismatch, c->pos,
                                           "parameter '" + p.name + "' must range over an enumerated set" );
                    p.set = dom->ty.set;
                }
            }
        }
        for ( std::size_t i = 0; i < op.params.size(); ++i )
            if ( op.params[ i ].set < 0 )
                throw model_error( diag_kind::type_mismatch, r.params[ i ].second,
                                   "parameter '" + op.params[ i ].name + "' needs a typing conjunct 'p : SET' in the guard" );

        const auto params = _m.param_decls( op );
        op.guard = r.guard ? resolve_predicate( r.guard, _m, params ) : make_bool( true );
        op.guard_code = _m.compile( op.guard );
        op.effects = assignments( r.effects, params, false );
        return op;
    }
};

void print_assignments( const machine& m, const init_block& block, std::string& out )
{
    if ( block.empty() )
    {
        out += "skip";
        return;
    }
    for ( std::size_t i = 0; i < block.size(); ++i )
    {
        if ( i )
            out += " || ";
        out += m.variables[ static_cast< std::size_t >( block[ i ].target ) ].name + " := " + to_string( block[ i ].rhs );
    }
}

bool is_constant( const expr& e )
{
    if ( e->kind == expr_kind::variable || e->kind == expr_kind::parameter || e->kind == expr_kind::name )
        return false;
    return std::all_of( e->args.begin(), e->args.end(), []( const expr& a ) { return is_constant( a ); } );
}

bool same_assignments( const init_block& a, const init_block& b )
{
    if ( a.size() != b.size() )
        return false;
    for ( std::size_t i = 0; i < a.size(); ++i )
        if ( a[ i ].target != b[ i ].target || !structurally_equal( a[ i ].rhs, b[ i ].rhs ) )
            return false;
    return true;
}

} // namespace

machine parse_machine( std::string_view text )
{
    const auto raw = machine_parser{ text }.run();
    return builder{}.run( raw );
}

machine load_machine( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw model_error( diag_kind::semantics_error, "cannot read model file '" + path + "'" );
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_machine( ss.str() );
}

std::string print_machine( const machine& m )
{
    std::string out = m.refinement ? "REFINEMENT " + m.name + "\nREFINES " + m.refines + "\n" : "MACHINE " + m.name + "\n";
    if ( !m.sets.empty() )
    {
        out += "SETS\n";
        for ( std::size_t s = 0; s < m.sets.size(); ++s )
        {
            out += "    " + m.sets[ s ].name + " = {";
            for ( std::size_t e = 0; e < m.sets[ s ].elements.size(); ++e )
                out += ( e ? ", " : "" ) + m.sets[ s ].elements[ e ];
            out += s + 1 < m.sets.size() ? "};\n" : "}\n";
        }
    }
    if ( !m.variables.empty() )
    {
        out += "VARIABLES\n    ";
        for ( std::size_t v = 0; v < m.variables.size(); ++v )
            out += ( v ? ", " : "" ) + m.variables[ v ].name;
        out += "\n";
    }
    out += "INVARIANT\n    " + to_string( m.invariant ) + "\n";
    out += "INITIALISATION\n    ";
    if ( m.initialisation.size() == 1 )
        print_assignments( m, m.initialisation.front(), out );
    else
    {
        out += "CHOICE ";
        for ( std::size_t i = 0; i < m.initialisation.size(); ++i )
        {
            if ( i )
                out += " OR ";
            print_assignments( m, m.initialisation[ i ], out );
        }
        out += " END";
    }
    out += "\n";
    if ( !m.operations.empty() )
    {
        out += "OPERATIONS\n";
        for ( std::size_t i = 0; i < m.operations.size(); ++i )
        {
            const auto& op = m.operations[ i ];
            out += "    " + op.name;
            if ( !op.params.empty() )
            {
                out += "(";
                for ( std::size_t p = 0; p < op.params.size(); ++p )
                    out += ( p ? ", " : "" ) + op.params[ p ].name;
                out += ")";
            }
            out += " =\n        SELECT " + to_string( op.guard ) + "\n        THEN ";
            print_assignments( m, op.effects, out );
            out += i + 1 < m.operations.size() ? "\n        END;\n" : "\n        END\n";
        }
    }
    out += "END\n";
    return out;
}

bool structurally_equal( const machine& a, const machine& b )
{
    if ( a.name != b.name || a.refinement != b.refinement || a.refines != b.refines )
        return false;
    if ( a.sets.size() != b.sets.size() || a.variables.size() != b.variables.size()
         || a.operations.size() != b.operations.size() || a.initialisation.size() != b.initialisation.size() )
        return false;
    for ( std::size_t i = 0; i < a.sets.size(); ++i )
        if ( a.sets[ i ].name != b.sets[ i ].name || a.sets[ i ].elements != b.sets[ i ].elements )
            return false;
    for ( std::size_t i = 0; i < a.variables.size(); ++i )
    {
        const auto& x = a.variables[ i ];
        const auto& y = b.variables[ i ];
        if ( x.name != y.name || x.ty != y.ty || x.lo != y.lo || x.hi != y.hi )
            return false;
    }
    if ( !structurally_equal( a.invariant, b.invariant ) )
        return false;
    for ( std::size_t i = 0; i < a.initialisation.size(); ++i )
        if ( !same_assignments( a.initialisation[ i ], b.initialisation[ i ] ) )
            return false;
    for ( std::size_t i = 0; i < a.operations.size(); ++i )
    {
        const auto& x = a.operations[ i ];
        const auto& y = b.operations[ i ];
        if ( x.name != y.name || x.params.size() != y.params.size() || !structurally_equal( x.guard, y.guard )
             || !same_assignments( x.effects, y.effects ) )
            return false;
        for ( std::size_t p = 0; p < x.params.size(); ++p )
            if ( x.params[ p ].name != y.params[ p ].name || x.params[ p ].set != y.params[ p ].set )
                return false;
    }
    return true;
}

bool is_typing_conjunct( const machine& m, const expr& conj, const operation* op )
{
    if ( conj->kind != expr_kind::member )
        return false;
    const auto& lhs = conj->args[ 0 ];
    const auto& rhs = conj->args[ 1 ];

    value_t lo = 0;
    value_t hi = 0;
    if ( lhs->kind == expr_kind::variable )
    {
        const auto& d = m.variables.at( static_cast< std::size_t >( lhs->value ) );
        lo = d.lo;
        hi = d.hi;
    }
    else if ( lhs->kind == expr_kind::parameter && op )
    {
        const auto set = op->params.at( static_cast< std::size_t >( lhs->value ) ).set;
        hi = static_cast< value_t >( m.set_size( set ) ) - 1;
    }
    else
        return false;

    if ( rhs->kind == expr_kind::set_name )
        return lhs->ty.t == type::tag::element && rhs->set == lhs->ty.set;

    // Otherwise the right-hand side must be constant and cover exactly [lo, hi].
    if ( rhs->kind != expr_kind::range && rhs->kind != expr_kind::set_lit )
        return false;
    for ( const auto& a : rhs->args )
        if ( !is_constant( a ) )
            return false;
    const auto code = m.compile( conj );
    std::vector< value_t > vars( m.variables.size(), 0 );
    std::vector< value_t > params( op ? op->params.size() : 0, 0 );
    auto& slot = lhs->kind == expr_kind::variable ? vars[ static_cast< std::size_t >( lhs->value ) ]
                                                  : params[ static_cast< std::size_t >( lhs->value ) ];
    const auto probe = [ & ]( value_t x )
    {
        slot = x;
        return code.test( vars, params );
    };
    if ( rhs->kind == expr_kind::range )
        return probe( lo ) && probe( hi ) && ( lo == INT32_MIN || !probe( lo - 1 ) )
               && ( hi == INT32_MAX || !probe( hi + 1 ) );
    if ( hi - lo > 4096 )
        return false;
    for ( value_t x = lo; x <= hi; ++x )
        if ( !probe( x ) )
            return false;
    return true;
}

} // namespace vove
