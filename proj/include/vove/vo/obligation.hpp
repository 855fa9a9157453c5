#pragma once

#include "vove/vo/task.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace vove
{

struct vo_node
{
    enum class kind
    {
        leaf,
        negation,
        sequence,
        conjunction,
        disjunction,
        implication,
        equivalence
    };

    kind op = kind::leaf;
    std::string task;  // leaf only
    std::shared_ptr< const vo_node > left;
    std::shared_ptr< const vo_node > right;  // null for negation
};

using vo_expr = std::shared_ptr< const vo_node >;

struct vo_decl
{
    std::string id;
    std::vector< std::string > validates;
    vo_expr expr;
};

bool same_tree( const vo_expr& a, const vo_expr& b );

// ASCII rendering with the minimal parentheses.
std::string to_string( const vo_expr& e );
std::string to_string( const vo_decl& vo );

vo_expr parse_vo_expr( std::string_view text );
// `ID [validates R1, R2]: expression`
vo_decl parse_vo( std::string_view line );

// Leaf task ids in left-to-right order, duplicates kept.
std::vector< std::string > leaves( const vo_expr& e );

struct vo_file
{
    std::vector< vt_decl > tasks;
    std::vector< vo_decl > obligations;
};

// Task declarations are the lines whose id is followed by `/`.
vo_file parse_vo_file( std::string_view text, const std::set< std::string >* artifacts = nullptr );
vo_file load_vo_file( const std::string& file, const std::set< std::string >* artifacts = nullptr );

} // namespace vove
