#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ahgeom/errors.hpp"

namespace ahgeom {

enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sqrt, Atan };

/// Name lookup for the allowed function set; returns false for anything else.
bool lookup_function(std::string_view name, Func& out);
std::string_view function_name(Func f);

/// A compiled real-valued expression over indexed variables.
///
/// Nodes are kept in postfix order so evaluation is a single pass over a small
/// value stack. Trees come from parse_expression; equality is structural.
class Expr {
public:
    enum class Op : std::uint8_t { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

    struct Node {
        Op op;
        Func func = Func::Sin;
        int variable = 0;
        double value = 0.0;
        friend bool operator==(const Node&, const Node&) = default;
    };

    Expr() = default;
    static Expr constant(double v);
    explicit Expr(std::vector<Node> postfix);

    /// Value at `vars`. Returns NaN or inf when the expression is undefined there;
    /// callers decide how to report it.
    double evaluate(std::span<const double> vars) const;

    /// True if every intermediate result at `vars` is finite; on failure `where`
    /// describes the first offending operation.
    bool evaluate_checked(std::span<const double> vars, double& out, std::string& where) const;

    /// Canonical text with minimal parentheses; reparses to an equal tree.
    std::string to_string(std::span<const std::string> names) const;

    bool is_constant() const { return nodes_.size() == 1 && nodes_[0].op == Op::Number; }
    const std::vector<Node>& nodes() const { return nodes_; }

    friend bool operator==(const Expr& a, const Expr& b) { return a.nodes_ == b.nodes_; }

private:
    std::vector<Node> nodes_;
    int depth_ = 0;
};

/// Failure while reading chart or expression text.
struct SyntaxIssue {
    enum class Kind { Syntax, UndeclaredIdentifier, DimensionMismatch, Conflict, Missing, Value };
    Kind kind;
    int line;
    int column;  // 1-based; 0 when the issue is not tied to a column
    std::string message;
};

std::string to_string(SyntaxIssue::Kind k);

class ChartError : public Error {
public:
    explicit ChartError(SyntaxIssue issue);
    const SyntaxIssue& issue() const { return issue_; }

private:
    SyntaxIssue issue_;
};

/// Parses one expression. Identifiers resolve against `names` (variable i is names[i]).
/// Columns in issues are offset by `column_offset`. Throws ChartError.
Expr parse_expression(std::string_view text, std::span<const std::string> names, int line = 1,
                      int column_offset = 0);

}  // namespace ahgeom
