#pragma once

// Expression language for functions, 1-forms and planar fields.
//
//   expr    := term (('+' | '-') term)*
//   term    := ['+' | '-'] factor (['*'] factor)*
//   factor  := atom ('^' integer)?
//   atom    := number | variable | covector | 'd' '(' expr ')' | '(' expr ')'
//
// Numbers are non-negative integers or p/q. Variables come from one family:
// letters x, y, z, u, t or indexed x1..x9 or z1..z9. Covectors prefix a
// variable with d (dx, dt, dx3). Juxtaposition multiplies.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "foliation/forms.hpp"

namespace foliation {

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& msg, int line, int column);
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

struct Expr {
    enum class Kind { number, variable, covector, d, sum, product, power, negate };
    Kind kind = Kind::number;
    Rational value{0};     // number
    std::string name;      // variable / covector (the variable's name)
    int exponent = 0;      // power
    std::vector<Expr> children;

    friend bool operator==(const Expr& a, const Expr& b);
};

struct FormExpression {
    std::string source;
    Expr ast;
    // Variable names in slot order.
    std::vector<std::string> universe;
};

struct ParseOptions {
    int order = 10;
    // Pads the universe with unused names of the same family up to this size.
    int min_nvars = 0;
    // Explicit slot names; every variable used must be listed.
    std::vector<std::string> universe;
};

FormExpression parse_expression(std::string_view text, const ParseOptions& options = {});

// Fully parenthesized where needed so that parsing the output gives the same tree.
std::string print(const Expr& e);

// 1-form (or function promoted by the caller) through options.order.
// Type errors (products of two covectors, mixed degrees, d of a 1-form)
// are PreconditionErrors; syntax errors are ParseErrors.
KForm to_form(const FormExpression& fe, int order);
KForm parse_form(std::string_view text, const ParseOptions& options = {});

// A polynomial function (no covectors).
TruncatedSeries parse_function(std::string_view text, const ParseOptions& options = {});

// Comma-separated components "P, Q" of a vector field over a shared universe.
std::vector<TruncatedSeries> parse_field(std::string_view text, const ParseOptions& options = {});

// Names for n slots in a family ("x" letters or "x1"-style).
std::vector<std::string> variable_names(int nvars, bool indexed = false);

}  // namespace foliation
