#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "knotbend/jet.hpp"

namespace knotbend::expr {

// Grammar (see README):
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?
//   atom   := number | "u" | "pi" | "e" | ident "(" expr ")" | "(" expr ")"
// ident in {sin, cos, tan, exp, log, sqrt, abs}. "^" binds tighter than unary
// minus and is right-associative. Multiplication is always explicit.

enum class NodeKind : std::uint8_t {
    kNumber,
    kPi,
    kE,
    kVar,
    kNeg,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kPow,
    kSin,
    kCos,
    kTan,
    kExp,
    kLog,
    kSqrt,
    kAbs,
};

struct Node {
    NodeKind kind;
    double number = 0.0;
    std::uint32_t offset = 0;  // byte offset in the source this node came from
    std::shared_ptr<const Node> a, b;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string message, std::string token);

    std::size_t offset() const { return offset_; }
    const std::string& token() const { return token_; }

private:
    std::size_t offset_;
    std::string token_;
};

class EvalError : public std::runtime_error {
public:
    EvalError(std::size_t offset, const std::string& message);

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Immutable symbolic expression in one variable u. Values share subtrees;
// evaluation from multiple threads is safe.
class Expression {
public:
    Expression() = default;
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    const Node& root() const { return *root_; }
    std::shared_ptr<const Node> root_ptr() const { return root_; }
    bool empty() const { return root_ == nullptr; }

    double operator()(double u) const;

private:
    std::shared_ptr<const Node> root_;
};

Expression parse(std::string_view source);
double evaluate(const Expression& e, double u);
Jet evaluate_jet(const Expression& e, double u, int order);
Expression differentiate(const Expression& e);
std::string to_string(const Expression& e);
std::string to_sexpr(const Expression& e);
bool depends_on_u(const Expression& e);

// F(u_i) = constant + integral of e from 0 to u_i at u_i = i*period/n,
// i = 0..n (composite Simpson per interval; n must be even, n >= 16).
std::vector<double> antiderivative_table(const Expression& e, double period, int n,
                                         double constant);

// Construction helpers; literal-only subtrees fold to numbers and the usual
// unit/zero identities are applied, nothing further.
Expression number(double v);
Expression pi_constant();
Expression e_constant();
Expression var_u();
Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& a, const Expression& b);
Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression tan(const Expression& a);
Expression exp(const Expression& a);
Expression log(const Expression& a);
Expression sqrt(const Expression& a);
Expression abs(const Expression& a);

}  // namespace knotbend::expr
