#include "knotbend/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "knotbend/quadrature.hpp"

namespace knotbend::expr {

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_node(NodeKind kind, std::uint32_t offset, NodePtr a = nullptr, NodePtr b = nullptr,
                  double number = 0.0) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->number = number;
    n->offset = offset;
    n->a = std::move(a);
    n->b = std::move(b);
    return NodePtr(std::move(n));
}

bool is_literal(const NodePtr& n) {
    return n->kind == NodeKind::kNumber || n->kind == NodeKind::kPi || n->kind == NodeKind::kE;
}

double literal_value(const NodePtr& n) {
    switch (n->kind) {
        case NodeKind::kNumber: return n->number;
        case NodeKind::kPi: return std::numbers::pi;
        case NodeKind::kE: return std::numbers::e;
        default: return 0.0;
    }
}

bool is_number(const NodePtr& n, double v) {
    return n->kind == NodeKind::kNumber && n->number == v;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::string message, std::string token)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      token_(std::move(token)) {}

EvalError::EvalError(std::size_t offset, const std::string& message)
    : std::runtime_error("evaluation error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End, Bad };

struct Token {
    TokKind kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_ = {TokKind::End, pos_, src_.substr(pos_, 0)};
            return;
        }
        const char c = src_[pos_];
        switch (c) {
            case '+': tok_ = {TokKind::Plus, pos_, src_.substr(pos_, 1)}; ++pos_; return;
            case '-': tok_ = {TokKind::Minus, pos_, src_.substr(pos_, 1)}; ++pos_; return;
            case '*': tok_ = {TokKind::Star, pos_, src_.substr(pos_, 1)}; ++pos_; return;
            case '/': tok_ = {TokKind::Slash, pos_, src_.substr(pos_, 1)}; ++pos_; return;
            case '^': tok_ = {TokKind::Caret, pos_, src_.substr(pos_, 1)}; ++pos_; return;
            case '(': tok_ = {TokKind::LParen, pos_, src_.substr(pos_, 1)}; ++pos_; return;
            case ')': tok_ = {TokKind::RParen, pos_, src_.substr(pos_, 1)}; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
                ++end;
            tok_ = {TokKind::Ident, pos_, src_.substr(pos_, end - pos_)};
            pos_ = end;
            return;
        }
        tok_ = {TokKind::Bad, pos_, src_.substr(pos_, 1)};
        ++pos_;
    }

    void lex_number() {
        std::size_t end = pos_;
        bool any_digit = false;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
            ++end;
            any_digit = true;
        }
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
                ++end;
                any_digit = true;
            }
        }
        if (!any_digit) {
            tok_ = {TokKind::Bad, pos_, src_.substr(pos_, 1)};
            ++pos_;
            return;
        }
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t exp_end = end + 1;
            if (exp_end < src_.size() && (src_[exp_end] == '+' || src_[exp_end] == '-')) ++exp_end;
            std::size_t digits = exp_end;
            while (digits < src_.size() && std::isdigit(static_cast<unsigned char>(src_[digits])))
                ++digits;
            if (digits > exp_end) end = digits;
        }
        const std::string text(src_.substr(pos_, end - pos_));
        tok_ = {TokKind::Number, pos_, src_.substr(pos_, end - pos_), std::strtod(text.c_str(), nullptr)};
        pos_ = end;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_{TokKind::End, 0, {}};
};

NodeKind function_kind(std::string_view name) {
    if (name == "sin") return NodeKind::kSin;
    if (name == "cos") return NodeKind::kCos;
    if (name == "tan") return NodeKind::kTan;
    if (name == "exp") return NodeKind::kExp;
    if (name == "log") return NodeKind::kLog;
    if (name == "sqrt") return NodeKind::kSqrt;
    if (name == "abs") return NodeKind::kAbs;
    return NodeKind::kNumber;  // sentinel: not a function
}

bool is_function_name(std::string_view name) {
    return name == "sin" || name == "cos" || name == "tan" || name == "exp" || name == "log" ||
           name == "sqrt" || name == "abs";
}

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    NodePtr run() {
        NodePtr e = parse_expr();
        const Token& t = lex_.peek();
        if (t.kind != TokKind::End)
            throw ParseError(t.offset, "trailing tokens after expression", std::string(t.text));
        return e;
    }

private:
    static constexpr int kMaxDepth = 256;

    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.offset, msg, std::string(t.text));
    }

    NodePtr parse_expr() {
        DepthGuard guard(this);
        NodePtr lhs = parse_term();
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == TokKind::Plus || t.kind == TokKind::Minus) {
                Token op = lex_.take();
                NodePtr rhs = parse_term();
                lhs = make_node(op.kind == TokKind::Plus ? NodeKind::kAdd : NodeKind::kSub,
                                static_cast<std::uint32_t>(op.offset), lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        DepthGuard guard(this);
        NodePtr lhs = parse_factor();
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == TokKind::Star || t.kind == TokKind::Slash) {
                Token op = lex_.take();
                NodePtr rhs = parse_factor();
                lhs = make_node(op.kind == TokKind::Star ? NodeKind::kMul : NodeKind::kDiv,
                                static_cast<std::uint32_t>(op.offset), lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_factor() {
        DepthGuard guard(this);
        const Token& t = lex_.peek();
        if (t.kind == TokKind::Minus) {
            Token op = lex_.take();
            NodePtr inner = parse_factor();
            return make_node(NodeKind::kNeg, static_cast<std::uint32_t>(op.offset), inner);
        }
        return parse_power();
    }

    NodePtr parse_power() {
        DepthGuard guard(this);
        NodePtr base = parse_atom();
        if (lex_.peek().kind == TokKind::Caret) {
            Token op = lex_.take();
            NodePtr exponent = parse_factor();  // right-associative, admits unary minus
            return make_node(NodeKind::kPow, static_cast<std::uint32_t>(op.offset), base, exponent);
        }
        return base;
    }

    NodePtr parse_atom() {
        DepthGuard guard(this);
        Token t = lex_.take();
        switch (t.kind) {
            case TokKind::Number:
                return make_node(NodeKind::kNumber, static_cast<std::uint32_t>(t.offset), nullptr,
                                 nullptr, t.number);
            case TokKind::Ident: {
                if (t.text == "u") return make_node(NodeKind::kVar, static_cast<std::uint32_t>(t.offset));
                if (t.text == "pi") return make_node(NodeKind::kPi, static_cast<std::uint32_t>(t.offset));
                if (t.text == "e") return make_node(NodeKind::kE, static_cast<std::uint32_t>(t.offset));
                if (!is_function_name(t.text))
                    fail(t, "unknown identifier '" + std::string(t.text) + "'");
                const Token& open = lex_.peek();
                if (open.kind != TokKind::LParen)
                    fail(open, "expected '(' after function '" + std::string(t.text) + "'");
                lex_.take();
                NodePtr arg = parse_expr();
                const Token& close = lex_.peek();
                if (close.kind != TokKind::RParen)
                    fail(close, "expected ')' to close argument of '" + std::string(t.text) + "'");
                lex_.take();
                return make_node(function_kind(t.text), static_cast<std::uint32_t>(t.offset), arg);
            }
            case TokKind::LParen: {
                NodePtr inner = parse_expr();
                const Token& close = lex_.peek();
                if (close.kind != TokKind::RParen) fail(close, "expected ')'");
                lex_.take();
                return inner;
            }
            case TokKind::End: fail(t, "unexpected end of input");
            case TokKind::Bad: fail(t, "unexpected character '" + std::string(t.text) + "'");
            default: fail(t, "unexpected token '" + std::string(t.text) + "'");
        }
    }

    struct DepthGuard {
        explicit DepthGuard(Parser* p) : parser(p) {
            if (++parser->depth_ > kMaxDepth)
                throw ParseError(parser->lex_.peek().offset, "expression nested too deeply",
                                 std::string(parser->lex_.peek().text));
        }
        ~DepthGuard() { --parser->depth_; }
        Parser* parser;
    };

    Lexer lex_;
    int depth_ = 0;
};

}  // namespace

Expression parse(std::string_view source) { return Expression(Parser(source).run()); }

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

double eval_node(const Node& n, double u) {
    switch (n.kind) {
        case NodeKind::kNumber: return n.number;
        case NodeKind::kPi: return std::numbers::pi;
        case NodeKind::kE: return std::numbers::e;
        case NodeKind::kVar: return u;
        case NodeKind::kNeg: return -eval_node(*n.a, u);
        case NodeKind::kAdd: return eval_node(*n.a, u) + eval_node(*n.b, u);
        case NodeKind::kSub: return eval_node(*n.a, u) - eval_node(*n.b, u);
        case NodeKind::kMul: return eval_node(*n.a, u) * eval_node(*n.b, u);
        case NodeKind::kDiv: {
            const double num = eval_node(*n.a, u);
            const double den = eval_node(*n.b, u);
            if (den == 0.0) throw EvalError(n.offset, "division by zero");
            return num / den;
        }
        case NodeKind::kPow: {
            const double base = eval_node(*n.a, u);
            const double exponent = eval_node(*n.b, u);
            const double r = std::pow(base, exponent);
            if (!std::isfinite(r))
                throw EvalError(n.offset, "pow outside real domain");
            return r;
        }
        case NodeKind::kSin: return std::sin(eval_node(*n.a, u));
        case NodeKind::kCos: return std::cos(eval_node(*n.a, u));
        case NodeKind::kTan: {
            const double r = std::tan(eval_node(*n.a, u));
            if (!std::isfinite(r)) throw EvalError(n.offset, "tan at a pole");
            return r;
        }
        case NodeKind::kExp: return std::exp(eval_node(*n.a, u));
        case NodeKind::kLog: {
            const double x = eval_node(*n.a, u);
            if (x <= 0.0) throw EvalError(n.offset, "log of non-positive value");
            return std::log(x);
        }
        case NodeKind::kSqrt: {
            const double x = eval_node(*n.a, u);
            if (x < 0.0) throw EvalError(n.offset, "sqrt of negative value");
            return std::sqrt(x);
        }
        case NodeKind::kAbs: return std::abs(eval_node(*n.a, u));
    }
    throw EvalError(n.offset, "corrupt expression node");
}

Jet eval_jet_node(const Node& n, const Jet& u) {
    try {
        switch (n.kind) {
            case NodeKind::kNumber: return Jet::constant(n.number, u.len);
            case NodeKind::kPi: return Jet::constant(std::numbers::pi, u.len);
            case NodeKind::kE: return Jet::constant(std::numbers::e, u.len);
            case NodeKind::kVar: return u;
            case NodeKind::kNeg: return -eval_jet_node(*n.a, u);
            case NodeKind::kAdd: return eval_jet_node(*n.a, u) + eval_jet_node(*n.b, u);
            case NodeKind::kSub: return eval_jet_node(*n.a, u) - eval_jet_node(*n.b, u);
            case NodeKind::kMul: return eval_jet_node(*n.a, u) * eval_jet_node(*n.b, u);
            case NodeKind::kDiv: return eval_jet_node(*n.a, u) / eval_jet_node(*n.b, u);
            case NodeKind::kPow: {
                const Jet base = eval_jet_node(*n.a, u);
                const Node& eb = *n.b;
                if (is_literal(n.b)) return pow(base, literal_value(n.b));
                if (eb.kind == NodeKind::kNeg && is_literal(eb.a))
                    return pow(base, -literal_value(eb.a));
                const Jet exponent = eval_jet_node(eb, u);
                return exp(exponent * log(base));
            }
            case NodeKind::kSin: return sin(eval_jet_node(*n.a, u));
            case NodeKind::kCos: return cos(eval_jet_node(*n.a, u));
            case NodeKind::kTan: return tan(eval_jet_node(*n.a, u));
            case NodeKind::kExp: return exp(eval_jet_node(*n.a, u));
            case NodeKind::kLog: return log(eval_jet_node(*n.a, u));
            case NodeKind::kSqrt: return sqrt(eval_jet_node(*n.a, u));
            case NodeKind::kAbs: return abs(eval_jet_node(*n.a, u));
        }
    } catch (const std::domain_error& err) {
        throw EvalError(n.offset, err.what());
    }
    throw EvalError(n.offset, "corrupt expression node");
}

}  // namespace

double Expression::operator()(double u) const { return eval_node(*root_, u); }

double evaluate(const Expression& e, double u) { return eval_node(e.root(), u); }

Jet evaluate_jet(const Expression& e, double u, int order) {
    if (order < 0 || order + 1 > Jet::kMaxLen)
        throw std::invalid_argument("evaluate_jet: unsupported order");
    return eval_jet_node(e.root(), Jet::variable(u, order + 1));
}

// ---------------------------------------------------------------------------
// Construction helpers with literal folding
// ---------------------------------------------------------------------------

namespace {

NodePtr num_node(double v, std::uint32_t offset = 0) {
    return make_node(NodeKind::kNumber, offset, nullptr, nullptr, v);
}

NodePtr add_nodes(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    if (is_literal(a) && is_literal(b)) return num_node(literal_value(a) + literal_value(b));
    return make_node(NodeKind::kAdd, a->offset, a, b);
}

NodePtr neg_node(NodePtr a) {
    if (is_literal(a)) return num_node(-literal_value(a));
    if (a->kind == NodeKind::kNeg) return a->a;
    return make_node(NodeKind::kNeg, a->offset, a);
}

NodePtr sub_nodes(NodePtr a, NodePtr b) {
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return neg_node(b);
    if (is_literal(a) && is_literal(b)) return num_node(literal_value(a) - literal_value(b));
    return make_node(NodeKind::kSub, a->offset, a, b);
}

NodePtr mul_nodes(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return num_node(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    if (is_literal(a) && is_literal(b)) return num_node(literal_value(a) * literal_value(b));
    return make_node(NodeKind::kMul, a->offset, a, b);
}

NodePtr div_nodes(NodePtr a, NodePtr b) {
    if (is_number(b, 1.0)) return a;
    if (is_number(a, 0.0)) return num_node(0.0);
    if (is_literal(a) && is_literal(b) && literal_value(b) != 0.0)
        return num_node(literal_value(a) / literal_value(b));
    return make_node(NodeKind::kDiv, a->offset, a, b);
}

NodePtr pow_nodes(NodePtr a, NodePtr b) {
    if (is_number(b, 1.0)) return a;
    if (is_number(b, 0.0)) return num_node(1.0);
    if (is_literal(a) && is_literal(b)) {
        const double v = std::pow(literal_value(a), literal_value(b));
        if (std::isfinite(v)) return num_node(v);
    }
    return make_node(NodeKind::kPow, a->offset, a, b);
}

NodePtr func_node(NodeKind kind, NodePtr a) {
    if (is_literal(a)) {
        const double x = literal_value(a);
        double v = 0.0;
        bool ok = true;
        switch (kind) {
            case NodeKind::kSin: v = std::sin(x); break;
            case NodeKind::kCos: v = std::cos(x); break;
            case NodeKind::kTan: v = std::tan(x); break;
            case NodeKind::kExp: v = std::exp(x); break;
            case NodeKind::kLog: ok = x > 0.0; v = ok ? std::log(x) : 0.0; break;
            case NodeKind::kSqrt: ok = x >= 0.0; v = ok ? std::sqrt(x) : 0.0; break;
            case NodeKind::kAbs: v = std::abs(x); break;
            default: ok = false; break;
        }
        if (ok && std::isfinite(v)) return num_node(v);
    }
    return make_node(kind, a->offset, a);
}

}  // namespace

Expression number(double v) { return Expression(num_node(v)); }
Expression pi_constant() { return Expression(make_node(NodeKind::kPi, 0)); }
Expression e_constant() { return Expression(make_node(NodeKind::kE, 0)); }
Expression var_u() { return Expression(make_node(NodeKind::kVar, 0)); }

Expression operator+(const Expression& a, const Expression& b) {
    return Expression(add_nodes(a.root_ptr(), b.root_ptr()));
}
Expression operator-(const Expression& a, const Expression& b) {
    return Expression(sub_nodes(a.root_ptr(), b.root_ptr()));
}
Expression operator*(const Expression& a, const Expression& b) {
    return Expression(mul_nodes(a.root_ptr(), b.root_ptr()));
}
Expression operator/(const Expression& a, const Expression& b) {
    return Expression(div_nodes(a.root_ptr(), b.root_ptr()));
}
Expression operator-(const Expression& a) { return Expression(neg_node(a.root_ptr())); }
Expression pow(const Expression& a, const Expression& b) {
    return Expression(pow_nodes(a.root_ptr(), b.root_ptr()));
}
Expression sin(const Expression& a) { return Expression(func_node(NodeKind::kSin, a.root_ptr())); }
Expression cos(const Expression& a) { return Expression(func_node(NodeKind::kCos, a.root_ptr())); }
Expression tan(const Expression& a) { return Expression(func_node(NodeKind::kTan, a.root_ptr())); }
Expression exp(const Expression& a) { return Expression(func_node(NodeKind::kExp, a.root_ptr())); }
Expression log(const Expression& a) { return Expression(func_node(NodeKind::kLog, a.root_ptr())); }
Expression sqrt(const Expression& a) { return Expression(func_node(NodeKind::kSqrt, a.root_ptr())); }
Expression abs(const Expression& a) { return Expression(func_node(NodeKind::kAbs, a.root_ptr())); }

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

NodePtr diff_node(const NodePtr& n) {
    switch (n->kind) {
        case NodeKind::kNumber:
        case NodeKind::kPi:
        case NodeKind::kE: return num_node(0.0);
        case NodeKind::kVar: return num_node(1.0);
        case NodeKind::kNeg: return neg_node(diff_node(n->a));
        case NodeKind::kAdd: return add_nodes(diff_node(n->a), diff_node(n->b));
        case NodeKind::kSub: return sub_nodes(diff_node(n->a), diff_node(n->b));
        case NodeKind::kMul:
            return add_nodes(mul_nodes(diff_node(n->a), n->b), mul_nodes(n->a, diff_node(n->b)));
        case NodeKind::kDiv:
            return div_nodes(
                sub_nodes(mul_nodes(diff_node(n->a), n->b), mul_nodes(n->a, diff_node(n->b))),
                mul_nodes(n->b, n->b));
        case NodeKind::kPow: {
            if (is_literal(n->b)) {
                // d(f^c) = c * f^(c-1) * f'
                const double c = literal_value(n->b);
                return mul_nodes(mul_nodes(num_node(c), pow_nodes(n->a, num_node(c - 1.0))),
                                 diff_node(n->a));
            }
            // d(f^g) = f^g * (g' log f + g f'/f)
            NodePtr fg = make_node(NodeKind::kPow, n->offset, n->a, n->b);
            NodePtr lhs = mul_nodes(diff_node(n->b), func_node(NodeKind::kLog, n->a));
            NodePtr rhs = div_nodes(mul_nodes(n->b, diff_node(n->a)), n->a);
            return mul_nodes(fg, add_nodes(lhs, rhs));
        }
        case NodeKind::kSin: return mul_nodes(func_node(NodeKind::kCos, n->a), diff_node(n->a));
        case NodeKind::kCos:
            return neg_node(mul_nodes(func_node(NodeKind::kSin, n->a), diff_node(n->a)));
        case NodeKind::kTan:
            return div_nodes(diff_node(n->a),
                             pow_nodes(func_node(NodeKind::kCos, n->a), num_node(2.0)));
        case NodeKind::kExp: return mul_nodes(func_node(NodeKind::kExp, n->a), diff_node(n->a));
        case NodeKind::kLog: return div_nodes(diff_node(n->a), n->a);
        case NodeKind::kSqrt:
            return div_nodes(diff_node(n->a),
                             mul_nodes(num_node(2.0), func_node(NodeKind::kSqrt, n->a)));
        case NodeKind::kAbs:
            // |f|' = f f'/|f|; undefined at f = 0, surfaces as division by zero
            // when evaluated there.
            return div_nodes(mul_nodes(n->a, diff_node(n->a)), func_node(NodeKind::kAbs, n->a));
    }
    return num_node(0.0);
}

}  // namespace

Expression differentiate(const Expression& e) { return Expression(diff_node(e.root_ptr())); }

bool depends_on_u(const Expression& e) {
    const auto& n = e.root();
    if (n.kind == NodeKind::kVar) return true;
    bool dep = false;
    if (n.a) dep = dep || depends_on_u(Expression(n.a));
    if (n.b) dep = dep || depends_on_u(Expression(n.b));
    return dep;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string num_to_string(double v) {
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::kAdd:
        case NodeKind::kSub: return 1;
        case NodeKind::kMul:
        case NodeKind::kDiv: return 2;
        case NodeKind::kNeg: return 3;
        case NodeKind::kPow: return 4;
        default: return 5;
    }
}

const char* func_name(NodeKind k) {
    switch (k) {
        case NodeKind::kSin: return "sin";
        case NodeKind::kCos: return "cos";
        case NodeKind::kTan: return "tan";
        case NodeKind::kExp: return "exp";
        case NodeKind::kLog: return "log";
        case NodeKind::kSqrt: return "sqrt";
        case NodeKind::kAbs: return "abs";
        default: return "?";
    }
}

std::string print_node(const Node& n);

std::string wrap(const Node& child, bool need_parens) {
    std::string s = print_node(child);
    return need_parens ? "(" + s + ")" : s;
}

std::string print_node(const Node& n) {
    switch (n.kind) {
        case NodeKind::kNumber:
            if (n.number < 0.0) return "(" + num_to_string(n.number) + ")";
            return num_to_string(n.number);
        case NodeKind::kPi: return "pi";
        case NodeKind::kE: return "e";
        case NodeKind::kVar: return "u";
        case NodeKind::kNeg: return "-" + wrap(*n.a, precedence(n.a->kind) < 3);
        case NodeKind::kAdd:
        case NodeKind::kSub:
        case NodeKind::kMul:
        case NodeKind::kDiv: {
            const int p = precedence(n.kind);
            const char* op = n.kind == NodeKind::kAdd   ? "+"
                             : n.kind == NodeKind::kSub ? "-"
                             : n.kind == NodeKind::kMul ? "*"
                                                        : "/";
            return wrap(*n.a, precedence(n.a->kind) < p) + op +
                   wrap(*n.b, precedence(n.b->kind) <= p);
        }
        case NodeKind::kPow:
            return wrap(*n.a, precedence(n.a->kind) <= 4) + "^" +
                   wrap(*n.b, precedence(n.b->kind) < 3);
        default: return std::string(func_name(n.kind)) + "(" + print_node(*n.a) + ")";
    }
}

std::string sexpr_node(const Node& n) {
    switch (n.kind) {
        case NodeKind::kNumber: return num_to_string(n.number);
        case NodeKind::kPi: return "pi";
        case NodeKind::kE: return "e";
        case NodeKind::kVar: return "u";
        case NodeKind::kNeg: return "(neg " + sexpr_node(*n.a) + ")";
        case NodeKind::kAdd: return "(+ " + sexpr_node(*n.a) + " " + sexpr_node(*n.b) + ")";
        case NodeKind::kSub: return "(- " + sexpr_node(*n.a) + " " + sexpr_node(*n.b) + ")";
        case NodeKind::kMul: return "(* " + sexpr_node(*n.a) + " " + sexpr_node(*n.b) + ")";
        case NodeKind::kDiv: return "(/ " + sexpr_node(*n.a) + " " + sexpr_node(*n.b) + ")";
        case NodeKind::kPow: return "(^ " + sexpr_node(*n.a) + " " + sexpr_node(*n.b) + ")";
        default: return "(" + std::string(func_name(n.kind)) + " " + sexpr_node(*n.a) + ")";
    }
}

}  // namespace

std::string to_string(const Expression& e) { return print_node(e.root()); }

std::string to_sexpr(const Expression& e) { return sexpr_node(e.root()); }

// ---------------------------------------------------------------------------
// Antiderivative table
// ---------------------------------------------------------------------------

std::vector<double> antiderivative_table(const Expression& e, double period, int n,
                                         double constant) {
    if (n < 16 || n % 2 != 0)
        throw std::invalid_argument("antiderivative_table: n must be even and >= 16");
    if (!(period > 0.0)) throw std::invalid_argument("antiderivative_table: period must be positive");
    std::vector<double> breakpoints(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) breakpoints[i] = period * i / n;
    breakpoints.back() = period;
    CumulativeIntegral F([&e](double u) { return evaluate(e, u); }, std::move(breakpoints),
                         constant);
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) out[i] = F.at_breakpoint(static_cast<std::size_t>(i));
    return out;
}

}  // namespace knotbend::expr
