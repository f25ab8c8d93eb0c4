#include "ahgeom/expr.hpp"

#include <fmt/format.h>

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ahgeom {

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 7> kFunctions{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"sqrt", Func::Sqrt},
    {"atan", Func::Atan},
}};

constexpr int kMaxNesting = 256;

double apply(Func f, double x) {
    switch (f) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Tan: return std::tan(x);
        case Func::Exp: return std::exp(x);
        case Func::Log: return x > 0.0 ? std::log(x) : std::numeric_limits<double>::quiet_NaN();
        case Func::Sqrt: return x >= 0.0 ? std::sqrt(x) : std::numeric_limits<double>::quiet_NaN();
        case Func::Atan: return std::atan(x);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

int stack_depth(const std::vector<Expr::Node>& nodes) {
    int depth = 0;
    int worst = 0;
    for (const auto& n : nodes) {
        switch (n.op) {
            case Expr::Op::Number:
            case Expr::Op::Variable: ++depth; break;
            case Expr::Op::Neg:
            case Expr::Op::Call:
                if (depth < 1) throw std::invalid_argument("malformed postfix expression");
                break;
            default:
                if (depth < 2) throw std::invalid_argument("malformed postfix expression");
                --depth;
                break;
        }
        worst = std::max(worst, depth);
    }
    if (depth != 1) throw std::invalid_argument("malformed postfix expression");
    return worst;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

class ExprParser {
public:
    ExprParser(std::string_view text, std::span<const std::string> names, int line, int column_offset)
        : text_(text), names_(names), line_(line), offset_(column_offset) {}

    Expr run() {
        skip_space();
        if (at_end()) fail(SyntaxIssue::Kind::Syntax, "empty expression");
        parse_sum(0);
        skip_space();
        if (!at_end()) fail(SyntaxIssue::Kind::Syntax, fmt::format("unexpected '{}'", text_[pos_]));
        return Expr(std::move(out_));
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(SyntaxIssue::Kind kind, std::string msg, std::size_t at) const {
        throw ChartError(SyntaxIssue{kind, line_, offset_ + static_cast<int>(at) + 1, std::move(msg)});
    }
    [[noreturn]] void fail(SyntaxIssue::Kind kind, std::string msg) const { fail(kind, std::move(msg), pos_); }

    void enter(int depth) const {
        if (depth > kMaxNesting) fail(SyntaxIssue::Kind::Syntax, "expression nested too deeply");
    }

    void emit(Expr::Op op) { out_.push_back(Expr::Node{op}); }

    void parse_sum(int depth) {
        enter(depth);
        parse_product(depth + 1);
        for (;;) {
            skip_space();
            const char c = peek();
            if (c != '+' && c != '-') return;
            ++pos_;
            parse_product(depth + 1);
            emit(c == '+' ? Expr::Op::Add : Expr::Op::Sub);
        }
    }

    void parse_product(int depth) {
        enter(depth);
        parse_unary(depth + 1);
        for (;;) {
            skip_space();
            const char c = peek();
            if (c != '*' && c != '/') return;
            ++pos_;
            parse_unary(depth + 1);
            emit(c == '*' ? Expr::Op::Mul : Expr::Op::Div);
        }
    }

    void parse_unary(int depth) {
        enter(depth);
        skip_space();
        if (peek() == '-') {
            ++pos_;
            parse_unary(depth + 1);
            emit(Expr::Op::Neg);
            return;
        }
        parse_power(depth + 1);
    }

    // '^' is right-associative and binds tighter than unary minus: -a^b = -(a^b),
    // while the exponent itself may carry a sign: a^-b = a^(-b).
    void parse_power(int depth) {
        enter(depth);
        parse_primary(depth + 1);
        skip_space();
        if (peek() == '^') {
            ++pos_;
            parse_unary(depth + 1);
            emit(Expr::Op::Pow);
        }
    }

    void parse_primary(int depth) {
        enter(depth);
        skip_space();
        if (at_end()) fail(SyntaxIssue::Kind::Syntax, "expected a value, found end of expression");
        const char c = peek();
        if (c == '(') {
            const std::size_t open = pos_;
            ++pos_;
            parse_sum(depth + 1);
            skip_space();
            if (peek() != ')') fail(SyntaxIssue::Kind::Syntax, "unbalanced '('", open);
            ++pos_;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            parse_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            parse_identifier(depth);
            return;
        }
        fail(SyntaxIssue::Kind::Syntax, fmt::format("unexpected '{}'", c));
    }

    void parse_number() {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '.') {
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            }
        }
        const std::string_view lit = text_.substr(start, pos_ - start);
        double v = 0.0;
        auto res = std::from_chars(lit.data(), lit.data() + lit.size(), v);
        if (res.ec != std::errc() || res.ptr != lit.data() + lit.size() || !std::isfinite(v))
            fail(SyntaxIssue::Kind::Syntax, fmt::format("malformed number '{}'", lit), start);
        out_.push_back(Expr::Node{Expr::Op::Number, Func::Sin, 0, v});
    }

    void parse_identifier(int depth) {
        const std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
        const std::string_view id = text_.substr(start, pos_ - start);

        Func f;
        if (lookup_function(id, f)) {
            skip_space();
            if (peek() != '(') fail(SyntaxIssue::Kind::Syntax, fmt::format("function '{}' needs '('", id));
            const std::size_t open = pos_;
            ++pos_;
            parse_sum(depth + 1);
            skip_space();
            if (peek() != ')') fail(SyntaxIssue::Kind::Syntax, "unbalanced '('", open);
            ++pos_;
            out_.push_back(Expr::Node{Expr::Op::Call, f});
            return;
        }
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i] == id) {
                out_.push_back(Expr::Node{Expr::Op::Variable, Func::Sin, static_cast<int>(i)});
                return;
            }
        }
        fail(SyntaxIssue::Kind::UndeclaredIdentifier, fmt::format("undeclared identifier '{}'", id), start);
    }

    std::string_view text_;
    std::span<const std::string> names_;
    int line_;
    int offset_;
    std::size_t pos_ = 0;
    std::vector<Expr::Node> out_;
};

}  // namespace

bool lookup_function(std::string_view name, Func& out) {
    for (const auto& [n, f] : kFunctions) {
        if (n == name) {
            out = f;
            return true;
        }
    }
    return false;
}

std::string_view function_name(Func f) {
    for (const auto& [n, g] : kFunctions)
        if (g == f) return n;
    return "?";
}

std::string to_string(SyntaxIssue::Kind k) {
    switch (k) {
        case SyntaxIssue::Kind::Syntax: return "syntax error";
        case SyntaxIssue::Kind::UndeclaredIdentifier: return "undeclared identifier";
        case SyntaxIssue::Kind::DimensionMismatch: return "dimension mismatch";
        case SyntaxIssue::Kind::Conflict: return "conflicting definition";
        case SyntaxIssue::Kind::Missing: return "missing declaration";
        case SyntaxIssue::Kind::Value: return "invalid value";
    }
    return "error";
}

ChartError::ChartError(SyntaxIssue issue)
    : Error(issue.column > 0 ? fmt::format("line {}, column {}: {}: {}", issue.line, issue.column,
                                           to_string(issue.kind), issue.message)
                             : fmt::format("line {}: {}: {}", issue.line, to_string(issue.kind), issue.message)),
      issue_(std::move(issue)) {}

Expr Expr::constant(double v) { return Expr({Node{Op::Number, Func::Sin, 0, v}}); }

Expr::Expr(std::vector<Node> postfix) : nodes_(std::move(postfix)), depth_(stack_depth(nodes_)) {}

double Expr::evaluate(std::span<const double> vars) const {
    double out = 0.0;
    std::string where;
    evaluate_checked(vars, out, where);
    return out;
}

bool Expr::evaluate_checked(std::span<const double> vars, double& out, std::string& where) const {
    constexpr int kInline = 32;
    std::array<double, kInline> small{};
    std::vector<double> big;
    double* st = small.data();
    if (depth_ > kInline) {
        big.resize(static_cast<std::size_t>(depth_));
        st = big.data();
    }
    int top = 0;
    bool ok = true;
    auto note = [&](std::string msg) {
        if (ok) where = std::move(msg);
        ok = false;
    };

    for (const auto& n : nodes_) {
        switch (n.op) {
            case Op::Number: st[top++] = n.value; break;
            case Op::Variable: st[top++] = vars[static_cast<std::size_t>(n.variable)]; break;
            case Op::Neg: st[top - 1] = -st[top - 1]; break;
            case Op::Call: {
                const double x = st[top - 1];
                st[top - 1] = apply(n.func, x);
                if (!std::isfinite(st[top - 1]))
                    note(fmt::format("{}({}) is undefined", function_name(n.func), format_number(x)));
                break;
            }
            default: {
                const double b = st[--top];
                const double a = st[top - 1];
                double r = 0.0;
                switch (n.op) {
                    case Op::Add: r = a + b; break;
                    case Op::Sub: r = a - b; break;
                    case Op::Mul: r = a * b; break;
                    case Op::Div:
                        r = a / b;
                        if (b == 0.0) note("division by zero");
                        break;
                    case Op::Pow:
                        r = std::pow(a, b);
                        if (!std::isfinite(r))
                            note(fmt::format("{}^{} is undefined", format_number(a), format_number(b)));
                        break;
                    default: break;
                }
                st[top - 1] = r;
                if (!std::isfinite(r)) note("non-finite intermediate value");
            }
        }
    }
    out = st[0];
    if (!std::isfinite(out)) note("non-finite value");
    return ok;
}

std::string Expr::to_string(std::span<const std::string> names) const {
    // Precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom.
    struct Piece {
        std::string text;
        int prec;
    };
    std::vector<Piece> st;
    auto wrap = [](const Piece& p, bool paren) { return paren ? "(" + p.text + ")" : p.text; };

    for (const auto& n : nodes_) {
        switch (n.op) {
            case Op::Number:
                if (n.value < 0.0 || std::signbit(n.value))
                    st.push_back({"-" + format_number(-n.value), 3});
                else
                    st.push_back({format_number(n.value), 5});
                break;
            case Op::Variable: {
                const auto i = static_cast<std::size_t>(n.variable);
                st.push_back({i < names.size() ? names[i] : fmt::format("v{}", i + 1), 5});
                break;
            }
            case Op::Neg: {
                Piece c = st.back();
                st.back() = {"-" + wrap(c, c.prec < 3), 3};
                break;
            }
            case Op::Call: {
                Piece c = st.back();
                st.back() = {std::string(function_name(n.func)) + "(" + c.text + ")", 5};
                break;
            }
            default: {
                Piece r = st.back();
                st.pop_back();
                Piece l = st.back();
                std::string text;
                int prec = 0;
                switch (n.op) {
                    case Op::Add: text = wrap(l, l.prec < 1) + " + " + wrap(r, r.prec <= 1); prec = 1; break;
                    case Op::Sub: text = wrap(l, l.prec < 1) + " - " + wrap(r, r.prec <= 1); prec = 1; break;
                    case Op::Mul: text = wrap(l, l.prec < 2) + "*" + wrap(r, r.prec <= 2); prec = 2; break;
                    case Op::Div: text = wrap(l, l.prec < 2) + "/" + wrap(r, r.prec <= 2); prec = 2; break;
                    case Op::Pow: text = wrap(l, l.prec <= 4) + "^" + wrap(r, r.prec < 4); prec = 4; break;
                    default: break;
                }
                st.back() = {std::move(text), prec};
            }
        }
    }
    return st.empty() ? std::string("0") : st.back().text;
}

Expr parse_expression(std::string_view text, std::span<const std::string> names, int line, int column_offset) {
    return ExprParser(text, names, line, column_offset).run();
}

}  // namespace ahgeom
