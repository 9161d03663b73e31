#include "diffusym/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace diffusym {

ParamEnv::ParamEnv(std::initializer_list<std::pair<const std::string, double>> init) {
    for (const auto& [name, value] : init) bind(name, value);
}

void ParamEnv::bind(const std::string& name, double value) {
    if (!values_.emplace(name, value).second)
        throw SpecError("duplicate parameter binding: " + name);
}

double ParamEnv::get(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw SpecError("unbound parameter: " + name);
    return it->second;
}

ExprPtr Expr::number(double v) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = Kind::Number;
    e->value_ = v;
    return e;
}

ExprPtr Expr::var_x() {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = Kind::VarX;
    return e;
}

ExprPtr Expr::var_t() {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = Kind::VarT;
    return e;
}

ExprPtr Expr::param(std::string name) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = Kind::Param;
    e->name_ = std::move(name);
    return e;
}

ExprPtr Expr::unary(UnaryFn fn, ExprPtr arg) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = Kind::Unary;
    e->fn_ = fn;
    e->lhs_ = std::move(arg);
    return e;
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->kind_ = Kind::Binary;
    e->op_ = op;
    e->lhs_ = std::move(lhs);
    e->rhs_ = std::move(rhs);
    return e;
}

namespace {

[[noreturn]] void domain_violation(const Expr& e, const char* what) {
    throw NumericError(std::string("domain violation: ") + what + " in subtree '" +
                       render(std::shared_ptr<const Expr>(&e, [](const Expr*) {})) + "'");
}

} // namespace

double Expr::eval(double x, double t, const ParamEnv& env) const {
    switch (kind_) {
        case Kind::Number: return value_;
        case Kind::VarX: return x;
        case Kind::VarT: return t;
        case Kind::Param: return env.get(name_);
        case Kind::Unary: {
            const double v = lhs_->eval(x, t, env);
            switch (fn_) {
                case UnaryFn::Neg: return -v;
                case UnaryFn::Sin: return std::sin(v);
                case UnaryFn::Cos: return std::cos(v);
                case UnaryFn::Tan: {
                    const double r = std::tan(v);
                    if (!std::isfinite(r)) domain_violation(*this, "tan pole");
                    return r;
                }
                case UnaryFn::Arctan: return std::atan(v);
                case UnaryFn::Sinh: return std::sinh(v);
                case UnaryFn::Cosh: return std::cosh(v);
                case UnaryFn::Tanh: return std::tanh(v);
                case UnaryFn::Exp: return std::exp(v);
                case UnaryFn::Log:
                    if (!(v > 0.0)) domain_violation(*this, "log of non-positive value");
                    return std::log(v);
                case UnaryFn::Sqrt:
                    if (v < 0.0) domain_violation(*this, "sqrt of negative value");
                    return std::sqrt(v);
                case UnaryFn::Erf: return std::erf(v);
            }
            break;
        }
        case Kind::Binary: {
            const double a = lhs_->eval(x, t, env);
            const double b = rhs_->eval(x, t, env);
            switch (op_) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (b == 0.0) domain_violation(*this, "division by zero");
                    return a / b;
                case BinaryOp::Pow: {
                    const double r = std::pow(a, b);
                    if (!std::isfinite(r) && std::isfinite(a) && std::isfinite(b))
                        domain_violation(*this, "pow outside real domain");
                    return r;
                }
            }
            break;
        }
    }
    throw NumericError("corrupt expression node");
}

bool Expr::depends_on_x() const {
    switch (kind_) {
        case Kind::VarX: return true;
        case Kind::Unary: return lhs_->depends_on_x();
        case Kind::Binary: return lhs_->depends_on_x() || rhs_->depends_on_x();
        default: return false;
    }
}

bool Expr::depends_on_t() const {
    switch (kind_) {
        case Kind::VarT: return true;
        case Kind::Unary: return lhs_->depends_on_t();
        case Kind::Binary: return lhs_->depends_on_t() || rhs_->depends_on_t();
        default: return false;
    }
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?
//   atom   := NUMBER | "x" | "t" | IDENT | IDENT "(" expr ")" | "(" expr ")"
// ---------------------------------------------------------------------------

namespace {

const std::array<std::pair<const char*, UnaryFn>, 13> kFunctions = {{
    {"sin", UnaryFn::Sin},
    {"cos", UnaryFn::Cos},
    {"tan", UnaryFn::Tan},
    {"arctan", UnaryFn::Arctan},
    {"atan", UnaryFn::Arctan},
    {"sinh", UnaryFn::Sinh},
    {"cosh", UnaryFn::Cosh},
    {"tanh", UnaryFn::Tanh},
    {"exp", UnaryFn::Exp},
    {"log", UnaryFn::Log},
    {"sqrt", UnaryFn::Sqrt},
    {"erf", UnaryFn::Erf},
    {"neg", UnaryFn::Neg},
}};

const char* function_name(UnaryFn fn) {
    switch (fn) {
        case UnaryFn::Neg: return "neg";
        case UnaryFn::Sin: return "sin";
        case UnaryFn::Cos: return "cos";
        case UnaryFn::Tan: return "tan";
        case UnaryFn::Arctan: return "arctan";
        case UnaryFn::Sinh: return "sinh";
        case UnaryFn::Cosh: return "cosh";
        case UnaryFn::Tanh: return "tanh";
        case UnaryFn::Exp: return "exp";
        case UnaryFn::Log: return "log";
        case UnaryFn::Sqrt: return "sqrt";
        case UnaryFn::Erf: return "erf";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("trailing input", pos_, "end of expression");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        for (;;) {
            if (eat('+'))
                e = Expr::binary(BinaryOp::Add, e, parse_term());
            else if (eat('-'))
                e = Expr::binary(BinaryOp::Sub, e, parse_term());
            else
                return e;
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (eat('*'))
                e = Expr::binary(BinaryOp::Mul, e, parse_factor());
            else if (eat('/'))
                e = Expr::binary(BinaryOp::Div, e, parse_factor());
            else
                return e;
        }
    }

    ExprPtr parse_factor() {
        if (eat('-')) return Expr::unary(UnaryFn::Neg, parse_factor());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (eat('^')) return Expr::binary(BinaryOp::Pow, base, parse_factor());
        return base;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size())
            throw ParseError("unexpected end of input", pos_, "number, identifier or '('");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            if (!eat(')')) throw ParseError("unbalanced parenthesis", pos_, "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_,
                         "number, identifier or '('");
    }

    ExprPtr parse_number() {
        const char* begin = src_.data() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", pos_, "decimal literal");
        pos_ += static_cast<std::size_t>(end - begin);
        return Expr::number(v);
    }

    ExprPtr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        if (peek() == '(') {
            for (const auto& [fname, fn] : kFunctions) {
                if (name == fname) {
                    eat('(');
                    ExprPtr arg = parse_expr();
                    if (!eat(')')) throw ParseError("unbalanced call parenthesis", pos_, "')'");
                    return Expr::unary(fn, arg);
                }
            }
            throw ParseError("unknown function '" + name + "'", start, "a known unary function");
        }
        if (name == "x") return Expr::var_x();
        if (name == "t") return Expr::var_t();
        return Expr::param(name);
    }
};

bool is_const(const ExprPtr& e, double v) {
    return e->kind() == Expr::Kind::Number && e->number_value() == v;
}

ExprPtr num(double v) { return Expr::number(v); }

} // namespace

ExprPtr parse_expression(std::string_view source) { return Parser(source).run(); }

// ---------------------------------------------------------------------------
// Simplifying constructors (conservative: no trig identities, no factoring).
// ---------------------------------------------------------------------------

ExprPtr operator+(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->kind() == Expr::Kind::Number && b->kind() == Expr::Kind::Number)
        return num(a->number_value() + b->number_value());
    return Expr::binary(BinaryOp::Add, a, b);
}

ExprPtr operator-(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(b, 0.0)) return a;
    if (a->kind() == Expr::Kind::Number && b->kind() == Expr::Kind::Number)
        return num(a->number_value() - b->number_value());
    if (is_const(a, 0.0)) return Expr::unary(UnaryFn::Neg, b);
    return Expr::binary(BinaryOp::Sub, a, b);
}

ExprPtr operator*(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return num(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->kind() == Expr::Kind::Number && b->kind() == Expr::Kind::Number)
        return num(a->number_value() * b->number_value());
    return Expr::binary(BinaryOp::Mul, a, b);
}

ExprPtr operator/(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return num(0.0);
    if (is_const(b, 1.0)) return a;
    if (a->kind() == Expr::Kind::Number && b->kind() == Expr::Kind::Number &&
        b->number_value() != 0.0)
        return num(a->number_value() / b->number_value());
    return Expr::binary(BinaryOp::Div, a, b);
}

ExprPtr operator-(const ExprPtr& a) {
    if (a->kind() == Expr::Kind::Number) return num(-a->number_value());
    return Expr::unary(UnaryFn::Neg, a);
}

ExprPtr pow(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(b, 1.0)) return a;
    if (is_const(b, 0.0)) return num(1.0);
    return Expr::binary(BinaryOp::Pow, a, b);
}

ExprPtr sqrt(const ExprPtr& a) { return Expr::unary(UnaryFn::Sqrt, a); }

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

ExprPtr differentiate(const ExprPtr& e, char var) {
    if (var != 'x' && var != 't') throw SpecError("differentiate: variable must be 'x' or 't'");
    switch (e->kind()) {
        case Expr::Kind::Number:
        case Expr::Kind::Param:
            return num(0.0);
        case Expr::Kind::VarX: return num(var == 'x' ? 1.0 : 0.0);
        case Expr::Kind::VarT: return num(var == 't' ? 1.0 : 0.0);
        case Expr::Kind::Unary: {
            const ExprPtr& g = e->child();
            ExprPtr dg = differentiate(g, var);
            if (is_const(dg, 0.0)) return num(0.0);
            switch (e->fn()) {
                case UnaryFn::Neg: return -dg;
                case UnaryFn::Sin: return Expr::unary(UnaryFn::Cos, g) * dg;
                case UnaryFn::Cos: return -(Expr::unary(UnaryFn::Sin, g) * dg);
                case UnaryFn::Tan:
                    // sec^2 = 1 + tan^2
                    return (num(1.0) + pow(Expr::unary(UnaryFn::Tan, g), num(2.0))) * dg;
                case UnaryFn::Arctan: return dg / (num(1.0) + pow(g, num(2.0)));
                case UnaryFn::Sinh: return Expr::unary(UnaryFn::Cosh, g) * dg;
                case UnaryFn::Cosh: return Expr::unary(UnaryFn::Sinh, g) * dg;
                case UnaryFn::Tanh:
                    return (num(1.0) - pow(Expr::unary(UnaryFn::Tanh, g), num(2.0))) * dg;
                case UnaryFn::Exp: return Expr::unary(UnaryFn::Exp, g) * dg;
                case UnaryFn::Log: return dg / g;
                case UnaryFn::Sqrt: return dg / (num(2.0) * Expr::unary(UnaryFn::Sqrt, g));
                case UnaryFn::Erf:
                    // d erf(g) = (2/sqrt(pi)) exp(-g^2) g'
                    return num(2.0 / std::sqrt(M_PI)) *
                           Expr::unary(UnaryFn::Exp, -pow(g, num(2.0))) * dg;
            }
            break;
        }
        case Expr::Kind::Binary: {
            const ExprPtr& f = e->lhs();
            const ExprPtr& g = e->rhs();
            ExprPtr df = differentiate(f, var);
            ExprPtr dg = differentiate(g, var);
            switch (e->op()) {
                case BinaryOp::Add: return df + dg;
                case BinaryOp::Sub: return df - dg;
                case BinaryOp::Mul: return df * g + f * dg;
                case BinaryOp::Div: return (df * g - f * dg) / pow(g, num(2.0));
                case BinaryOp::Pow: {
                    if (g->kind() == Expr::Kind::Number) {
                        const double n = g->number_value();
                        return num(n) * pow(f, num(n - 1.0)) * df;
                    }
                    // general case: f^g (g' ln f + g f'/f)
                    ExprPtr fg = Expr::binary(BinaryOp::Pow, f, g);
                    return fg * (dg * Expr::unary(UnaryFn::Log, f) + g * df / f);
                }
            }
            break;
        }
    }
    throw NumericError("corrupt expression node in differentiate");
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

int precedence(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Binary:
            switch (e.op()) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
            return 0;
        case Expr::Kind::Unary: return e.fn() == UnaryFn::Neg ? 3 : 5;
        default: return 5;
    }
}

void render_rec(const ExprPtr& e, std::ostringstream& out, int parent_prec) {
    const int prec = precedence(*e);
    const bool need_parens = prec < parent_prec;
    if (need_parens) out << '(';
    switch (e->kind()) {
        case Expr::Kind::Number: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << e->number_value();
            const std::string s = tmp.str();
            if (!s.empty() && s[0] == '-') {
                out << '(' << s << ')';
            } else {
                out << s;
            }
            break;
        }
        case Expr::Kind::VarX: out << 'x'; break;
        case Expr::Kind::VarT: out << 't'; break;
        case Expr::Kind::Param: out << e->param_name(); break;
        case Expr::Kind::Unary:
            if (e->fn() == UnaryFn::Neg) {
                out << '-';
                render_rec(e->child(), out, prec + 1);
            } else {
                out << function_name(e->fn()) << '(';
                render_rec(e->child(), out, 0);
                out << ')';
            }
            break;
        case Expr::Kind::Binary: {
            const char* sym = "?";
            int lp = prec, rp = prec + 1;
            switch (e->op()) {
                case BinaryOp::Add: sym = "+"; break;
                case BinaryOp::Sub: sym = "-"; break;
                case BinaryOp::Mul: sym = "*"; break;
                case BinaryOp::Div: sym = "/"; break;
                case BinaryOp::Pow:
                    sym = "^";
                    lp = prec + 1;  // right-associative
                    rp = prec;
                    break;
            }
            render_rec(e->lhs(), out, lp);
            out << sym;
            render_rec(e->rhs(), out, rp);
            break;
        }
    }
    if (need_parens) out << ')';
}

} // namespace

std::string render(const ExprPtr& e) {
    std::ostringstream out;
    render_rec(e, out, 0);
    return out.str();
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case Expr::Kind::Number: return a->number_value() == b->number_value();
        case Expr::Kind::VarX:
        case Expr::Kind::VarT: return true;
        case Expr::Kind::Param: return a->param_name() == b->param_name();
        case Expr::Kind::Unary:
            return a->fn() == b->fn() && structurally_equal(a->child(), b->child());
        case Expr::Kind::Binary:
            return a->op() == b->op() && structurally_equal(a->lhs(), b->lhs()) &&
                   structurally_equal(a->rhs(), b->rhs());
    }
    return false;
}

} // namespace diffusym
