#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "diffusym/error.hpp"

namespace diffusym {

/// Bindings for named parameters appearing in expressions. Immutable once
/// built; duplicate names are rejected at construction.
class ParamEnv {
public:
    ParamEnv() = default;
    ParamEnv(std::initializer_list<std::pair<const std::string, double>> init);

    /// Adds a binding; throws SpecError if the name is already bound.
    void bind(const std::string& name, double value);

    bool has(const std::string& name) const { return values_.count(name) != 0; }
    double get(const std::string& name) const;

    const std::map<std::string, double>& values() const { return values_; }

private:
    std::map<std::string, double> values_;
};

enum class UnaryFn { Neg, Sin, Cos, Tan, Arctan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Erf };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over variables x, t and named parameters.
/// Evaluation is pure and deterministic; trees are safe to share across threads.
class Expr {
public:
    enum class Kind { Number, VarX, VarT, Param, Unary, Binary };

    static ExprPtr number(double v);
    static ExprPtr var_x();
    static ExprPtr var_t();
    static ExprPtr param(std::string name);
    static ExprPtr unary(UnaryFn fn, ExprPtr arg);
    static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

    Kind kind() const { return kind_; }
    double number_value() const { return value_; }
    const std::string& param_name() const { return name_; }
    UnaryFn fn() const { return fn_; }
    BinaryOp op() const { return op_; }
    const ExprPtr& child() const { return lhs_; }
    const ExprPtr& lhs() const { return lhs_; }
    const ExprPtr& rhs() const { return rhs_; }

    double eval(double x, double t, const ParamEnv& env) const;

    bool depends_on_x() const;
    bool depends_on_t() const;

private:
    Expr() = default;

    Kind kind_ = Kind::Number;
    double value_ = 0.0;
    std::string name_;
    UnaryFn fn_ = UnaryFn::Neg;
    BinaryOp op_ = BinaryOp::Add;
    ExprPtr lhs_, rhs_;
};

/// Parses the expression grammar (see README): +,-,*,/ with usual precedence,
/// right-associative ^, unary minus, parenthesised calls of the known unary
/// functions; any other identifier is a parameter. Throws ParseError.
ExprPtr parse_expression(std::string_view source);

/// Exact symbolic derivative with conservative simplification
/// (constant folding, 0·e→0, e+0→e, e·1→e, e^1→e).
ExprPtr differentiate(const ExprPtr& e, char var);

/// Renders to text that re-parses to a structurally equal tree.
std::string render(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// Tree-building convenience used when assembling derived quantities (J, K, ...).
ExprPtr operator+(const ExprPtr& a, const ExprPtr& b);
ExprPtr operator-(const ExprPtr& a, const ExprPtr& b);
ExprPtr operator*(const ExprPtr& a, const ExprPtr& b);
ExprPtr operator/(const ExprPtr& a, const ExprPtr& b);
ExprPtr operator-(const ExprPtr& a);
ExprPtr pow(const ExprPtr& a, const ExprPtr& b);
ExprPtr sqrt(const ExprPtr& a);

} // namespace diffusym
