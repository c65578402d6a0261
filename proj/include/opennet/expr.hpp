#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace opennet::expr {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DiffError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class UnaryOp { Negate, Sin, Cos, Exp, Tanh, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

// Maps coordinate names to slots in a flat value vector, so expressions can
// be evaluated against plain double spans in inner loops.
class VarTable {
public:
    VarTable() = default;
    explicit VarTable(const std::vector<std::string>& names);
    // Slot of `name`, or -1 when absent.
    int indexOf(const std::string& name) const;
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

struct ExprNode;

// Immutable symbolic scalar expression over named variables.
class Expr {
public:
    Expr() = default;  // empty; only assignment and destruction are valid

    static Expr constant(double value);
    static Expr variable(std::string name);
    static Expr unary(UnaryOp op, Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

    bool valid() const { return node_ != nullptr; }
    bool isConstant() const;
    double constantValue() const;
    bool isVariable() const;
    const std::string& variableName() const;

    double eval(const std::map<std::string, double>& env) const;
    double eval(const VarTable& table, std::span<const double> values) const;

    // Replaces whole variables by expressions; unlisted variables are kept.
    Expr substitute(const std::map<std::string, Expr>& bindings) const;
    Expr differentiate(const std::string& var) const;

    void collectVariables(std::set<std::string>& out) const;
    std::string str() const;

private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ExprNode> node_;
};

inline Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::Div, std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::unary(UnaryOp::Negate, std::move(a)); }

// Parses an infix expression over `vars`. Precedence ^ > unary minus > * /
// > + -, with right-associative ^ and call syntax name(arg) for the unary
// functions sin, cos, exp, tanh, sqrt.
Expr parse(std::string_view source, const std::vector<std::string>& vars);

// Entry (i,j) is the derivative of exprs[i] with respect to vars[j].
std::vector<std::vector<Expr>> jacobian(const std::vector<Expr>& exprs,
                                        const std::vector<std::string>& vars);

}  // namespace opennet::expr
