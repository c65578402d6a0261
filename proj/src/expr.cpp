#include "opennet/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

namespace opennet::expr {

enum class Kind { Constant, Variable, Unary, Binary };

struct ExprNode {
    Kind kind;
    double value = 0.0;
    std::string name;
    UnaryOp uop = UnaryOp::Negate;
    BinaryOp bop = BinaryOp::Add;
    std::shared_ptr<const ExprNode> a;
    std::shared_ptr<const ExprNode> b;
};

// ---------------------------------------------------------------------------
// VarTable

VarTable::VarTable(const std::vector<std::string>& names) : names_(names) {
    index_.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
        index_.emplace(names_[i], static_cast<int>(i));
    }
}

int VarTable::indexOf(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// Construction and constant folding

namespace {

double applyUnary(UnaryOp op, double x) {
    switch (op) {
        case UnaryOp::Negate: return -x;
        case UnaryOp::Sin: return std::sin(x);
        case UnaryOp::Cos: return std::cos(x);
        case UnaryOp::Exp: {
            double r = std::exp(x);
            if (!std::isfinite(r)) throw EvalError("overflow in exp");
            return r;
        }
        case UnaryOp::Tanh: return std::tanh(x);
        case UnaryOp::Sqrt:
            if (x < 0.0) {
                std::ostringstream os;
                os << "square root of negative value " << x;
                throw EvalError(os.str());
            }
            return std::sqrt(x);
    }
    throw EvalError("unhandled unary operator");
}

double applyBinary(BinaryOp op, double x, double y) {
    switch (op) {
        case BinaryOp::Add: return x + y;
        case BinaryOp::Sub: return x - y;
        case BinaryOp::Mul: {
            double r = x * y;
            if (!std::isfinite(r)) throw EvalError("overflow in multiplication");
            return r;
        }
        case BinaryOp::Div:
            if (y == 0.0) throw EvalError("division by zero");
            return x / y;
        case BinaryOp::Pow: {
            double r = std::pow(x, y);
            if (!std::isfinite(r)) {
                std::ostringstream os;
                os << "pow(" << x << ", " << y << ") is not finite";
                throw EvalError(os.str());
            }
            return r;
        }
    }
    throw EvalError("unhandled binary operator");
}

}  // namespace

Expr Expr::constant(double value) {
    if (!std::isfinite(value)) throw EvalError("non-finite constant");
    auto node = std::make_shared<ExprNode>();
    node->kind = Kind::Constant;
    node->value = value;
    return Expr(std::move(node));
}

Expr Expr::variable(std::string name) {
    auto node = std::make_shared<ExprNode>();
    node->kind = Kind::Variable;
    node->name = std::move(name);
    return Expr(std::move(node));
}

Expr Expr::unary(UnaryOp op, Expr operand) {
    if (op == UnaryOp::Negate && operand.node_->kind == Kind::Unary &&
        operand.node_->uop == UnaryOp::Negate) {
        return Expr(operand.node_->a);
    }
    if (operand.isConstant()) {
        try {
            return constant(applyUnary(op, operand.constantValue()));
        } catch (const EvalError&) {
            // keep the node; evaluation reports the error
        }
    }
    auto node = std::make_shared<ExprNode>();
    node->kind = Kind::Unary;
    node->uop = op;
    node->a = operand.node_;
    return Expr(std::move(node));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    const bool lc = lhs.isConstant();
    const bool rc = rhs.isConstant();
    if (lc && rc) {
        try {
            return constant(applyBinary(op, lhs.constantValue(), rhs.constantValue()));
        } catch (const EvalError&) {
            // keep the node; evaluation reports the error
        }
    }
    switch (op) {
        case BinaryOp::Add:
            if (lc && lhs.constantValue() == 0.0) return rhs;
            if (rc && rhs.constantValue() == 0.0) return lhs;
            break;
        case BinaryOp::Sub:
            if (rc && rhs.constantValue() == 0.0) return lhs;
            if (lc && lhs.constantValue() == 0.0) return unary(UnaryOp::Negate, rhs);
            break;
        case BinaryOp::Mul:
            if (lc && lhs.constantValue() == 1.0) return rhs;
            if (rc && rhs.constantValue() == 1.0) return lhs;
            if (lc && lhs.constantValue() == 0.0) return constant(0.0);
            if (rc && rhs.constantValue() == 0.0) return constant(0.0);
            break;
        case BinaryOp::Div:
            if (rc && rhs.constantValue() == 1.0) return lhs;
            break;
        case BinaryOp::Pow:
            if (rc && rhs.constantValue() == 1.0) return lhs;
            if (rc && rhs.constantValue() == 0.0) return constant(1.0);
            break;
    }
    auto node = std::make_shared<ExprNode>();
    node->kind = Kind::Binary;
    node->bop = op;
    node->a = lhs.node_;
    node->b = rhs.node_;
    return Expr(std::move(node));
}

bool Expr::isConstant() const {
    return node_ && node_->kind == Kind::Constant;
}

double Expr::constantValue() const {
    if (!isConstant()) throw std::logic_error("expression is not a constant");
    return node_->value;
}

bool Expr::isVariable() const {
    return node_ && node_->kind == Kind::Variable;
}

const std::string& Expr::variableName() const {
    if (!isVariable()) throw std::logic_error("expression is not a variable");
    return node_->name;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <typename Lookup>
double evalNode(const ExprNode* n, const Lookup& lookup) {
    switch (n->kind) {
        case Kind::Constant:
            return n->value;
        case Kind::Variable: {
            const double* v = lookup(n->name);
            if (!v) throw EvalError("unbound variable '" + n->name + "'");
            return *v;
        }
        case Kind::Unary:
            return applyUnary(n->uop, evalNode(n->a.get(), lookup));
        case Kind::Binary:
            return applyBinary(n->bop, evalNode(n->a.get(), lookup),
                               evalNode(n->b.get(), lookup));
    }
    throw EvalError("unhandled node kind");
}

}  // namespace

double Expr::eval(const std::map<std::string, double>& env) const {
    auto lookup = [&env](const std::string& name) -> const double* {
        auto it = env.find(name);
        return it == env.end() ? nullptr : &it->second;
    };
    return evalNode(node_.get(), lookup);
}

double Expr::eval(const VarTable& table, std::span<const double> values) const {
    auto lookup = [&table, values](const std::string& name) -> const double* {
        int i = table.indexOf(name);
        if (i < 0 || static_cast<std::size_t>(i) >= values.size()) return nullptr;
        return &values[static_cast<std::size_t>(i)];
    };
    return evalNode(node_.get(), lookup);
}

// ---------------------------------------------------------------------------
// Substitution, differentiation

Expr Expr::substitute(const std::map<std::string, Expr>& bindings) const {
    switch (node_->kind) {
        case Kind::Constant:
            return *this;
        case Kind::Variable: {
            auto it = bindings.find(node_->name);
            return it == bindings.end() ? *this : it->second;
        }
        case Kind::Unary:
            return unary(node_->uop, Expr(node_->a).substitute(bindings));
        case Kind::Binary:
            return binary(node_->bop, Expr(node_->a).substitute(bindings),
                          Expr(node_->b).substitute(bindings));
    }
    throw std::logic_error("unhandled node kind");
}

Expr Expr::differentiate(const std::string& var) const {
    switch (node_->kind) {
        case Kind::Constant:
            return constant(0.0);
        case Kind::Variable:
            return constant(node_->name == var ? 1.0 : 0.0);
        case Kind::Unary: {
            Expr u(node_->a);
            Expr du = u.differentiate(var);
            switch (node_->uop) {
                case UnaryOp::Negate:
                    return -du;
                case UnaryOp::Sin:
                    return unary(UnaryOp::Cos, u) * du;
                case UnaryOp::Cos:
                    return -(unary(UnaryOp::Sin, u) * du);
                case UnaryOp::Exp:
                    return unary(UnaryOp::Exp, u) * du;
                case UnaryOp::Tanh: {
                    Expr t = unary(UnaryOp::Tanh, u);
                    return (constant(1.0) - t * t) * du;
                }
                case UnaryOp::Sqrt:
                    return du / (constant(2.0) * unary(UnaryOp::Sqrt, u));
            }
            throw DiffError("unhandled unary operator");
        }
        case Kind::Binary: {
            Expr u(node_->a);
            Expr v(node_->b);
            switch (node_->bop) {
                case BinaryOp::Add:
                    return u.differentiate(var) + v.differentiate(var);
                case BinaryOp::Sub:
                    return u.differentiate(var) - v.differentiate(var);
                case BinaryOp::Mul:
                    return u.differentiate(var) * v + u * v.differentiate(var);
                case BinaryOp::Div:
                    return (u.differentiate(var) * v - u * v.differentiate(var)) / (v * v);
                case BinaryOp::Pow: {
                    if (!v.isConstant()) {
                        throw DiffError(
                            "cannot differentiate pow with non-constant exponent '" +
                            v.str() + "'");
                    }
                    double c = v.constantValue();
                    return constant(c) * binary(BinaryOp::Pow, u, constant(c - 1.0)) *
                           u.differentiate(var);
                }
            }
            throw DiffError("unhandled binary operator");
        }
    }
    throw DiffError("unhandled node kind");
}

void Expr::collectVariables(std::set<std::string>& out) const {
    switch (node_->kind) {
        case Kind::Constant:
            return;
        case Kind::Variable:
            out.insert(node_->name);
            return;
        case Kind::Unary:
            Expr(node_->a).collectVariables(out);
            return;
        case Kind::Binary:
            Expr(node_->a).collectVariables(out);
            Expr(node_->b).collectVariables(out);
            return;
    }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength used for parenthesization; atoms are strongest.
int precedenceOf(const ExprNode* n) {
    switch (n->kind) {
        case Kind::Constant:
            return n->value < 0.0 ? 3 : 5;
        case Kind::Variable:
            return 5;
        case Kind::Unary:
            return n->uop == UnaryOp::Negate ? 3 : 5;
        case Kind::Binary:
            switch (n->bop) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
    }
    return 5;
}

std::string formatNumber(double v) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

const char* functionName(UnaryOp op) {
    switch (op) {
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Tanh: return "tanh";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Negate: break;
    }
    return "";
}

void printNode(const ExprNode* n, std::string& out);

void printChild(const ExprNode* child, int minPrec, std::string& out) {
    if (precedenceOf(child) < minPrec) {
        out += '(';
        printNode(child, out);
        out += ')';
    } else {
        printNode(child, out);
    }
}

void printNode(const ExprNode* n, std::string& out) {
    switch (n->kind) {
        case Kind::Constant:
            out += formatNumber(n->value);
            return;
        case Kind::Variable:
            out += n->name;
            return;
        case Kind::Unary:
            if (n->uop == UnaryOp::Negate) {
                out += '-';
                printChild(n->a.get(), 3, out);
            } else {
                out += functionName(n->uop);
                out += '(';
                printNode(n->a.get(), out);
                out += ')';
            }
            return;
        case Kind::Binary: {
            const int prec = precedenceOf(n);
            char symbol = 0;
            switch (n->bop) {
                case BinaryOp::Add: symbol = '+'; break;
                case BinaryOp::Sub: symbol = '-'; break;
                case BinaryOp::Mul: symbol = '*'; break;
                case BinaryOp::Div: symbol = '/'; break;
                case BinaryOp::Pow: symbol = '^'; break;
            }
            if (n->bop == BinaryOp::Pow) {
                // right-associative: parenthesize an equal-strength left child
                printChild(n->a.get(), prec + 1, out);
                out += symbol;
                printChild(n->b.get(), prec, out);
            } else {
                printChild(n->a.get(), prec, out);
                out += symbol;
                // reproduce the tree exactly: a-(b-c) keeps its parentheses
                printChild(n->b.get(), prec + 1, out);
            }
            return;
        }
    }
}

}  // namespace

std::string Expr::str() const {
    std::string out;
    printNode(node_.get(), out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type = Type::End;
    std::string text;
    double number = 0.0;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
        current_ = Token{};
        current_.offset = pos_;
        if (pos_ >= src_.size()) {
            current_.type = Token::Type::End;
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lexNumber();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_' || src_[pos_] == '.')) {
                ++pos_;
            }
            current_.type = Token::Type::Ident;
            current_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        switch (c) {
            case '+': current_.type = Token::Type::Plus; break;
            case '-': current_.type = Token::Type::Minus; break;
            case '*': current_.type = Token::Type::Star; break;
            case '/': current_.type = Token::Type::Slash; break;
            case '^': current_.type = Token::Type::Caret; break;
            case '(': current_.type = Token::Type::LParen; break;
            case ')': current_.type = Token::Type::RParen; break;
            default: {
                std::ostringstream os;
                os << "syntax error at offset " << pos_ << ": unexpected character '"
                   << c << "'";
                throw ParseError(os.str(), pos_);
            }
        }
        ++pos_;
    }

    void lexNumber() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // the 'e' belongs to something else
            }
        }
        const std::string_view slice = src_.substr(start, pos_ - start);
        double value = 0.0;
        auto res = std::from_chars(slice.data(), slice.data() + slice.size(), value);
        if (res.ec != std::errc{} || res.ptr != slice.data() + slice.size()) {
            std::ostringstream os;
            os << "syntax error at offset " << start << ": malformed number '" << slice << "'";
            throw ParseError(os.str(), start);
        }
        current_.type = Token::Type::Number;
        current_.number = value;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars)
        : lexer_(src), vars_(vars) {}

    Expr run() {
        Expr e = parseSum();
        const Token& t = lexer_.peek();
        if (t.type != Token::Type::End) {
            std::ostringstream os;
            os << "syntax error at offset " << t.offset << ": unexpected trailing input";
            throw ParseError(os.str(), t.offset);
        }
        return e;
    }

private:
    Expr parseSum() {
        Expr lhs = parseProduct();
        while (true) {
            const Token& t = lexer_.peek();
            if (t.type == Token::Type::Plus) {
                lexer_.next();
                lhs = Expr::binary(BinaryOp::Add, std::move(lhs), parseProduct());
            } else if (t.type == Token::Type::Minus) {
                lexer_.next();
                lhs = Expr::binary(BinaryOp::Sub, std::move(lhs), parseProduct());
            } else {
                return lhs;
            }
        }
    }

    Expr parseProduct() {
        Expr lhs = parseSigned();
        while (true) {
            const Token& t = lexer_.peek();
            if (t.type == Token::Type::Star) {
                lexer_.next();
                lhs = Expr::binary(BinaryOp::Mul, std::move(lhs), parseSigned());
            } else if (t.type == Token::Type::Slash) {
                lexer_.next();
                lhs = Expr::binary(BinaryOp::Div, std::move(lhs), parseSigned());
            } else {
                return lhs;
            }
        }
    }

    Expr parseSigned() {
        if (lexer_.peek().type == Token::Type::Minus) {
            lexer_.next();
            return Expr::unary(UnaryOp::Negate, parseSigned());
        }
        return parsePower();
    }

    Expr parsePower() {
        Expr base = parsePrimary();
        if (lexer_.peek().type == Token::Type::Caret) {
            lexer_.next();
            // the exponent may carry its own sign: x^-2
            return Expr::binary(BinaryOp::Pow, std::move(base), parseSigned());
        }
        return base;
    }

    Expr parsePrimary() {
        Token t = lexer_.next();
        switch (t.type) {
            case Token::Type::Number:
                return Expr::constant(t.number);
            case Token::Type::Ident:
                if (lexer_.peek().type == Token::Type::LParen) {
                    return parseCall(t);
                }
                return parseVariable(t);
            case Token::Type::LParen: {
                Expr inner = parseSum();
                const Token& close = lexer_.peek();
                if (close.type != Token::Type::RParen) {
                    std::ostringstream os;
                    os << "syntax error at offset " << close.offset
                       << ": expected ')'";
                    throw ParseError(os.str(), close.offset);
                }
                lexer_.next();
                return inner;
            }
            default: {
                std::ostringstream os;
                os << "syntax error at offset " << t.offset << ": expected an operand";
                throw ParseError(os.str(), t.offset);
            }
        }
    }

    Expr parseCall(const Token& name) {
        static const std::map<std::string, UnaryOp, std::less<>> functions = {
            {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},  {"exp", UnaryOp::Exp},
            {"tanh", UnaryOp::Tanh}, {"sqrt", UnaryOp::Sqrt}};
        auto it = functions.find(name.text);
        if (it == functions.end()) {
            std::ostringstream os;
            os << "unknown function '" << name.text << "' at offset " << name.offset;
            throw ParseError(os.str(), name.offset);
        }
        lexer_.next();  // '('
        Expr arg = parseSum();
        const Token& close = lexer_.peek();
        if (close.type != Token::Type::RParen) {
            std::ostringstream os;
            os << "syntax error at offset " << close.offset << ": expected ')'";
            throw ParseError(os.str(), close.offset);
        }
        lexer_.next();
        return Expr::unary(it->second, std::move(arg));
    }

    Expr parseVariable(const Token& t) {
        for (const auto& v : vars_) {
            if (v == t.text) return Expr::variable(t.text);
        }
        std::ostringstream os;
        os << "unknown identifier '" << t.text << "' at offset " << t.offset;
        throw ParseError(os.str(), t.offset);
    }

    Lexer lexer_;
    const std::vector<std::string>& vars_;
};

}  // namespace

Expr parse(std::string_view source, const std::vector<std::string>& vars) {
    return Parser(source, vars).run();
}

std::vector<std::vector<Expr>> jacobian(const std::vector<Expr>& exprs,
                                        const std::vector<std::string>& vars) {
    std::vector<std::vector<Expr>> rows;
    rows.reserve(exprs.size());
    for (const Expr& e : exprs) {
        std::vector<Expr> row;
        row.reserve(vars.size());
        for (const std::string& v : vars) {
            row.push_back(e.differentiate(v));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace opennet::expr
