#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "chovex/common.hpp"

namespace chovex {

/// Parse/evaluation error carrying the byte offset into the source text.
class ExprError : public Error {
public:
    ExprError(std::size_t offset, const std::string& msg)
        : Error("expression error at offset " + std::to_string(offset) + ": " + msg),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Arithmetic expression over variables x1..xN, y1..yN.
///
/// Grammar (standard precedence, ^ right-associative and binding tighter
/// than unary minus):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?
///   atom   := number | 'pi' | var | fn '(' expr (',' expr)* ')' | '(' expr ')'
/// Functions: sin cos exp abs sqrt (unary), min max (binary).
class Expr {
public:
    enum class Op : std::uint8_t {
        Const, VarX, VarY, Add, Sub, Mul, Div, Pow, Neg,
        Sin, Cos, Exp, Abs, Sqrt, Min, Max
    };

    struct Node {
        Op op;
        int a = -1;        // child indices into the arena
        int b = -1;
        double value = 0;  // Const payload
        int axis = 0;      // VarX/VarY payload: 0-based coordinate index
    };

    Expr() = default;

    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return root_; }
    int dimension() const { return dim_; }
    bool empty() const { return root_ < 0; }

    /// Does any node reference a y-variable?
    bool uses_y() const {
        for (const auto& n : nodes_)
            if (n.op == Op::VarY) return true;
        return false;
    }

    bool is_constant() const {
        for (const auto& n : nodes_)
            if (n.op == Op::VarX || n.op == Op::VarY) return false;
        return true;
    }

    std::string to_string() const { return print(root_, 0); }

    // -- construction helpers (used by parse_expr and derived fields) -----
    int add(Node n) {
        nodes_.push_back(n);
        return int(nodes_.size()) - 1;
    }
    void set_root(int r, int dim) {
        root_ = r;
        dim_ = dim;
    }

    static Expr constant(double v) {
        Expr e;
        e.set_root(e.add({Op::Const, -1, -1, v, 0}), 1);
        return e;
    }

    /// c0 + c1 * inner  (affine wrapper, keeps derived fields printable)
    static Expr affine_of(double c0, double c1, const Expr& inner);
    /// c0 / (c1 - inner)
    static Expr reciprocal_of(double c0, double c1, const Expr& inner);

private:
    friend Expr parse_expr(std::string_view, int);

    std::string print(int idx, int parentPrec) const;

    std::vector<Node> nodes_;
    int root_ = -1;
    int dim_ = 1;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct Parser {
    std::string_view src;
    std::size_t pos = 0;
    int dim;
    Expr* out;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool consume(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ExprError(pos, msg); }

    int parse_expr_() {
        int lhs = parse_term();
        for (;;) {
            skip_ws();
            if (consume('+')) lhs = out->add({Expr::Op::Add, lhs, parse_term()});
            else if (consume('-')) lhs = out->add({Expr::Op::Sub, lhs, parse_term()});
            else return lhs;
        }
    }

    int parse_term() {
        int lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (consume('*')) lhs = out->add({Expr::Op::Mul, lhs, parse_unary()});
            else if (consume('/')) lhs = out->add({Expr::Op::Div, lhs, parse_unary()});
            else return lhs;
        }
    }

    int parse_unary() {
        if (consume('-')) return out->add({Expr::Op::Neg, parse_unary()});
        return parse_power();
    }

    int parse_power() {
        int base = parse_atom();
        if (consume('^')) {
            // exponent may itself carry a sign: 2^-3
            int ex = parse_unary();
            return out->add({Expr::Op::Pow, base, ex});
        }
        return base;
    }

    int parse_atom() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input");
        const char c = src[pos];
        if (c == '(') {
            ++pos;
            int e = parse_expr_();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    int parse_number() {
        const std::size_t start = pos;
        while (pos < src.size() &&
               (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
            ++pos;
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            std::size_t p = pos + 1;
            if (p < src.size() && (src[p] == '+' || src[p] == '-')) ++p;
            if (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) {
                pos = p;
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            }
        }
        const std::string text(src.substr(start, pos - start));
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return out->add({Expr::Op::Const, -1, -1, v});
        } catch (const std::exception&) {
            pos = start;
            fail("malformed number '" + text + "'");
        }
    }

    int parse_ident() {
        const std::size_t start = pos;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        const std::string name(src.substr(start, pos - start));

        if (name == "pi")
            return out->add({Expr::Op::Const, -1, -1, 3.14159265358979323846});

        struct Fn {
            const char* name;
            Expr::Op op;
            int arity;
        };
        static const Fn fns[] = {
            {"sin", Expr::Op::Sin, 1},  {"cos", Expr::Op::Cos, 1},
            {"exp", Expr::Op::Exp, 1},  {"abs", Expr::Op::Abs, 1},
            {"sqrt", Expr::Op::Sqrt, 1},{"min", Expr::Op::Min, 2},
            {"max", Expr::Op::Max, 2},
        };
        for (const auto& f : fns) {
            if (name != f.name) continue;
            if (!consume('(')) fail("expected '(' after function '" + name + "'");
            int a = parse_expr_();
            int b = -1;
            int argc = 1;
            while (consume(',')) {
                int arg = parse_expr_();
                if (argc == 1) b = arg;
                ++argc;
            }
            if (!consume(')')) fail("expected ')'");
            if (argc != f.arity) {
                pos = start;
                fail("function '" + name + "' expects " + std::to_string(f.arity) +
                     " argument(s), got " + std::to_string(argc));
            }
            return out->add({f.op, a, b});
        }

        // variables: x1..xN / y1..yN
        if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1) {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (digits) {
                const int idx = std::stoi(name.substr(1));
                if (idx < 1 || idx > dim) {
                    pos = start;
                    fail("variable '" + name + "' out of range for dimension " +
                         std::to_string(dim));
                }
                return out->add({name[0] == 'x' ? Expr::Op::VarX : Expr::Op::VarY,
                                 -1, -1, 0.0, idx - 1});
            }
        }
        pos = start;
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace detail

/// Parse `src` as an expression in dimension `dim` (variables x1..x`dim`,
/// y1..y`dim`).  Throws ExprError with a byte offset on malformed input.
inline Expr parse_expr(std::string_view src, int dim) {
    if (src.empty()) throw ExprError(0, "empty expression");
    Expr e;
    detail::Parser p{src, 0, dim, &e};
    const int root = p.parse_expr_();
    if (!p.eof()) p.fail("trailing input");
    e.set_root(root, dim);
    return e;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Variable bindings for evaluation.  `y` may be null for one-point fields.
struct EvalPoint {
    const double* x = nullptr;
    const double* y = nullptr;
};

inline double eval_expr(const Expr& e, const EvalPoint& at) {
    struct Walk {
        const std::vector<Expr::Node>& ns;
        const EvalPoint& at;
        double go(int i) const {
            const Expr::Node& n = ns[i];
            switch (n.op) {
                case Expr::Op::Const: return n.value;
                case Expr::Op::VarX:
                    if (!at.x) throw Error("unbound variable x" + std::to_string(n.axis + 1));
                    return at.x[n.axis];
                case Expr::Op::VarY:
                    if (!at.y) throw Error("unbound variable y" + std::to_string(n.axis + 1));
                    return at.y[n.axis];
                case Expr::Op::Add: return go(n.a) + go(n.b);
                case Expr::Op::Sub: return go(n.a) - go(n.b);
                case Expr::Op::Mul: return go(n.a) * go(n.b);
                case Expr::Op::Div: {
                    const double d = go(n.b);
                    if (d == 0.0) throw Error("division by zero");
                    return go(n.a) / d;
                }
                case Expr::Op::Pow: return std::pow(go(n.a), go(n.b));
                case Expr::Op::Neg: return -go(n.a);
                case Expr::Op::Sin: return std::sin(go(n.a));
                case Expr::Op::Cos: return std::cos(go(n.a));
                case Expr::Op::Exp: return std::exp(go(n.a));
                case Expr::Op::Abs: return std::fabs(go(n.a));
                case Expr::Op::Sqrt: {
                    const double v = go(n.a);
                    if (v < 0.0) throw Error("sqrt of negative value");
                    return std::sqrt(v);
                }
                case Expr::Op::Min: return std::fmin(go(n.a), go(n.b));
                case Expr::Op::Max: return std::fmax(go(n.a), go(n.b));
            }
            throw Error("corrupt expression node");
        }
    };
    const double v = Walk{e.nodes(), at}.go(e.root());
    if (!std::isfinite(v)) throw Error("non-finite expression value");
    return v;
}

// ---------------------------------------------------------------------------
// Compiled form: flat postfix program, for the pair-loop hot paths.
// ---------------------------------------------------------------------------

class Program {
public:
    Program() = default;
    explicit Program(const Expr& e) { compile(e, e.root()); }

    /// Evaluate with raw coordinate pointers (y may be null for one-point
    /// fields that never reference it).  No error checks beyond a final
    /// finiteness test in debug paths; callers validate fields up front.
    double eval(const double* x, const double* y) const {
        double stack[64];
        int sp = 0;
        for (const auto& in : code_) {
            switch (in.op) {
                case Expr::Op::Const: stack[sp++] = in.value; break;
                case Expr::Op::VarX: stack[sp++] = x[in.axis]; break;
                case Expr::Op::VarY: stack[sp++] = y[in.axis]; break;
                case Expr::Op::Add: --sp; stack[sp - 1] += stack[sp]; break;
                case Expr::Op::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
                case Expr::Op::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
                case Expr::Op::Div: --sp; stack[sp - 1] /= stack[sp]; break;
                case Expr::Op::Pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
                case Expr::Op::Neg: stack[sp - 1] = -stack[sp - 1]; break;
                case Expr::Op::Sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
                case Expr::Op::Cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
                case Expr::Op::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
                case Expr::Op::Abs: stack[sp - 1] = std::fabs(stack[sp - 1]); break;
                case Expr::Op::Sqrt: stack[sp - 1] = std::sqrt(stack[sp - 1]); break;
                case Expr::Op::Min: --sp; stack[sp - 1] = std::fmin(stack[sp - 1], stack[sp]); break;
                case Expr::Op::Max: --sp; stack[sp - 1] = std::fmax(stack[sp - 1], stack[sp]); break;
            }
        }
        return stack[0];
    }

private:
    struct Instr {
        Expr::Op op;
        double value = 0;
        int axis = 0;
    };

    void compile(const Expr& e, int idx) {
        const Expr::Node& n = e.nodes()[idx];
        if (n.a >= 0) compile(e, n.a);
        if (n.b >= 0) compile(e, n.b);
        code_.push_back({n.op, n.value, n.axis});
    }

    std::vector<Instr> code_;
};

// ---------------------------------------------------------------------------
// Pretty printing (round-trips through parse_expr)
// ---------------------------------------------------------------------------

inline std::string Expr::print(int idx, int parentPrec) const {
    const Node& n = nodes_[idx];
    auto wrap = [&](int prec, const std::string& s) {
        return prec < parentPrec ? "(" + s + ")" : s;
    };
    switch (n.op) {
        case Op::Const: {
            const std::string s = fmt_double(n.value);
            return (n.value < 0) ? "(" + s + ")" : s;
        }
        case Op::VarX: return "x" + std::to_string(n.axis + 1);
        case Op::VarY: return "y" + std::to_string(n.axis + 1);
        case Op::Add: return wrap(10, print(n.a, 10) + " + " + print(n.b, 11));
        case Op::Sub: return wrap(10, print(n.a, 10) + " - " + print(n.b, 11));
        case Op::Mul: return wrap(20, print(n.a, 20) + "*" + print(n.b, 21));
        case Op::Div: return wrap(20, print(n.a, 20) + "/" + print(n.b, 21));
        case Op::Neg: return wrap(30, "-" + print(n.a, 30));
        case Op::Pow: return wrap(41, print(n.a, 42) + "^" + print(n.b, 40));
        case Op::Sin: return "sin(" + print(n.a, 0) + ")";
        case Op::Cos: return "cos(" + print(n.a, 0) + ")";
        case Op::Exp: return "exp(" + print(n.a, 0) + ")";
        case Op::Abs: return "abs(" + print(n.a, 0) + ")";
        case Op::Sqrt: return "sqrt(" + print(n.a, 0) + ")";
        case Op::Min: return "min(" + print(n.a, 0) + ", " + print(n.b, 0) + ")";
        case Op::Max: return "max(" + print(n.a, 0) + ", " + print(n.b, 0) + ")";
    }
    throw Error("corrupt expression node");
}

inline Expr Expr::affine_of(double c0, double c1, const Expr& inner) {
    Expr e = inner;
    const int k0 = e.add({Op::Const, -1, -1, c0});
    const int k1 = e.add({Op::Const, -1, -1, c1});
    const int prod = e.add({Op::Mul, k1, inner.root()});
    e.set_root(e.add({Op::Add, k0, prod}), inner.dimension());
    return e;
}

inline Expr Expr::reciprocal_of(double c0, double c1, const Expr& inner) {
    Expr e = inner;
    const int k0 = e.add({Op::Const, -1, -1, c0});
    const int k1 = e.add({Op::Const, -1, -1, c1});
    const int den = e.add({Op::Sub, k1, inner.root()});
    e.set_root(e.add({Op::Div, k0, den}), inner.dimension());
    return e;
}

}  // namespace chovex
