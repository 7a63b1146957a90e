#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ldx/errors.hpp"
#include "ldx/jet.hpp"

namespace ldx {

enum class expr_op {
    number,
    variable,
    add,
    sub,
    mul,
    div,
    pow,
    neg,
    sin,
    cos,
    tan,
    sinh,
    cosh,
    tanh,
    exp,
    log,
    sqrt,
    atan,
};

struct expr_node;
using expr = std::shared_ptr<const expr_node>;

/// Immutable expression tree over one or more named variables.
struct expr_node {
    expr_op op;
    double value = 0.0;  // number
    int var = -1;        // variable index into the declared name list
    expr a, b;           // children (b only for binary ops)
};

inline expr make_number(double v) {
    auto n = std::make_shared<expr_node>();
    n->op = expr_op::number;
    n->value = v;
    return n;
}

inline expr make_variable(int index) {
    auto n = std::make_shared<expr_node>();
    n->op = expr_op::variable;
    n->var = index;
    return n;
}

inline expr make_unary(expr_op op, expr a) {
    auto n = std::make_shared<expr_node>();
    n->op = op;
    n->a = std::move(a);
    return n;
}

inline expr make_binary(expr_op op, expr a, expr b) {
    auto n = std::make_shared<expr_node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

inline bool is_number(const expr& e, double v) {
    return e->op == expr_op::number && e->value == v;
}

// Constant-folding constructors keep derivative trees from drowning in
// 0*x and x^1 noise. No other simplification is attempted.
inline expr fold_add(expr a, expr b) {
    if (a->op == expr_op::number && b->op == expr_op::number) return make_number(a->value + b->value);
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    return make_binary(expr_op::add, std::move(a), std::move(b));
}

inline expr fold_sub(expr a, expr b) {
    if (a->op == expr_op::number && b->op == expr_op::number) return make_number(a->value - b->value);
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return make_unary(expr_op::neg, std::move(b));
    return make_binary(expr_op::sub, std::move(a), std::move(b));
}

inline expr fold_mul(expr a, expr b) {
    if (a->op == expr_op::number && b->op == expr_op::number) return make_number(a->value * b->value);
    if (is_number(a, 0.0) || is_number(b, 0.0)) return make_number(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    return make_binary(expr_op::mul, std::move(a), std::move(b));
}

inline expr fold_div(expr a, expr b) {
    if (is_number(a, 0.0)) return make_number(0.0);
    if (is_number(b, 1.0)) return a;
    return make_binary(expr_op::div, std::move(a), std::move(b));
}

inline expr fold_pow(expr a, expr b) {
    if (is_number(b, 1.0)) return a;
    if (is_number(b, 0.0)) return make_number(1.0);
    return make_binary(expr_op::pow, std::move(a), std::move(b));
}

namespace detail {

struct function_entry {
    std::string_view name;
    expr_op op;
};

inline constexpr std::array<function_entry, 10> functions = {{
    {"sin", expr_op::sin},
    {"cos", expr_op::cos},
    {"tan", expr_op::tan},
    {"sinh", expr_op::sinh},
    {"cosh", expr_op::cosh},
    {"tanh", expr_op::tanh},
    {"exp", expr_op::exp},
    {"log", expr_op::log},
    {"sqrt", expr_op::sqrt},
    {"atan", expr_op::atan},
}};

/// Recursive-descent parser. Precedence ^ > unary- > */ > +-, with ^
/// right-associative and everything else left-associative.
class parser {
public:
    parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

    expr parse() {
        expr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) throw syntax_error(pos_, "end of input or operator");
        return e;
    }

private:
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

    expr parse_sum() {
        expr e = parse_term();
        for (;;) {
            if (eat('+'))
                e = make_binary(expr_op::add, e, parse_term());
            else if (eat('-'))
                e = make_binary(expr_op::sub, e, parse_term());
            else
                return e;
        }
    }

    expr parse_term() {
        expr e = parse_unary();
        for (;;) {
            if (eat('*'))
                e = make_binary(expr_op::mul, e, parse_unary());
            else if (eat('/'))
                e = make_binary(expr_op::div, e, parse_unary());
            else
                return e;
        }
    }

    expr parse_unary() {
        if (eat('-')) return make_unary(expr_op::neg, parse_unary());
        return parse_power();
    }

    expr parse_power() {
        expr base = parse_atom();
        if (eat('^')) return make_binary(expr_op::pow, base, parse_unary());
        return base;
    }

    expr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw syntax_error(pos_, "number, variable, function or '('");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            expr e = parse_sum();
            if (!eat(')')) throw syntax_error(pos_, "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw syntax_error(pos_, "number, variable, function or '('");
    }

    expr parse_number() {
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc()) throw syntax_error(pos_, "numeric literal");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return make_number(v);
    }

    expr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) return make_variable(static_cast<int>(i));
        for (const auto& fn : functions) {
            if (fn.name == name) {
                if (!eat('(')) throw syntax_error(pos_, "'(' after function name");
                expr arg = parse_sum();
                if (!eat(')')) throw syntax_error(pos_, "')'");
                return make_unary(fn.op, arg);
            }
        }
        throw unknown_identifier(start, std::string(name));
    }

    std::string_view src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse `src` over the declared variable names.
inline expr parse_expr(std::string_view src, const std::vector<std::string>& vars) {
    return detail::parser(src, vars).parse();
}

/// Exact symbolic partial derivative with respect to variable index `var`.
inline expr diff_expr(const expr& e, int var) {
    switch (e->op) {
        case expr_op::number: return make_number(0.0);
        case expr_op::variable: return make_number(e->var == var ? 1.0 : 0.0);
        case expr_op::add: return fold_add(diff_expr(e->a, var), diff_expr(e->b, var));
        case expr_op::sub: return fold_sub(diff_expr(e->a, var), diff_expr(e->b, var));
        case expr_op::mul:
            return fold_add(fold_mul(diff_expr(e->a, var), e->b), fold_mul(e->a, diff_expr(e->b, var)));
        case expr_op::div: {
            expr num = fold_sub(fold_mul(diff_expr(e->a, var), e->b), fold_mul(e->a, diff_expr(e->b, var)));
            return fold_div(num, fold_pow(e->b, make_number(2.0)));
        }
        case expr_op::pow: {
            expr da = diff_expr(e->a, var);
            if (e->b->op == expr_op::number) {
                double r = e->b->value;
                return fold_mul(make_number(r), fold_mul(fold_pow(e->a, make_number(r - 1.0)), da));
            }
            // a^b = exp(b log a):  (a^b)' = a^b (b' log a + b a'/a)
            expr db = diff_expr(e->b, var);
            expr t1 = fold_mul(db, make_unary(expr_op::log, e->a));
            expr t2 = fold_div(fold_mul(e->b, da), e->a);
            return fold_mul(e, fold_add(t1, t2));
        }
        case expr_op::neg: return fold_sub(make_number(0.0), diff_expr(e->a, var));
        case expr_op::sin: return fold_mul(make_unary(expr_op::cos, e->a), diff_expr(e->a, var));
        case expr_op::cos:
            return fold_sub(make_number(0.0), fold_mul(make_unary(expr_op::sin, e->a), diff_expr(e->a, var)));
        case expr_op::tan: {
            expr sec2 = fold_add(make_number(1.0), fold_pow(e, make_number(2.0)));
            return fold_mul(sec2, diff_expr(e->a, var));
        }
        case expr_op::sinh: return fold_mul(make_unary(expr_op::cosh, e->a), diff_expr(e->a, var));
        case expr_op::cosh: return fold_mul(make_unary(expr_op::sinh, e->a), diff_expr(e->a, var));
        case expr_op::tanh: {
            expr sech2 = fold_sub(make_number(1.0), fold_pow(e, make_number(2.0)));
            return fold_mul(sech2, diff_expr(e->a, var));
        }
        case expr_op::exp: return fold_mul(e, diff_expr(e->a, var));
        case expr_op::log: return fold_div(diff_expr(e->a, var), e->a);
        case expr_op::sqrt: return fold_div(diff_expr(e->a, var), fold_mul(make_number(2.0), e));
        case expr_op::atan:
            return fold_div(diff_expr(e->a, var),
                            fold_add(make_number(1.0), fold_pow(e->a, make_number(2.0))));
    }
    throw internal_error("diff_expr: unhandled node");
}

inline bool structurally_equal(const expr& x, const expr& y) {
    if (x->op != y->op) return false;
    switch (x->op) {
        case expr_op::number: return x->value == y->value;
        case expr_op::variable: return x->var == y->var;
        default: break;
    }
    if (static_cast<bool>(x->a) != static_cast<bool>(y->a)) return false;
    if (static_cast<bool>(x->b) != static_cast<bool>(y->b)) return false;
    if (x->a && !structurally_equal(x->a, y->a)) return false;
    if (x->b && !structurally_equal(x->b, y->b)) return false;
    return true;
}

namespace detail {

inline int precedence(expr_op op) {
    switch (op) {
        case expr_op::add:
        case expr_op::sub: return 1;
        case expr_op::mul:
        case expr_op::div: return 2;
        case expr_op::neg: return 3;
        case expr_op::pow: return 4;
        default: return 5;
    }
}

inline std::string_view function_name(expr_op op) {
    for (const auto& fn : functions)
        if (fn.op == op) return fn.name;
    return {};
}

inline void print_number(std::string& out, double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    out.append(buf, ptr);
}

inline void print(std::string& out, const expr& e, int parent_prec, bool right_side) {
    int prec = precedence(e->op);
    // - and / are left-associative; a right child at equal precedence needs parens
    bool need = prec < parent_prec || (prec == parent_prec && right_side &&
                                       (e->op == expr_op::add || e->op == expr_op::sub ||
                                        e->op == expr_op::mul || e->op == expr_op::div));
    switch (e->op) {
        case expr_op::number:
            if (e->value < 0.0) {
                out.push_back('(');
                print_number(out, e->value);
                out.push_back(')');
            } else {
                print_number(out, e->value);
            }
            return;
        case expr_op::variable: out += "v"; out += std::to_string(e->var); return;
        case expr_op::add:
        case expr_op::sub:
        case expr_op::mul:
        case expr_op::div:
        case expr_op::pow: {
            if (need) out.push_back('(');
            // ^ is right-associative: parenthesize an equal-precedence left child
            print(out, e->a, prec + (e->op == expr_op::pow ? 1 : 0), false);
            switch (e->op) {
                case expr_op::add: out.push_back('+'); break;
                case expr_op::sub: out.push_back('-'); break;
                case expr_op::mul: out.push_back('*'); break;
                case expr_op::div: out.push_back('/'); break;
                default: out.push_back('^'); break;
            }
            print(out, e->b, prec + (e->op == expr_op::pow ? 0 : 1), true);
            if (need) out.push_back(')');
            return;
        }
        case expr_op::neg:
            if (need) out.push_back('(');
            out.push_back('-');
            print(out, e->a, prec, true);
            if (need) out.push_back(')');
            return;
        default:
            out += function_name(e->op);
            out.push_back('(');
            print(out, e->a, 0, false);
            out.push_back(')');
            return;
    }
}

}  // namespace detail

/// Render with variable names v0, v1, ...; parse_expr(print_expr(e), {"v0",...})
/// reproduces the tree structurally.
inline std::string print_expr(const expr& e) {
    std::string out;
    detail::print(out, e, 0, false);
    return out;
}

namespace detail {

template <class T>
T scalar_pow(const T& a, const expr& exponent);

template <>
inline double scalar_pow<double>(const double& a, const expr& exponent) {
    return std::pow(a, exponent->value);
}

template <>
inline jet scalar_pow<jet>(const jet& a, const expr& exponent) {
    double r = exponent->value;
    if (r == std::rint(r) && std::fabs(r) <= 1e9) return pow(a, static_cast<int>(r));
    return pow(a, r);
}

}  // namespace detail

/// Evaluate over any scalar supporting the arithmetic and the function set.
/// `values[i]` is the value bound to variable index i.
template <class T>
T eval(const expr& e, const std::vector<T>& values) {
    using std::atan;
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    using std::tan;
    using std::tanh;
    switch (e->op) {
        case expr_op::number: {
            if constexpr (std::is_same_v<T, jet>) {
                if (values.empty()) throw internal_error("eval<jet>: no variable to infer base from");
                return jet::constant(e->value, values[0].base(), values[0].order());
            } else {
                return e->value;
            }
        }
        case expr_op::variable: {
            if (e->var < 0 || static_cast<std::size_t>(e->var) >= values.size())
                throw internal_error("eval: unbound variable");
            return values[static_cast<std::size_t>(e->var)];
        }
        case expr_op::add: return eval(e->a, values) + eval(e->b, values);
        case expr_op::sub: return eval(e->a, values) - eval(e->b, values);
        case expr_op::mul: return eval(e->a, values) * eval(e->b, values);
        case expr_op::div: {
            T num = eval(e->a, values);
            T den = eval(e->b, values);
            if constexpr (std::is_same_v<T, double>) {
                if (den == 0.0) throw domain_error("division by zero");
            }
            return num / den;
        }
        case expr_op::pow: {
            T base = eval(e->a, values);
            if (e->b->op == expr_op::number) return detail::scalar_pow<T>(base, e->b);
            return pow(base, eval(e->b, values));
        }
        case expr_op::neg: return -eval(e->a, values);
        case expr_op::sin: return sin(eval(e->a, values));
        case expr_op::cos: return cos(eval(e->a, values));
        case expr_op::tan: return tan(eval(e->a, values));
        case expr_op::sinh: return sinh(eval(e->a, values));
        case expr_op::cosh: return cosh(eval(e->a, values));
        case expr_op::tanh: return tanh(eval(e->a, values));
        case expr_op::exp: return exp(eval(e->a, values));
        case expr_op::log: {
            T v = eval(e->a, values);
            if constexpr (std::is_same_v<T, double>) {
                if (v <= 0.0) throw domain_error("log of nonpositive value");
            }
            return log(v);
        }
        case expr_op::sqrt: {
            T v = eval(e->a, values);
            if constexpr (std::is_same_v<T, double>) {
                if (v < 0.0) throw domain_error("sqrt of negative value");
            }
            return sqrt(v);
        }
        case expr_op::atan: return atan(eval(e->a, values));
    }
    throw internal_error("eval: unhandled node");
}

/// Evaluate along one jet variable with the remaining variables held at real
/// values: the real assignments are broadcast to constant jets.
inline jet eval_jet(const expr& e, const std::vector<jet>& values) {
    return eval<jet>(e, values);
}

/// Mixed assignment form: real entries broadcast to constant jets at the
/// common base point and order of the jet entries (which must agree).
inline jet eval_jet_mixed(const expr& e, const std::vector<std::variant<double, jet>>& assignments) {
    double base = 0.0;
    int order = -1;
    for (const auto& a : assignments) {
        if (const jet* j = std::get_if<jet>(&a)) {
            if (order >= 0 && (j->base() != base || j->order() != order))
                throw domain_error("jet assignments must share base point and order");
            base = j->base();
            order = j->order();
        }
    }
    if (order < 0) throw domain_error("eval_jet needs at least one jet assignment");
    std::vector<jet> values;
    values.reserve(assignments.size());
    for (const auto& a : assignments) {
        if (const jet* j = std::get_if<jet>(&a))
            values.push_back(*j);
        else
            values.push_back(jet::constant(std::get<double>(a), base, order));
    }
    return eval<jet>(e, values);
}

inline double eval_real(const expr& e, const std::vector<double>& values) {
    return eval<double>(e, values);
}

}  // namespace ldx
