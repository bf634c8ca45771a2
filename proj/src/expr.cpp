#include "cubicalc/expr.hpp"

#include <cctype>
#include <sstream>

namespace cubicalc::expr {

ExprPtr make_num(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Num;
    e->num = v;
    return e;
}

ExprPtr make_var(char family, int index) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Var;
    e->var = {family, index};
    return e;
}

ExprPtr make_bin(Expr::Kind k, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

ExprPtr make_neg(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Neg;
    e->a = std::move(a);
    return e;
}

ExprPtr make_call(Fn f, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Call;
    e->fn = f;
    e->a = std::move(a);
    return e;
}

// --- parser -------------------------------------------------------------------

namespace {

struct Parser {
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = make_bin(Expr::Add, lhs, parse_term());
            else if (eat('-'))
                lhs = make_bin(Expr::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            if (eat('*'))
                lhs = make_bin(Expr::Mul, lhs, parse_unary());
            else if (eat('/'))
                lhs = make_bin(Expr::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    ExprPtr parse_unary() {
        if (eat('-')) return make_neg(parse_unary());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (eat('^')) return make_bin(Expr::Pow, base, parse_unary());  // right-assoc, unary exponents allowed
        return base;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos >= s.size()) throw ParseError(pos, "unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            ExprPtr e = parse_expr();
            if (!eat(')')) throw ParseError(pos, "expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw ParseError(pos, std::string("unexpected character '") + c + "'");
    }

    ExprPtr parse_number() {
        size_t start = pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' || s[pos] == 'e' || s[pos] == 'E' ||
                ((s[pos] == '+' || s[pos] == '-') && pos > start && (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
            ++pos;
        try {
            return make_num(std::stod(std::string(s.substr(start, pos - start))));
        } catch (const std::exception&) {
            throw ParseError(start, "malformed number");
        }
    }

    ExprPtr parse_ident() {
        size_t start = pos;
        while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
        std::string name(s.substr(start, pos - start));
        static const std::pair<const char*, Fn> fns[] = {{"sin", Fn::Sin},   {"cos", Fn::Cos},  {"exp", Fn::Exp},
                                                         {"log", Fn::Log},   {"sqrt", Fn::Sqrt}, {"tanh", Fn::Tanh}};
        for (auto& [nm, fn] : fns)
            if (name == nm) {
                if (!eat('(')) throw ParseError(pos, "expected '(' after function name");
                ExprPtr arg = parse_expr();
                if (!eat(')')) throw ParseError(pos, "expected ')'");
                return make_call(fn, arg);
            }
        if ((name == "x" || name == "t") && pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            size_t dstart = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            int idx = std::stoi(std::string(s.substr(dstart, pos - dstart)));
            if (idx < 1) throw ParseError(dstart, "variable index must be >= 1");
            return make_var(name[0], idx);
        }
        throw ParseError(start, "unknown identifier '" + name + "'");
    }
};

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sqrt: return "sqrt";
        case Fn::Tanh: return "tanh";
    }
    return "?";
}

int precedence(Expr::Kind k) {
    switch (k) {
        case Expr::Add:
        case Expr::Sub: return 1;
        case Expr::Mul:
        case Expr::Div: return 2;
        case Expr::Neg: return 3;
        case Expr::Pow: return 4;
        default: return 5;
    }
}

void print(const ExprPtr& e, std::ostringstream& os, int parent_prec) {
    int prec = precedence(e->kind);
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    switch (e->kind) {
        case Expr::Num: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << e->num;
            os << tmp.str();
            break;
        }
        case Expr::Var: os << e->var.family << e->var.index; break;
        case Expr::Add:
            print(e->a, os, prec);
            os << " + ";
            print(e->b, os, prec + 1);
            break;
        case Expr::Sub:
            print(e->a, os, prec);
            os << " - ";
            print(e->b, os, prec + 1);
            break;
        case Expr::Mul:
            print(e->a, os, prec);
            os << "*";
            print(e->b, os, prec + 1);
            break;
        case Expr::Div:
            print(e->a, os, prec);
            os << "/";
            print(e->b, os, prec + 1);
            break;
        case Expr::Neg:
            os << "-";
            print(e->a, os, prec);
            break;
        case Expr::Pow:
            print(e->a, os, prec + 1);
            os << "^";
            print(e->b, os, prec);
            break;
        case Expr::Call:
            os << fn_name(e->fn) << "(";
            print(e->a, os, 0);
            os << ")";
            break;
    }
    if (paren) os << ")";
}

}  // namespace

ExprPtr parse(std::string_view text) {
    Parser p{text};
    ExprPtr e = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError(p.pos, "trailing input");
    return e;
}

std::string to_string(const ExprPtr& e) {
    std::ostringstream os;
    print(e, os, 0);
    return os.str();
}

ExprPtr scale_time_var(const ExprPtr& e, int index, double divisor) {
    switch (e->kind) {
        case Expr::Num: return e;
        case Expr::Var:
            if (e->var.family == 't' && e->var.index == index)
                return make_bin(Expr::Div, e, make_num(divisor));
            return e;
        case Expr::Neg: return make_neg(scale_time_var(e->a, index, divisor));
        case Expr::Call: return make_call(e->fn, scale_time_var(e->a, index, divisor));
        default:
            return make_bin(e->kind, scale_time_var(e->a, index, divisor), scale_time_var(e->b, index, divisor));
    }
}

ExprPtr multiply_by(const ExprPtr& e, double factor) { return make_bin(Expr::Mul, make_num(factor), e); }

// --- dual arithmetic -------------------------------------------------------------

Dual2 operator+(const Dual2& x, const Dual2& y) { return {x.v + y.v, x.da + y.da, x.db + y.db, x.dab + y.dab}; }
Dual2 operator-(const Dual2& x, const Dual2& y) { return {x.v - y.v, x.da - y.da, x.db - y.db, x.dab - y.dab}; }
Dual2 operator-(const Dual2& x) { return {-x.v, -x.da, -x.db, -x.dab}; }

Dual2 operator*(const Dual2& x, const Dual2& y) {
    return {x.v * y.v, x.da * y.v + x.v * y.da, x.db * y.v + x.v * y.db,
            x.dab * y.v + x.da * y.db + x.db * y.da + x.v * y.dab};
}

Dual2 operator/(const Dual2& x, const Dual2& y) {
    if (y.v == 0) throw DomainError("division by zero");
    Dual2 inv = chain(y, 1.0 / y.v, -1.0 / (y.v * y.v), 2.0 / (y.v * y.v * y.v));
    return x * inv;
}

Dual2 sin(const Dual2& x) { return chain(x, std::sin(x.v), std::cos(x.v), -std::sin(x.v)); }
Dual2 cos(const Dual2& x) { return chain(x, std::cos(x.v), -std::sin(x.v), -std::cos(x.v)); }
Dual2 exp(const Dual2& x) {
    double e = std::exp(x.v);
    return chain(x, e, e, e);
}
Dual2 log(const Dual2& x) {
    if (x.v <= 0) throw DomainError("log of non-positive value");
    return chain(x, std::log(x.v), 1.0 / x.v, -1.0 / (x.v * x.v));
}
Dual2 sqrt(const Dual2& x) {
    if (x.v < 0) throw DomainError("sqrt of negative value");
    if (x.v == 0) throw DomainError("sqrt derivative singular at zero");
    double r = std::sqrt(x.v);
    return chain(x, r, 0.5 / r, -0.25 / (r * x.v));
}
Dual2 tanh(const Dual2& x) {
    double t = std::tanh(x.v);
    double sech2 = 1.0 - t * t;
    return chain(x, t, sech2, -2.0 * t * sech2);
}

Dual2 pow(const Dual2& x, const Dual2& y) {
    // Constant integer exponents work for any base; otherwise via exp(y log x).
    if (y.da == 0 && y.db == 0 && y.dab == 0 && y.v == std::floor(y.v) && std::abs(y.v) <= 64) {
        long n = long(y.v);
        if (n == 0) return Dual2{1.0};
        bool invert = n < 0;
        n = std::abs(n);
        Dual2 r{1.0};
        for (long t = 0; t < n; ++t) r = r * x;
        if (invert) return Dual2{1.0} / r;
        return r;
    }
    if (x.v <= 0) throw DomainError("pow with non-positive base and non-integer exponent");
    return exp(y * log(x));
}

Dual2 abs_smooth(const Dual2& x) {
    if (x.v == 0) throw DomainError("abs not differentiable at zero");
    return x.v > 0 ? x : -x;
}

// --- evaluation -------------------------------------------------------------------

namespace {

Dual2 eval_rec(const Expr* e, const Point& p, const VarRef& a, const VarRef& b) {
    switch (e->kind) {
        case Expr::Num: return Dual2{e->num};
        case Expr::Var: {
            double sa = e->var == a ? 1.0 : 0.0;
            double sb = e->var == b ? 1.0 : 0.0;
            return Dual2::seed(p.get(e->var), sa, sb);
        }
        case Expr::Add: return eval_rec(e->a.get(), p, a, b) + eval_rec(e->b.get(), p, a, b);
        case Expr::Sub: return eval_rec(e->a.get(), p, a, b) - eval_rec(e->b.get(), p, a, b);
        case Expr::Mul: return eval_rec(e->a.get(), p, a, b) * eval_rec(e->b.get(), p, a, b);
        case Expr::Div: return eval_rec(e->a.get(), p, a, b) / eval_rec(e->b.get(), p, a, b);
        case Expr::Pow: return pow(eval_rec(e->a.get(), p, a, b), eval_rec(e->b.get(), p, a, b));
        case Expr::Neg: return -eval_rec(e->a.get(), p, a, b);
        case Expr::Call:
            switch (e->fn) {
                case Fn::Sin: return sin(eval_rec(e->a.get(), p, a, b));
                case Fn::Cos: return cos(eval_rec(e->a.get(), p, a, b));
                case Fn::Exp: return exp(eval_rec(e->a.get(), p, a, b));
                case Fn::Log: return log(eval_rec(e->a.get(), p, a, b));
                case Fn::Sqrt: return sqrt(eval_rec(e->a.get(), p, a, b));
                case Fn::Tanh: return tanh(eval_rec(e->a.get(), p, a, b));
            }
    }
    throw std::logic_error("unreachable expression kind");
}

}  // namespace

Dual2 eval_dual(const ExprPtr& e, const Point& p, const VarRef& a, const VarRef& b) {
    return eval_rec(e.get(), p, a, b);
}

double eval(const ExprPtr& e, const Point& p) {
    return eval_rec(e.get(), p, VarRef{'x', 0}, VarRef{'x', 0}).v;
}

double d1(const ExprPtr& e, const VarRef& v, const Point& p) {
    return eval_rec(e.get(), p, v, VarRef{'x', 0}).da;
}

double d2(const ExprPtr& e, const VarRef& v1, const VarRef& v2, const Point& p) {
    return eval_rec(e.get(), p, v1, v2).dab;
}

}  // namespace cubicalc::expr
